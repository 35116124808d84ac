#include <doctest.h>

#include <cmath>
#include <random>

#include "core/correlation.hpp"
#include "core/features.hpp"
#include "oracles.hpp"

using namespace tacf;

TEST_CASE("fft2 of a delta map is flat") {
  MapF m(4, 4, 0.0);
  m.at(0, 0) = 1.0;
  Spectrum s = fft2(m);
  for (const auto& v : s.v) {
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("fft2 of a constant map is a DC spike") {
  const double c = 0.73;
  MapF m(4, 4, c);
  Spectrum s = fft2(m);
  CHECK(s.at(0, 0).real() == doctest::Approx(16 * c).epsilon(1e-12));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == 0 && j == 0) continue;
      CHECK(std::abs(s.at(i, j)) == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("fft2 satisfies Parseval under the unnormalized-forward convention") {
  std::mt19937_64 rng(59);
  MapF m = oracle::random_map(rng, 8, 8);
  Spectrum s = fft2(m);
  double spatial = 0.0, spectral = 0.0;
  for (double v : m.v) spatial += v * v;
  for (const auto& v : s.v) spectral += std::norm(v);
  CHECK(spatial == doctest::Approx(spectral / 64.0).epsilon(1e-12));
}

TEST_CASE("ifft2(fft2(m)) == m within 1e-9 relative") {
  std::mt19937_64 rng(61);
  for (auto [h, w] : {std::pair{8, 8}, {5, 7}, {1, 9}, {16, 4}}) {
    MapF m = oracle::random_map(rng, h, w, -1.0, 1.0);
    MapF r = ifft2(fft2(m));
    for (size_t i = 0; i < m.size(); ++i) {
      CHECK(r.v[i] == doctest::Approx(m.v[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("self kernel correlation peaks at one") {
  std::mt19937_64 rng(67);
  MapF x = oracle::random_map(rng, 8, 8);
  MapF k = kernel_correlation(x, x, 0.5);
  CHECK(k.at(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  for (double v : k.v) {
    CHECK(v > 0.0);
    CHECK(v <= k.at(0, 0) + 1e-12);
  }
}

TEST_CASE("spectrally disjoint unit-energy inputs give a uniform kernel") {
  const int n = 8;
  MapF x(n, n), z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      x.at(i, j) = std::cos(2 * M_PI * i / n);
      z.at(i, j) = std::cos(2 * M_PI * 2.0 * j / n);
    }
  }
  auto normalize = [](MapF& m) {
    double e = 0.0;
    for (double v : m.v) e += v * v;
    for (double& v : m.v) v /= std::sqrt(e);
  };
  normalize(x);
  normalize(z);
  MapF k = kernel_correlation(x, z, 0.5);
  const double expect = std::exp(-2.0 / (0.25 * n * n));
  for (double v : k.v) {
    CHECK(v == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("gaussian kernel matches brute force over all shifts") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    MapF x = oracle::random_map(rng, 8, 8, -0.5, 0.5);
    MapF z = oracle::random_map(rng, 8, 8, -0.5, 0.5);
    MapF k = kernel_correlation(x, z, 0.5);
    MapF ref = oracle::brute_gaussian_kernel(x, z, 0.5);
    for (size_t i = 0; i < k.size(); ++i) {
      CHECK(k.v[i] == doctest::Approx(ref.v[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("kernel correlation argument-swap symmetry") {
  std::mt19937_64 rng(73);
  MapF x = oracle::random_map(rng, 6, 9);
  MapF z = oracle::random_map(rng, 6, 9);
  MapF a = kernel_correlation(x, z, 0.5);
  MapF b = kernel_correlation(z, x, 0.5);
  for (int i = 0; i < a.h; ++i) {
    for (int j = 0; j < a.w; ++j) {
      const int ni = (a.h - i) % a.h;
      const int nj = (a.w - j) % a.w;
      CHECK(a.at(i, j) == doctest::Approx(b.at(ni, nj)).epsilon(1e-10));
    }
  }
}

TEST_CASE("linear correlation equals spatial brute force") {
  std::mt19937_64 rng(79);
  MapF x = oracle::random_map(rng, 16, 16, -1.0, 1.0);
  MapF z = oracle::random_map(rng, 16, 16, -1.0, 1.0);
  MapF fast = linear_correlation(x, z);
  MapF ref = oracle::brute_cross_correlation(x, z);
  for (size_t i = 0; i < fast.size(); ++i) {
    CHECK(fast.v[i] == doctest::Approx(ref.v[i]).epsilon(1e-6));
  }
}

TEST_CASE("circular shift equivariance of kernel and response") {
  std::mt19937_64 rng(83);
  MapF x = oracle::random_map(rng, 8, 8);
  MapF z = oracle::random_map(rng, 8, 8);
  Spectrum filt = fft2(oracle::random_map(rng, 8, 8, -1.0, 1.0));
  const int dy = 3, dx = 5;

  MapF k0 = kernel_correlation(z, x, 0.5);
  MapF r0 = correlate(filt, k0);

  // Shifting the test sample (first argument) shifts kernel and response
  // with it; shifting the template (second argument) shifts them backwards.
  MapF k1 = kernel_correlation(circshift(z, dy, dx), x, 0.5);
  MapF r1 = correlate(filt, k1);
  MapF k2 = kernel_correlation(z, circshift(x, dy, dx), 0.5);

  MapF k0s = circshift(k0, dy, dx);
  MapF r0s = circshift(r0, dy, dx);
  MapF k0b = circshift(k0, -dy, -dx);
  for (size_t i = 0; i < k0.size(); ++i) {
    CHECK(k1.v[i] == doctest::Approx(k0s.v[i]).epsilon(1e-10));
    CHECK(r1.v[i] == doctest::Approx(r0s.v[i]).epsilon(1e-10));
    CHECK(k2.v[i] == doctest::Approx(k0b.v[i]).epsilon(1e-10));
  }
}

TEST_CASE("correlate with an all-ones filter returns the kernel vector") {
  std::mt19937_64 rng(89);
  MapF k = oracle::random_map(rng, 8, 8);
  Spectrum ones(8, 8);
  for (auto& v : ones.v) v = 1.0;
  MapF r = correlate(ones, k);
  for (size_t i = 0; i < k.size(); ++i) {
    CHECK(r.v[i] == doctest::Approx(k.v[i]).epsilon(1e-12));
  }
}

TEST_CASE("correlate maps a zero kernel vector to a zero response") {
  std::mt19937_64 rng(97);
  Spectrum filt = fft2(oracle::random_map(rng, 8, 8));
  MapF zero(8, 8, 0.0);
  MapF r = correlate(filt, zero);
  for (double v : r.v) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("near-zero ridge closes the training loop: response approximates the label") {
  std::mt19937_64 rng(101);
  MapF x = energy_normalize(oracle::random_map(rng, 16, 16));
  MapF label = gaussian_label(16, 16, 0.1);
  Spectrum yhat = fft2(label);
  MapF k = kernel_correlation(x, x, 0.5);
  Spectrum khat = fft2(k);
  Spectrum filt(16, 16);
  const double lambda = 1e-12;
  for (size_t b = 0; b < khat.size(); ++b) {
    filt.v[b] = khat.v[b] * yhat.v[b] / (std::norm(khat.v[b]) + lambda);
  }
  MapF resp = correlate(filt, k);
  double max_diff = 0.0;
  for (size_t i = 0; i < resp.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(resp.v[i] - label.v[i]));
  }
  CHECK(max_diff <= 1e-3);
}

TEST_CASE("shape mismatches are rejected") {
  MapF a(4, 4), b(4, 5);
  CHECK_THROWS_AS(kernel_correlation(a, b, 0.5), Error);
  CHECK_THROWS_AS(linear_correlation(a, b), Error);
  CHECK_THROWS_AS(correlate(fft2(a), b), Error);
}
