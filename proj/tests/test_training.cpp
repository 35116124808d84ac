#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>

#include "core/features.hpp"
#include "core/tracker.hpp"
#include "core/training.hpp"
#include "oracles.hpp"

using namespace tacf;

namespace {

FeatureMap random_features(std::mt19937_64& rng, int h, int w, int d) {
  FeatureMap f;
  f.h = h;
  f.w = w;
  f.cell_size = 1;
  for (int n = 0; n < d; ++n) {
    f.channels.push_back(oracle::random_map(rng, h, w, -0.5, 0.5));
  }
  return f;
}

FeatureMap scalar_features(double value) {
  FeatureMap f;
  f.h = f.w = 1;
  f.cell_size = 1;
  f.channels.push_back(MapF(1, 1, value));
  return f;
}

}  // namespace

TEST_CASE("scalar closed form without context: 1/(1+1) = 0.5") {
  // On a 1x1 grid the normalized self-kernel is exactly 1.
  FilterBank bank = train_plain(scalar_features(3.0), MapF(1, 1, 1.0), 1.0, 0.5);
  REQUIRE(bank.d == 1);
  CHECK(bank.filters[0].at(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bank.filters[0].at(0, 0).imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scalar closed form with one context patch: 1/2.1") {
  std::vector<std::vector<MapF>> kernels{{MapF(1, 1, 1.0)}};
  TrainContext ctx = make_train_context(std::move(kernels), {1.0}, 1.0);
  FilterBank bank =
      train_with_context(scalar_features(2.0), ctx, MapF(1, 1, 1.0), 0.1, 0.5);
  CHECK(bank.filters[0].at(0, 0).real() == doctest::Approx(1.0 / 2.1).epsilon(1e-12));
}

TEST_CASE("filters equal the closed form built from brute-force kernels") {
  std::mt19937_64 rng(103);
  FeatureMap obj = random_features(rng, 8, 8, 2);
  MapF label = gaussian_label(8, 8, 0.1);
  const double lambda1 = 5e-5, lambda2 = 0.0625, sigma = 0.5;

  const int s_count = 3;
  std::vector<std::vector<MapF>> kernels(s_count);
  std::vector<FeatureMap> ctx_feats;
  for (int s = 0; s < s_count; ++s) {
    ctx_feats.push_back(random_features(rng, 8, 8, 2));
    for (int n = 0; n < 2; ++n) {
      MapF zn = energy_normalize(ctx_feats[s].channels[n]);
      kernels[s].push_back(oracle::brute_gaussian_kernel(zn, zn, sigma));
    }
  }
  std::vector<double> p = {0.5, 0.3, 0.2};
  TrainContext ctx = make_train_context(kernels, p, lambda2);
  FilterBank bank = train_with_context(obj, ctx, label, lambda1, sigma);

  Spectrum yhat = fft2(label);
  for (int n = 0; n < 2; ++n) {
    MapF xn = energy_normalize(obj.channels[n]);
    Spectrum k0 = fft2(oracle::brute_gaussian_kernel(xn, xn, sigma));
    for (size_t b = 0; b < k0.size(); ++b) {
      double denom = std::norm(k0.v[b]) + lambda1;
      for (int s = 0; s < s_count; ++s) {
        const double ps = std::sqrt(lambda2) * p[s];
        denom += ps * ps * std::norm(fft2(kernels[s][n]).v[b]);
      }
      const std::complex<double> expect = k0.v[b] * yhat.v[b] / denom;
      CHECK(std::abs(bank.filters[n].at(b / 8, b % 8) - expect) <= 1e-6);
    }
  }
}

TEST_CASE("zero context weight reduces exactly to plain training") {
  std::mt19937_64 rng(107);
  FeatureMap obj = random_features(rng, 8, 8, 3);
  MapF label = gaussian_label(8, 8, 0.1);

  std::vector<std::vector<MapF>> kernels(4);
  for (int s = 0; s < 4; ++s) {
    for (int n = 0; n < 3; ++n) {
      MapF zn = energy_normalize(oracle::random_map(rng, 8, 8));
      kernels[s].push_back(kernel_correlation(zn, zn, 0.5));
    }
  }
  TrainContext ctx = make_train_context(kernels, {0.25, 0.25, 0.25, 0.25}, 0.0);
  FilterBank with = train_with_context(obj, ctx, label, 5e-5, 0.5);
  FilterBank plain = train_plain(obj, label, 5e-5, 0.5);
  for (int n = 0; n < 3; ++n) {
    for (size_t b = 0; b < with.filters[n].size(); ++b) {
      CHECK(with.filters[n].v[b] == plain.filters[n].v[b]);
    }
  }
}

TEST_CASE("raising a context penalty weakly damps every filter bin") {
  std::mt19937_64 rng(109);
  FeatureMap obj = random_features(rng, 8, 8, 1);
  MapF label = gaussian_label(8, 8, 0.1);
  MapF zn = energy_normalize(oracle::random_map(rng, 8, 8));
  std::vector<std::vector<MapF>> kernels{{kernel_correlation(zn, zn, 0.5)}};

  TrainContext weak = make_train_context(kernels, {0.2}, 0.0625);
  TrainContext strong = make_train_context(kernels, {0.9}, 0.0625);
  FilterBank a = train_with_context(obj, weak, label, 5e-5, 0.5);
  FilterBank b = train_with_context(obj, strong, label, 5e-5, 0.5);
  for (size_t i = 0; i < a.filters[0].size(); ++i) {
    CHECK(std::abs(b.filters[0].v[i]) <= std::abs(a.filters[0].v[i]) + 1e-15);
  }
}

TEST_CASE("infinite regularization kills the filters") {
  std::mt19937_64 rng(113);
  FeatureMap obj = random_features(rng, 8, 8, 2);
  FilterBank bank = train_plain(obj, gaussian_label(8, 8, 0.1), 1e12, 0.5);
  for (const Spectrum& f : bank.filters) {
    for (const auto& v : f.v) {
      CHECK(std::abs(v) <= 1e-9);
    }
  }
}

TEST_CASE("self detection peaks at the origin") {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 3; ++trial) {
    FeatureMap obj = random_features(rng, 16, 16, 2);
    FilterBank bank = train_plain(obj, gaussian_label(16, 16, 0.1), 5e-5, 0.5);
    ResponseStack stack = detect_responses(bank, obj, 0.5);
    MapF sum(16, 16, 0.0);
    for (const MapF& r : stack) {
      for (size_t i = 0; i < sum.size(); ++i) sum.v[i] += r.v[i];
    }
    size_t arg = 0;
    for (size_t i = 1; i < sum.size(); ++i) {
      if (sum.v[i] > sum.v[arg]) arg = i;
    }
    CHECK(arg == 0);
  }
}

TEST_CASE("closed form beats random perturbations on the objective") {
  std::mt19937_64 rng(131);
  FeatureMap obj = random_features(rng, 8, 8, 1);
  MapF label = gaussian_label(8, 8, 0.1);
  const double lambda1 = 5e-5, lambda2 = 0.0625, sigma = 0.5;
  std::vector<std::vector<MapF>> kernels(2);
  std::vector<double> p = {0.7, 0.3};
  for (int s = 0; s < 2; ++s) {
    MapF zn = energy_normalize(oracle::random_map(rng, 8, 8));
    kernels[s].push_back(kernel_correlation(zn, zn, sigma));
  }
  TrainContext ctx = make_train_context(kernels, p, lambda2);
  FilterBank bank = train_with_context(obj, ctx, label, lambda1, sigma);

  MapF xn = energy_normalize(obj.channels[0]);
  Spectrum k0 = fft2(kernel_correlation(xn, xn, sigma));
  std::vector<Spectrum> ks;
  std::vector<double> ps;
  for (int s = 0; s < 2; ++s) {
    ks.push_back(fft2(kernels[s][0]));
    ps.push_back(std::sqrt(lambda2) * p[s]);
  }
  Spectrum yhat = fft2(label);
  const double base =
      oracle::channel_objective(bank.filters[0], k0, ks, ps, yhat, lambda1);
  for (int trial = 0; trial < 50; ++trial) {
    Spectrum w = bank.filters[0];
    double norm = 0.0;
    std::vector<std::complex<double>> delta(w.size());
    for (auto& d : delta) {
      d = {oracle::urand(rng) - 0.5, oracle::urand(rng) - 0.5};
      norm += std::norm(d);
    }
    const double scale = 1e-3 / std::sqrt(norm);
    for (size_t b = 0; b < w.size(); ++b) w.v[b] += delta[b] * scale;
    CHECK(oracle::channel_objective(w, k0, ks, ps, yhat, lambda1) >= base);
  }
}

TEST_CASE("update_model endpoints and interpolation") {
  std::mt19937_64 rng(137);
  FeatureMap obj = random_features(rng, 4, 4, 2);
  MapF label = gaussian_label(4, 4, 0.2);
  FilterBank a = train_plain(obj, label, 5e-5, 0.5);
  FeatureMap obj2 = random_features(rng, 4, 4, 2);
  FilterBank b = train_plain(obj2, label, 5e-5, 0.5);

  FilterBank keep = update_model(a, b, 0.0);
  FilterBank take = update_model(a, b, 1.0);
  for (int n = 0; n < 2; ++n) {
    for (size_t i = 0; i < a.filters[n].size(); ++i) {
      CHECK(keep.filters[n].v[i] == a.filters[n].v[i]);
      CHECK(take.filters[n].v[i] == b.filters[n].v[i]);
    }
  }

  FilterBank mixed = update_model(a, b, 0.02);
  for (int n = 0; n < 2; ++n) {
    for (size_t i = 0; i < a.filters[n].size(); ++i) {
      const std::complex<double> expect =
          0.98 * a.filters[n].v[i] + 0.02 * b.filters[n].v[i];
      CHECK(std::abs(mixed.filters[n].v[i] - expect) <= 1e-15);
    }
    for (size_t i = 0; i < a.tmpl.channels[n].size(); ++i) {
      const double expect =
          0.98 * a.tmpl.channels[n].v[i] + 0.02 * b.tmpl.channels[n].v[i];
      CHECK(mixed.tmpl.channels[n].v[i] == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(update_model(a, b, -0.1), Error);
  CHECK_THROWS_AS(update_model(a, b, 1.5), Error);
}

TEST_CASE("scalar convex combination: 0.98") {
  FilterBank a = train_plain(scalar_features(1.0), MapF(1, 1, 1.0), 1.0, 0.5);
  FilterBank b = a;
  a.filters[0].at(0, 0) = 1.0;
  b.filters[0].at(0, 0) = 0.0;
  FilterBank m = update_model(a, b, 0.02);
  CHECK(m.filters[0].at(0, 0).real() == doctest::Approx(0.98).epsilon(1e-15));
}

TEST_CASE("invalid lambda1 is rejected") {
  std::mt19937_64 rng(139);
  FeatureMap obj = random_features(rng, 4, 4, 1);
  CHECK_THROWS_AS(train_plain(obj, gaussian_label(4, 4, 0.2), 0.0, 0.5), Error);
  CHECK_THROWS_AS(train_plain(obj, gaussian_label(4, 4, 0.2), -1.0, 0.5), Error);
}

TEST_CASE("filter bank snapshot round trip") {
  namespace fs = std::filesystem;
  std::mt19937_64 rng(149);
  FeatureMap obj = random_features(rng, 8, 8, 3);
  FilterBank bank = train_plain(obj, gaussian_label(8, 8, 0.1), 5e-5, 0.5);
  const fs::path dir = fs::temp_directory_path() / "tacf_bank_test";
  fs::create_directories(dir);
  const std::string path = (dir / "bank.bin").string();
  save_filter_bank(bank, path);
  FilterBank loaded = load_filter_bank(path);
  REQUIRE(loaded.d == bank.d);
  for (int n = 0; n < bank.d; ++n) {
    for (size_t i = 0; i < bank.filters[n].size(); ++i) {
      CHECK(loaded.filters[n].v[i] == bank.filters[n].v[i]);
    }
    for (size_t i = 0; i < bank.tmpl.channels[n].size(); ++i) {
      CHECK(loaded.tmpl.channels[n].v[i] == bank.tmpl.channels[n].v[i]);
    }
  }
  CHECK_THROWS_AS(load_filter_bank((dir / "nope.bin").string()), Error);
  fs::remove_all(dir);
}
