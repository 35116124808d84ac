#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "core/features.hpp"
#include "core/image.hpp"
#include "oracles.hpp"

using namespace tacf;

namespace {

Patch make_patch(int h, int w, int c) {
  Patch p;
  p.h = h;
  p.w = w;
  p.c = c;
  p.v.assign(static_cast<size_t>(h) * w * c, 0.0);
  return p;
}

Patch random_patch(int h, int w, int c, std::mt19937_64& rng) {
  Patch p = make_patch(h, w, c);
  for (double& v : p.v) v = oracle::urand(rng);
  return p;
}

}  // namespace

TEST_CASE("hog of constant patch is zero") {
  Patch p = make_patch(16, 16, 1);
  for (double& v : p.v) v = 0.37;
  FeatureMap f = extract_hog(p, 4);
  REQUIRE(f.d() == 31);
  for (const MapF& ch : f.channels) {
    for (double v : ch.v) CHECK(v == 0.0);
  }
}

TEST_CASE("hog of vertical step edge lands in horizontal-gradient bins") {
  Patch p = make_patch(16, 16, 1);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      p.at(y, x, 0) = x < 8 ? 0.2 : 0.8;
    }
  }
  FeatureMap f = extract_hog(p, 4);
  double in_bins = 0.0, other = 0.0;
  for (int o = 0; o < 18; ++o) {
    double s = 0.0;
    for (double v : f.channels[o].v) s += v;
    if (o == 0 || o == 9) {
      in_bins += s;
    } else {
      other += s;
    }
  }
  CHECK(in_bins > 0.0);
  CHECK(other == doctest::Approx(0.0));

  // A left-right flip swaps the opposite signed bins; the unsigned bin is
  // preserved.
  Patch flipped = p;
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      flipped.at(y, x, 0) = p.at(y, 15 - x, 0);
    }
  }
  FeatureMap g = extract_hog(flipped, 4);
  auto total = [](const MapF& m) {
    double s = 0.0;
    for (double v : m.v) s += v;
    return s;
  };
  CHECK(total(g.channels[9]) == doctest::Approx(total(f.channels[0])).epsilon(1e-9));
  CHECK(total(g.channels[0]) == doctest::Approx(total(f.channels[9])).epsilon(1e-9));
  CHECK(total(g.channels[18]) == doctest::Approx(total(f.channels[18])).epsilon(1e-9));
}

TEST_CASE("hog matches scalar reference on random patches") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    Patch p = random_patch(32, 32, trial == 2 ? 3 : 1, rng);
    FeatureMap f = extract_hog(p, 4);
    std::vector<MapF> ref = oracle::reference_hog(p, 4);
    REQUIRE(f.d() == 31);
    REQUIRE(f.h == 8);
    REQUIRE(f.w == 8);
    double max_diff = 0.0;
    for (int o = 0; o < 31; ++o) {
      for (size_t i = 0; i < ref[o].size(); ++i) {
        max_diff = std::max(max_diff, std::abs(ref[o].v[i] - f.channels[o].v[i]));
      }
    }
    CHECK(max_diff <= 1e-5);
  }
}

TEST_CASE("hog ignores additive intensity shifts") {
  std::mt19937_64 rng(37);
  Patch p = random_patch(16, 16, 1, rng);
  for (double& v : p.v) v *= 0.8;  // leave headroom for the shift
  Patch q = p;
  for (double& v : q.v) v += 0.15;
  FeatureMap a = extract_hog(p, 4);
  FeatureMap b = extract_hog(q, 4);
  for (int o = 0; o < 31; ++o) {
    for (size_t i = 0; i < a.channels[o].size(); ++i) {
      CHECK(a.channels[o].v[i] == doctest::Approx(b.channels[o].v[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("hog rejects bad cell configuration") {
  Patch p = make_patch(10, 10, 1);
  CHECK_THROWS_AS(extract_hog(p, 4), Error);   // not divisible
  CHECK_THROWS_AS(extract_hog(p, 16), Error);  // smaller than one cell
}

TEST_CASE("cn of a pure black patch concentrates on the black name") {
  Patch p = make_patch(8, 8, 3);  // all zeros = black
  FeatureMap f = extract_cn(p, CnTable::builtin(), 4);
  REQUIRE(f.d() == 10);
  for (int i = 0; i < f.h; ++i) {
    for (int j = 0; j < f.w; ++j) {
      double best = -1.0;
      int arg = -1;
      for (int k = 0; k < 10; ++k) {
        if (f.channels[k].at(i, j) > best) {
          best = f.channels[k].at(i, j);
          arg = k;
        }
      }
      CHECK(arg == 0);  // prototype 0 is black
      CHECK(best > 0.5);
    }
  }
}

TEST_CASE("cn cell vectors sum to one") {
  std::mt19937_64 rng(41);
  Patch p = random_patch(16, 16, 3, rng);
  FeatureMap f = extract_cn(p, CnTable::builtin(), 4);
  for (int i = 0; i < f.h; ++i) {
    for (int j = 0; j < f.w; ++j) {
      double s = 0.0;
      for (int k = 0; k < 10; ++k) s += f.channels[k].at(i, j);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("cn constant patch equals the table row exactly") {
  Patch p = make_patch(8, 8, 3);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      p.at(y, x, 0) = 1.0;  // (255, 0, 0)
      p.at(y, x, 1) = 0.0;
      p.at(y, x, 2) = 0.0;
    }
  }
  const float* row = CnTable::builtin().row(255, 0, 0);
  FeatureMap f = extract_cn(p, CnTable::builtin(), 4);
  for (int k = 0; k < 10; ++k) {
    for (double v : f.channels[k].v) {
      CHECK(v == static_cast<double>(row[k]));
    }
  }
}

TEST_CASE("cn degenerates to intensity for grayscale input") {
  std::mt19937_64 rng(43);
  Patch p = random_patch(16, 16, 1, rng);
  FeatureMap f = extract_cn(p, CnTable::builtin(), 4);
  FeatureMap g = extract_gray(p, 4);
  REQUIRE(f.d() == 1);
  for (size_t i = 0; i < f.channels[0].size(); ++i) {
    CHECK(f.channels[0].v[i] == g.channels[0].v[i]);
  }
}

TEST_CASE("gray channel is mean-subtracted") {
  std::mt19937_64 rng(47);
  Patch p = random_patch(16, 16, 3, rng);
  FeatureMap f = extract_gray(p, 4);
  double mean = 0.0;
  for (double v : f.channels[0].v) mean += v;
  CHECK(mean / f.channels[0].size() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cn table load/save round trip and errors") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tacf_cn_test";
  fs::create_directories(dir);
  const std::string path = (dir / "table.bin").string();
  CnTable::builtin().write(path);
  CnTable loaded = CnTable::load(path);
  for (int r = 0; r < 256; r += 37) {
    for (int g = 0; g < 256; g += 61) {
      const float* a = CnTable::builtin().row(static_cast<uint8_t>(r),
                                              static_cast<uint8_t>(g), 128);
      const float* b = loaded.row(static_cast<uint8_t>(r), static_cast<uint8_t>(g), 128);
      for (int k = 0; k < 10; ++k) CHECK(a[k] == b[k]);
    }
  }
  CHECK_THROWS_AS(CnTable::load((dir / "missing.bin").string()), Error);
  const std::string bad = (dir / "bad.bin").string();
  std::FILE* f = std::fopen(bad.c_str(), "wb");
  std::fwrite("junk", 1, 4, f);
  std::fclose(f);
  try {
    CnTable::load(bad);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
  }
  fs::remove_all(dir);
}

TEST_CASE("stack_features windows every channel and preserves order") {
  std::mt19937_64 rng(53);
  Patch p = random_patch(32, 32, 3, rng);
  FeatureMap hog = extract_hog(p, 4);
  FeatureMap cn = extract_cn(p, CnTable::builtin(), 4);
  FeatureMap gray = extract_gray(p, 4);
  MapF window = hann_window(8, 8);
  FeatureMap stacked = stack_features({hog, cn, gray}, window);
  REQUIRE(stacked.d() == 42);
  std::vector<const MapF*> inputs;
  for (const MapF& m : hog.channels) inputs.push_back(&m);
  for (const MapF& m : cn.channels) inputs.push_back(&m);
  for (const MapF& m : gray.channels) inputs.push_back(&m);
  for (int c = 0; c < 42; ++c) {
    for (size_t i = 0; i < window.size(); ++i) {
      CHECK(stacked.channels[c].v[i] == inputs[c]->v[i] * window.v[i]);
    }
  }

  // Single input map: just the windowed identity.
  FeatureMap single = stack_features({gray}, window);
  REQUIRE(single.d() == 1);
  for (size_t i = 0; i < window.size(); ++i) {
    CHECK(single.channels[0].v[i] == gray.channels[0].v[i] * window.v[i]);
  }

  FeatureMap small = extract_gray(random_patch(16, 16, 1, rng), 4);
  CHECK_THROWS_AS(stack_features({hog, small}, window), Error);
}

TEST_CASE("gaussian label trivial cases") {
  MapF one = gaussian_label(1, 1, 0.5);
  CHECK(one.at(0, 0) == 1.0);

  MapF m = gaussian_label(16, 16, 0.1);
  CHECK(m.at(0, 0) == 1.0);
  double min_v = 2.0;
  int min_i = -1, min_j = -1;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      CHECK(m.at(i, j) > 0.0);
      CHECK(m.at(i, j) <= 1.0);
      if (m.at(i, j) < min_v) {
        min_v = m.at(i, j);
        min_i = i;
        min_j = j;
      }
    }
  }
  CHECK(min_i == 8);
  CHECK(min_j == 8);
}

TEST_CASE("gaussian label matches the direct formula") {
  MapF m = gaussian_label(16, 16, 0.1);
  const double sigma = 0.1 * 16.0;
  CHECK(m.at(0, 1) == doctest::Approx(std::exp(-1.0 / (2 * sigma * sigma))).epsilon(1e-12));
  CHECK(m.at(1, 0) == doctest::Approx(0.8226).epsilon(1e-4));
}

TEST_CASE("gaussian label transpose symmetry for square grids") {
  MapF m = gaussian_label(12, 12, 0.17);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      CHECK(m.at(i, j) == doctest::Approx(m.at(j, i)).epsilon(1e-12));
    }
  }
}
