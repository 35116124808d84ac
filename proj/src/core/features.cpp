#include "core/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace tacf {
namespace {

constexpr int kOrientations = 9;
constexpr int kSignedBins = 2 * kOrientations;
constexpr int kHogChannels = kSignedBins + kOrientations + 4;  // 31
constexpr double kTruncation = 0.2;
constexpr double kNormEps = 1e-4;

inline int clampi(int x, int lo, int hi) { return x < lo ? lo : (x > hi ? hi : x); }

struct CnPrototype {
  double r, g, b;
};

// 10 reference colors for the built-in table.
const CnPrototype kPrototypes[CnTable::kNames] = {
    {0, 0, 0},        // black
    {40, 70, 230},    // blue
    {125, 80, 35},    // brown
    {128, 128, 128},  // gray
    {50, 155, 70},    // green
    {250, 150, 40},   // orange
    {130, 45, 160},   // purple
    {215, 45, 45},    // red
    {255, 255, 255},  // white
    {245, 230, 55},   // yellow
};

}  // namespace

const CnTable& CnTable::builtin() {
  static const CnTable table = [] {
    CnTable t;
    t.rows_.resize(static_cast<size_t>(kBins) * kNames);
    const double inv2s2 = 1.0 / (2.0 * 70.0 * 70.0);
    for (int bb = 0; bb < 32; ++bb) {
      for (int gg = 0; gg < 32; ++gg) {
        for (int rr = 0; rr < 32; ++rr) {
          const double r = rr * 8 + 4, g = gg * 8 + 4, b = bb * 8 + 4;
          const int idx = rr | (gg << 5) | (bb << 10);
          float* row = t.rows_.data() + static_cast<size_t>(idx) * kNames;
          double sum = 0.0;
          double p[kNames];
          for (int k = 0; k < kNames; ++k) {
            const double dr = r - kPrototypes[k].r;
            const double dg = g - kPrototypes[k].g;
            const double db = b - kPrototypes[k].b;
            p[k] = std::exp(-(dr * dr + dg * dg + db * db) * inv2s2);
            sum += p[k];
          }
          for (int k = 0; k < kNames; ++k) {
            row[k] = static_cast<float>(p[k] / sum);
          }
        }
      }
    }
    return t;
  }();
  return table;
}

CnTable CnTable::load(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) {
    throw Error(ErrorCode::InvalidConfig,
                "color-name table not readable: " + path);
  }
  std::fseek(f, 0, SEEK_END);
  const long size = std::ftell(f);
  std::fseek(f, 0, SEEK_SET);
  const long expect = static_cast<long>(kBins) * kNames * 4;
  if (size != expect) {
    std::fclose(f);
    throw Error(ErrorCode::InvalidConfig,
                "color-name table has wrong size: " + path);
  }
  std::vector<unsigned char> raw(static_cast<size_t>(size));
  const size_t got = std::fread(raw.data(), 1, raw.size(), f);
  std::fclose(f);
  if (got != raw.size()) {
    throw Error(ErrorCode::Io, "short read on color-name table: " + path);
  }
  CnTable t;
  t.rows_.resize(static_cast<size_t>(kBins) * kNames);
  for (size_t i = 0; i < t.rows_.size(); ++i) {
    const unsigned char* p = raw.data() + i * 4;
    uint32_t bits = static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
                    (static_cast<uint32_t>(p[2]) << 16) |
                    (static_cast<uint32_t>(p[3]) << 24);
    float val;
    std::memcpy(&val, &bits, 4);
    t.rows_[i] = val;
  }
  return t;
}

void CnTable::write(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    throw Error(ErrorCode::Io, "cannot open for write: " + path);
  }
  std::vector<unsigned char> raw(rows_.size() * 4);
  for (size_t i = 0; i < rows_.size(); ++i) {
    uint32_t bits;
    std::memcpy(&bits, &rows_[i], 4);
    raw[i * 4 + 0] = static_cast<unsigned char>(bits & 0xff);
    raw[i * 4 + 1] = static_cast<unsigned char>((bits >> 8) & 0xff);
    raw[i * 4 + 2] = static_cast<unsigned char>((bits >> 16) & 0xff);
    raw[i * 4 + 3] = static_cast<unsigned char>((bits >> 24) & 0xff);
  }
  const size_t put = std::fwrite(raw.data(), 1, raw.size(), f);
  std::fclose(f);
  if (put != raw.size()) {
    throw Error(ErrorCode::Io, "short write on color-name table: " + path);
  }
}

FeatureMap extract_hog(const Patch& patch, int cell_size) {
  if (cell_size < 1 || patch.h < cell_size || patch.w < cell_size) {
    throw Error(ErrorCode::InvalidInput, "extract_hog: patch smaller than one cell");
  }
  if (patch.h % cell_size != 0 || patch.w % cell_size != 0) {
    throw Error(ErrorCode::InvalidInput,
                "extract_hog: patch dims must be divisible by cell_size");
  }
  const int hc = patch.h / cell_size;
  const int wc = patch.w / cell_size;

  // Soft-binned signed orientation histograms per cell.
  std::vector<double> hist(static_cast<size_t>(hc) * wc * kSignedBins, 0.0);
  auto hist_at = [&](int i, int j, int o) -> double& {
    return hist[(static_cast<size_t>(i) * wc + j) * kSignedBins + o];
  };

  const double bin_scale = kSignedBins / (2.0 * M_PI);
  for (int y = 0; y < patch.h; ++y) {
    const int ym = std::max(y - 1, 0), yp = std::min(y + 1, patch.h - 1);
    for (int x = 0; x < patch.w; ++x) {
      const int xm = std::max(x - 1, 0), xp = std::min(x + 1, patch.w - 1);
      double best_dx = 0.0, best_dy = 0.0, best_mag2 = -1.0;
      for (int c = 0; c < patch.c; ++c) {
        const double dx = 0.5 * (patch.at(y, xp, c) - patch.at(y, xm, c));
        const double dy = 0.5 * (patch.at(yp, x, c) - patch.at(ym, x, c));
        const double m2 = dx * dx + dy * dy;
        if (m2 > best_mag2) {
          best_mag2 = m2;
          best_dx = dx;
          best_dy = dy;
        }
      }
      const double mag = std::sqrt(best_mag2);
      if (mag <= 0.0) continue;
      double theta = std::atan2(best_dy, best_dx);
      if (theta < 0.0) theta += 2.0 * M_PI;
      double b = theta * bin_scale;
      if (b >= kSignedBins) b -= kSignedBins;
      const int o0 = static_cast<int>(b);
      const int o1 = (o0 + 1) % kSignedBins;
      const double fo = b - o0;

      const double cy = (y + 0.5) / cell_size - 0.5;
      const double cx = (x + 0.5) / cell_size - 0.5;
      const int i0 = static_cast<int>(std::floor(cy));
      const int j0 = static_cast<int>(std::floor(cx));
      const double fy = cy - i0;
      const double fx = cx - j0;
      const int ia = clampi(i0, 0, hc - 1), ib = clampi(i0 + 1, 0, hc - 1);
      const int ja = clampi(j0, 0, wc - 1), jb = clampi(j0 + 1, 0, wc - 1);
      const double waa = (1.0 - fy) * (1.0 - fx) * mag;
      const double wab = (1.0 - fy) * fx * mag;
      const double wba = fy * (1.0 - fx) * mag;
      const double wbb = fy * fx * mag;

      hist_at(ia, ja, o0) += waa * (1.0 - fo);
      hist_at(ia, ja, o1) += waa * fo;
      hist_at(ia, jb, o0) += wab * (1.0 - fo);
      hist_at(ia, jb, o1) += wab * fo;
      hist_at(ib, ja, o0) += wba * (1.0 - fo);
      hist_at(ib, ja, o1) += wba * fo;
      hist_at(ib, jb, o0) += wbb * (1.0 - fo);
      hist_at(ib, jb, o1) += wbb * fo;
    }
  }

  // Cell gradient energy from the unsigned bins.
  MapF energy(hc, wc, 0.0);
  for (int i = 0; i < hc; ++i) {
    for (int j = 0; j < wc; ++j) {
      double e = 0.0;
      for (int o = 0; o < kOrientations; ++o) {
        const double u = hist_at(i, j, o) + hist_at(i, j, o + kOrientations);
        e += u * u;
      }
      energy.at(i, j) = e;
    }
  }

  FeatureMap out;
  out.h = hc;
  out.w = wc;
  out.cell_size = cell_size;
  out.channels.assign(kHogChannels, MapF(hc, wc, 0.0));

  for (int i = 0; i < hc; ++i) {
    const int im = clampi(i - 1, 0, hc - 1), ip = clampi(i + 1, 0, hc - 1);
    for (int j = 0; j < wc; ++j) {
      const int jm = clampi(j - 1, 0, wc - 1), jp = clampi(j + 1, 0, wc - 1);
      const double e = energy.at(i, j);
      const double n[4] = {
          1.0 / std::sqrt(energy.at(im, jm) + energy.at(im, j) +
                          energy.at(i, jm) + e + kNormEps),
          1.0 / std::sqrt(energy.at(im, j) + energy.at(im, jp) + e +
                          energy.at(i, jp) + kNormEps),
          1.0 / std::sqrt(energy.at(i, jm) + e + energy.at(ip, jm) +
                          energy.at(ip, j) + kNormEps),
          1.0 / std::sqrt(e + energy.at(i, jp) + energy.at(ip, j) +
                          energy.at(ip, jp) + kNormEps),
      };
      double texture[4] = {0.0, 0.0, 0.0, 0.0};
      for (int o = 0; o < kSignedBins; ++o) {
        const double s = hist_at(i, j, o);
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
          const double hk = std::min(s * n[k], kTruncation);
          acc += hk;
          texture[k] += hk;
        }
        out.channels[o].at(i, j) = 0.5 * acc;
      }
      for (int o = 0; o < kOrientations; ++o) {
        const double u = hist_at(i, j, o) + hist_at(i, j, o + kOrientations);
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
          acc += std::min(u * n[k], kTruncation);
        }
        out.channels[kSignedBins + o].at(i, j) = 0.5 * acc;
      }
      for (int k = 0; k < 4; ++k) {
        out.channels[kSignedBins + kOrientations + k].at(i, j) = 0.2357 * texture[k];
      }
    }
  }
  return out;
}

FeatureMap extract_gray(const Patch& patch, int cell_size) {
  if (cell_size < 1 || patch.h < cell_size || patch.w < cell_size ||
      patch.h % cell_size != 0 || patch.w % cell_size != 0) {
    throw Error(ErrorCode::InvalidInput, "extract_gray: bad patch/cell size");
  }
  const int hc = patch.h / cell_size;
  const int wc = patch.w / cell_size;
  MapF m(hc, wc, 0.0);
  const double inv_cells = 1.0 / (cell_size * cell_size);
  for (int i = 0; i < hc; ++i) {
    for (int j = 0; j < wc; ++j) {
      double acc = 0.0;
      for (int y = i * cell_size; y < (i + 1) * cell_size; ++y) {
        for (int x = j * cell_size; x < (j + 1) * cell_size; ++x) {
          double p = 0.0;
          for (int c = 0; c < patch.c; ++c) p += patch.at(y, x, c);
          acc += p / patch.c;
        }
      }
      m.at(i, j) = acc * inv_cells;
    }
  }
  double mean = 0.0;
  for (double x : m.v) mean += x;
  mean /= static_cast<double>(m.size());
  for (double& x : m.v) x -= mean;

  FeatureMap out;
  out.h = hc;
  out.w = wc;
  out.cell_size = cell_size;
  out.channels.push_back(std::move(m));
  return out;
}

FeatureMap extract_cn(const Patch& patch, const CnTable& table, int cell_size) {
  if (patch.c != 3) {
    return extract_gray(patch, cell_size);
  }
  if (cell_size < 1 || patch.h < cell_size || patch.w < cell_size ||
      patch.h % cell_size != 0 || patch.w % cell_size != 0) {
    throw Error(ErrorCode::InvalidInput, "extract_cn: bad patch/cell size");
  }
  const int hc = patch.h / cell_size;
  const int wc = patch.w / cell_size;
  FeatureMap out;
  out.h = hc;
  out.w = wc;
  out.cell_size = cell_size;
  out.channels.assign(CnTable::kNames, MapF(hc, wc, 0.0));
  const double inv_cells = 1.0 / (cell_size * cell_size);
  for (int i = 0; i < hc; ++i) {
    for (int j = 0; j < wc; ++j) {
      double acc[CnTable::kNames] = {};
      for (int y = i * cell_size; y < (i + 1) * cell_size; ++y) {
        for (int x = j * cell_size; x < (j + 1) * cell_size; ++x) {
          const auto q = [&](int c) {
            return static_cast<uint8_t>(
                clampi(static_cast<int>(std::lround(patch.at(y, x, c) * 255.0)), 0, 255));
          };
          const float* row = table.row(q(0), q(1), q(2));
          for (int k = 0; k < CnTable::kNames; ++k) acc[k] += row[k];
        }
      }
      for (int k = 0; k < CnTable::kNames; ++k) {
        out.channels[k].at(i, j) = acc[k] * inv_cells;
      }
    }
  }
  return out;
}

FeatureMap stack_features(const std::vector<FeatureMap>& maps, const MapF& window) {
  if (maps.empty()) {
    throw Error(ErrorCode::InvalidInput, "stack_features: no input maps");
  }
  const int h = maps[0].h, w = maps[0].w;
  if (window.h != h || window.w != w) {
    throw Error(ErrorCode::InvalidInput, "stack_features: window shape mismatch");
  }
  FeatureMap out;
  out.h = h;
  out.w = w;
  out.cell_size = maps[0].cell_size;
  for (const FeatureMap& m : maps) {
    if (m.h != h || m.w != w) {
      throw Error(ErrorCode::InvalidInput, "stack_features: spatial dims mismatch");
    }
    for (const MapF& ch : m.channels) {
      MapF windowed(h, w);
      for (size_t i = 0; i < windowed.size(); ++i) {
        windowed.v[i] = ch.v[i] * window.v[i];
      }
      out.channels.push_back(std::move(windowed));
    }
  }
  return out;
}

MapF gaussian_label(int h, int w, double sigma_factor) {
  if (h < 1 || w < 1 || sigma_factor <= 0.0) {
    throw Error(ErrorCode::InvalidInput, "gaussian_label: bad arguments");
  }
  const double sigma = sigma_factor * std::sqrt(static_cast<double>(h) * w);
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  MapF m(h, w);
  for (int i = 0; i < h; ++i) {
    const double di = (i <= h / 2) ? i : i - h;
    for (int j = 0; j < w; ++j) {
      const double dj = (j <= w / 2) ? j : j - w;
      m.at(i, j) = std::exp(-(di * di + dj * dj) * inv2s2);
    }
  }
  return m;
}

}  // namespace tacf
