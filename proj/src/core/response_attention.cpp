#include "core/response_attention.hpp"

#include <algorithm>
#include <cmath>

#include "core/correlation.hpp"

namespace tacf {
namespace {

void check_stack(const ResponseStack& r) {
  if (r.empty()) {
    throw Error(ErrorCode::InvalidInput, "response stack is empty");
  }
  for (const MapF& m : r) {
    if (!m.same_shape(r[0])) {
      throw Error(ErrorCode::InvalidInput, "response stack shape mismatch");
    }
  }
}

inline int wrap_offset(int idx, int n) { return idx >= (n + 1) / 2 ? idx - n : idx; }

// Least-squares quadratic over the circular 3x3 neighborhood of (pi, pj);
// returns the stationary-point offset, clamped to half a cell, or (0,0)
// when the fit is not a proper maximum.
void subcell_refine(const MapF& m, int pi, int pj, double* oy, double* ox) {
  double sv = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    const int i = (pi + dy + m.h) % m.h;
    for (int dx = -1; dx <= 1; ++dx) {
      const int j = (pj + dx + m.w) % m.w;
      const double v = m.at(i, j);
      sv += v;
      sx += dx * v;
      sy += dy * v;
      sxx += dx * dx * v;
      syy += dy * dy * v;
      sxy += dx * dy * v;
    }
  }
  const double a = 0.5 * (sxx - (2.0 / 3.0) * sv);
  const double b = 0.5 * (syy - (2.0 / 3.0) * sv);
  const double c = 0.25 * sxy;
  const double d = sx / 6.0;
  const double e = sy / 6.0;
  const double det = 4.0 * a * b - c * c;
  *ox = 0.0;
  *oy = 0.0;
  if (det <= 1e-12 || a >= 0.0 || b >= 0.0) return;
  double x = (c * e - 2.0 * b * d) / det;
  double y = (c * d - 2.0 * a * e) / det;
  *ox = std::clamp(x, -0.5, 0.5);
  *oy = std::clamp(y, -0.5, 0.5);
}

}  // namespace

std::vector<double> dim_weights(const ResponseStack& r) {
  check_stack(r);
  std::vector<double> z;
  z.reserve(r.size());
  for (const MapF& m : r) {
    double sum = 0.0;
    double max_v = m.v[0];
    for (double x : m.v) {
      sum += x;
      max_v = std::max(max_v, x);
    }
    z.push_back(sum / static_cast<double>(m.size()) + max_v);
  }
  return z;
}

std::vector<double> gate(const std::vector<double>& z, double beta_t) {
  if (beta_t < 0.0) {
    throw Error(ErrorCode::InvalidInput, "gate: beta_t must be >= 0");
  }
  if (z.empty()) {
    throw Error(ErrorCode::InvalidInput, "gate: empty weight vector");
  }
  double t = 0.0;
  for (double x : z) t += x;
  t /= static_cast<double>(z.size());
  std::vector<double> s;
  s.reserve(z.size());
  for (double x : z) {
    s.push_back(std::max(x - t, 0.0) + beta_t);
  }
  return s;
}

ResponseStack apply_dim_attention(const ResponseStack& r,
                                  const std::vector<double>& s) {
  check_stack(r);
  if (r.size() != s.size()) {
    throw Error(ErrorCode::InvalidInput, "apply_dim_attention: weight count mismatch");
  }
  ResponseStack out;
  out.reserve(r.size());
  for (size_t d = 0; d < r.size(); ++d) {
    MapF m(r[d].h, r[d].w);
    for (size_t i = 0; i < m.size(); ++i) {
      m.v[i] = s[d] * r[d].v[i];
    }
    out.push_back(std::move(m));
  }
  return out;
}

MapF sum_channels(const ResponseStack& r) {
  check_stack(r);
  MapF sum(r[0].h, r[0].w, 0.0);
  for (const MapF& m : r) {
    for (size_t i = 0; i < sum.size(); ++i) sum.v[i] += m.v[i];
  }
  return sum;
}

MapF static_spatial_map(const ResponseStack& r, const MapF& window) {
  check_stack(r);
  if (!window.same_shape(r[0])) {
    throw Error(ErrorCode::InvalidInput, "static_spatial_map: window shape mismatch");
  }
  MapF v(r[0].h, r[0].w, 0.0);
  for (const MapF& m : r) {
    for (size_t i = 0; i < v.size(); ++i) v.v[i] += m.v[i] * window.v[i];
  }
  double lo = v.v[0], hi = v.v[0];
  for (double x : v.v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi > lo) {
    const double inv = 1.0 / (hi - lo);
    for (double& x : v.v) x = (x - lo) * inv;
  } else {
    std::fill(v.v.begin(), v.v.end(), 0.0);
  }
  double mean = 0.0;
  for (double x : v.v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v.v) {
    const double centered = x - mean;
    x = centered > 0.0 ? std::exp(centered) : 1.0;
  }
  return v;
}

double motion_factor(double dx_px, double dy_px, double size_x, double size_y,
                     double gamma) {
  if (size_x <= 0.0 || size_y <= 0.0) {
    throw Error(ErrorCode::InvalidInput, "motion_factor: target size must be > 0");
  }
  return gamma * std::sqrt((dx_px * dx_px + dy_px * dy_px) /
                           (size_x * size_x + size_y * size_y));
}

MapF dynamic_map(const MapF& s, double gamma_t, int dy, int dx) {
  if (gamma_t < 0.0) {
    throw Error(ErrorCode::InvalidInput, "dynamic_map: gamma_t must be >= 0");
  }
  MapF shifted = circshift(s, dy, dx);
  MapF out(s.h, s.w);
  for (size_t i = 0; i < s.size(); ++i) {
    out.v[i] = s.v[i] + gamma_t * shifted.v[i];
  }
  return out;
}

PeakResult locate_peak(const MapF& fused, int cell_size) {
  if (fused.size() == 0) {
    throw Error(ErrorCode::InvalidInput, "locate_peak: empty map");
  }
  bool any_nonzero = false;
  for (double x : fused.v) {
    if (x != 0.0) {
      any_nonzero = true;
      break;
    }
  }
  if (!any_nonzero) {
    throw Error(ErrorCode::NoPeak, "locate_peak: all-zero response map");
  }

  int best_i = 0, best_j = 0;
  double best_v = fused.at(0, 0);
  long best_mag2 = 0;
  for (int i = 0; i < fused.h; ++i) {
    const int wy = wrap_offset(i, fused.h);
    for (int j = 0; j < fused.w; ++j) {
      const double v = fused.at(i, j);
      if (v < best_v) continue;
      const int wx = wrap_offset(j, fused.w);
      const long mag2 = static_cast<long>(wx) * wx + static_cast<long>(wy) * wy;
      if (v > best_v || mag2 < best_mag2) {
        best_v = v;
        best_i = i;
        best_j = j;
        best_mag2 = mag2;
      }
    }
  }

  double oy = 0.0, ox = 0.0;
  if (fused.h >= 3 && fused.w >= 3) {
    subcell_refine(fused, best_i, best_j, &oy, &ox);
  }
  PeakResult res;
  res.dx_px = (wrap_offset(best_j, fused.w) + ox) * cell_size;
  res.dy_px = (wrap_offset(best_i, fused.h) + oy) * cell_size;
  res.peak = best_v;
  res.fused = fused;
  return res;
}

PeakResult fuse_and_locate(const ResponseStack& r, const MapF& sd, int cell_size) {
  check_stack(r);
  if (!sd.same_shape(r[0])) {
    throw Error(ErrorCode::InvalidInput, "fuse_and_locate: attention map shape mismatch");
  }
  MapF fused = sum_channels(r);
  for (size_t i = 0; i < fused.size(); ++i) {
    fused.v[i] *= sd.v[i];
  }
  return locate_peak(fused, cell_size);
}

}  // namespace tacf

