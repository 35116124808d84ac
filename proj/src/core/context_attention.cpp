#include "core/context_attention.hpp"

#include <algorithm>
#include <cmath>

namespace tacf {

std::vector<std::pair<double, double>> context_offsets(const BoundingBox& box,
                                                       double factor) {
  const double dx = box.w * factor;
  const double dy = box.h * factor;
  return {{0.0, -dy}, {0.0, dy}, {-dx, 0.0}, {dx, 0.0}};
}

std::vector<Patch> extract_context_patches(
    const Frame& frame, const BoundingBox& box,
    const std::vector<std::pair<double, double>>& offsets, double padding,
    int out_w, int out_h) {
  std::vector<Patch> patches;
  patches.reserve(offsets.size());
  for (const auto& [ox, oy] : offsets) {
    BoundingBox shifted = box;
    shifted.cx += ox;
    shifted.cy += oy;
    patches.push_back(extract_patch(frame, shifted, padding, out_w, out_h));
  }
  return patches;
}

double pme(const MapF& response) {
  const size_t n = response.size();
  if (n < 2) {
    throw Error(ErrorCode::InvalidInput, "pme: response must have >= 2 values");
  }
  std::vector<double> sorted(response.v);
  const size_t mid = n / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  double med = sorted[mid];
  if (n % 2 == 0) {
    std::nth_element(sorted.begin(), sorted.begin() + mid - 1, sorted.begin() + mid);
    med = 0.5 * (med + sorted[mid - 1]);
  }
  double max_v = response.v[0];
  double dev = 0.0;
  for (double x : response.v) {
    max_v = std::max(max_v, x);
    const double d = x - med;
    dev += d * d;
  }
  const double denom = dev / static_cast<double>(n);
  if (denom == 0.0) return 0.0;
  const double peak = max_v - med;
  return peak * peak / denom;
}

std::vector<double> challenging_factors(const MapF& r0,
                                        const std::vector<MapF>& rs) {
  const double p0 = pme(r0);
  if (p0 <= 0.0) {
    throw Error(ErrorCode::DegenerateResponse,
                "challenging_factors: object response PME is zero");
  }
  std::vector<double> c;
  c.reserve(rs.size());
  for (const MapF& r : rs) {
    c.push_back(pme(r) / p0);
  }
  return c;
}

std::vector<double> penalty_factors(const std::vector<double>& c) {
  std::vector<double> p(c.size(), 0.0);
  if (c.empty()) return p;
  double sum = 0.0;
  for (double x : c) {
    if (x < 0.0) {
      throw Error(ErrorCode::InvalidInput, "penalty_factors: negative factor");
    }
    sum += x * x;
  }
  if (sum == 0.0) {
    const double uniform = 1.0 / static_cast<double>(c.size());
    std::fill(p.begin(), p.end(), uniform);
    return p;
  }
  for (size_t i = 0; i < c.size(); ++i) {
    p[i] = c[i] * c[i] / sum;
  }
  return p;
}

}  // namespace tacf
