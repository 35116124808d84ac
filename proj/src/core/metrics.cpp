#include "core/metrics.hpp"

#include <algorithm>

namespace tacf {

double iou(const BoundingBox& a, const BoundingBox& b) {
  if (!(a.w > 0.0) || !(a.h > 0.0) || !(b.w > 0.0) || !(b.h > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "iou: box sizes must be positive");
  }
  const double ix = std::max(0.0, std::min(a.x() + a.w, b.x() + b.w) -
                                      std::max(a.x(), b.x()));
  const double iy = std::max(0.0, std::min(a.y() + a.h, b.y() + b.h) -
                                      std::max(a.y(), b.y()));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

SuccessCurve success_auc(const std::vector<double>& ious) {
  if (ious.empty()) {
    throw Error(ErrorCode::InvalidInput, "success_auc: empty IoU list");
  }
  SuccessCurve curve;
  curve.thresholds.reserve(101);
  curve.values.reserve(101);
  double acc = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double t = k * 0.01;
    int hits = 0;
    for (double v : ious) {
      if (v > t) ++hits;
    }
    const double frac = static_cast<double>(hits) / ious.size();
    curve.thresholds.push_back(t);
    curve.values.push_back(frac);
    acc += frac;
  }
  curve.auc = acc / 101.0;
  return curve;
}

}  // namespace tacf
