#ifndef TACF_CORE_METRICS_HPP_
#define TACF_CORE_METRICS_HPP_

#include <vector>

#include "core/types.hpp"

namespace tacf {

// Intersection-over-union of two boxes, in [0,1].
double iou(const BoundingBox& a, const BoundingBox& b);

// One-pass-evaluation success curve: for thresholds 0.00..1.00 step 0.01,
// the fraction of frames whose IoU strictly exceeds the threshold. The AUC
// is the mean curve value.
struct SuccessCurve {
  std::vector<double> thresholds;
  std::vector<double> values;
  double auc = 0.0;
};

SuccessCurve success_auc(const std::vector<double>& ious);

}  // namespace tacf

#endif  // TACF_CORE_METRICS_HPP_
