#ifndef TACF_CORE_CONTEXT_ATTENTION_HPP_
#define TACF_CORE_CONTEXT_ATTENTION_HPP_

#include <utility>
#include <vector>

#include "core/image.hpp"
#include "core/types.hpp"

namespace tacf {

// Displacements of the context patch centers relative to the object center:
// up, down, left, right, each one object-size away scaled by `factor`.
std::vector<std::pair<double, double>> context_offsets(const BoundingBox& box,
                                                       double factor);

// Context patches share the object's padded size and template resolution.
std::vector<Patch> extract_context_patches(
    const Frame& frame, const BoundingBox& box,
    const std::vector<std::pair<double, double>>& offsets, double padding,
    int out_w, int out_h);

// Peak median energy ratio of a response map:
//   |R_max - R_med|^2 / ((1/(H*W)) * sum (R - R_med)^2)
// Returns 0 for a constant map. Requires at least 2 elements.
double pme(const MapF& response);

// c_s = PME(R_s) / PME(R_0). Throws DegenerateResponse when PME(R_0) == 0;
// the caller falls back to uniform penalties.
std::vector<double> challenging_factors(const MapF& r0,
                                        const std::vector<MapF>& rs);

// p_s = c_s^2 / sum c^2, or uniform 1/S when all factors vanish.
std::vector<double> penalty_factors(const std::vector<double>& c);

}  // namespace tacf

#endif  // TACF_CORE_CONTEXT_ATTENTION_HPP_
