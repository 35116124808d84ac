#ifndef TACF_CORE_RESPONSE_ATTENTION_HPP_
#define TACF_CORE_RESPONSE_ATTENTION_HPP_

#include <vector>

#include "core/types.hpp"

namespace tacf {

// Per-channel correlation outputs sharing one spatial grid.
using ResponseStack = std::vector<MapF>;

// z_d = mean(R_d) + max(R_d).
std::vector<double> dim_weights(const ResponseStack& r);

// s_d = max(z_d - t, 0) + beta_t with t = mean over channels.
std::vector<double> gate(const std::vector<double>& z, double beta_t);

// R'_d = s_d * R_d (channel reweighting; summation happens at fusion).
ResponseStack apply_dim_attention(const ResponseStack& r,
                                  const std::vector<double>& s);

MapF sum_channels(const ResponseStack& r);

// Static spatial attention: v = meansub(norm01(sum_d R_d .* window));
// S(i,j) = exp(v) where v > 0, else 1. A constant summed map gives S == 1.
MapF static_spatial_map(const ResponseStack& r, const MapF& window);

// gamma_t = gamma * sqrt((dx^2+dy^2)/(X^2+Y^2)), displacement and target
// size both in pixels.
double motion_factor(double dx_px, double dy_px, double size_x, double size_y,
                     double gamma);

// S_d = S + gamma_t * circshift(S, (dy, dx)), shift in grid cells along the
// previous displacement.
MapF dynamic_map(const MapF& s, double gamma_t, int dy, int dx);

struct PeakResult {
  double dx_px = 0.0;  // displacement in template pixels
  double dy_px = 0.0;
  double peak = 0.0;
  MapF fused;
};

// Peak of a fused map: circular argmax offset from the origin plus a
// quadratic sub-cell refinement over the 3x3 neighborhood, scaled by
// cell_size. Ties resolve to the smallest wrapped displacement magnitude,
// then row-major order. An all-zero map raises NoPeak.
PeakResult locate_peak(const MapF& fused, int cell_size);

// fused = S_d .* sum_d R_d, then locate_peak.
PeakResult fuse_and_locate(const ResponseStack& r, const MapF& sd, int cell_size);

}  // namespace tacf

#endif  // TACF_CORE_RESPONSE_ATTENTION_HPP_
