#ifndef TACF_CORE_FEATURES_HPP_
#define TACF_CORE_FEATURES_HPP_

#include <string>
#include <vector>

#include "core/types.hpp"

namespace tacf {

// Color-name lookup table: 32768 quantized RGB bins (5 bits per channel,
// r fastest) x 10 color probabilities per row. Rows of the built-in table
// sum to 1. File format: 32768*10 little-endian float32.
class CnTable {
 public:
  static constexpr int kBins = 32 * 32 * 32;
  static constexpr int kNames = 10;

  // Deterministic built-in table: each bin center is soft-assigned to 10
  // color prototypes with a Gaussian kernel and normalized.
  static const CnTable& builtin();
  static CnTable load(const std::string& path);
  void write(const std::string& path) const;

  static int index(uint8_t r, uint8_t g, uint8_t b) {
    return (r >> 3) | ((g >> 3) << 5) | ((b >> 3) << 10);
  }
  const float* row(uint8_t r, uint8_t g, uint8_t b) const {
    return rows_.data() + static_cast<size_t>(index(r, g, b)) * kNames;
  }

 private:
  std::vector<float> rows_;  // kBins * kNames
};

// 31-channel HOG (Felzenszwalb variant), cell histograms with soft
// orientation + bilinear spatial binning:
//   - per-pixel gradient: clamped central differences scaled by 0.5, taking
//     the color channel with the largest magnitude;
//   - orientation angle in [0,2pi) split linearly across 18 signed bins;
//   - pixel magnitude shared bilinearly between the nearest cells per axis
//     (cell centers at (i+0.5)*cell_size), edge cells absorbing overflow;
//   - 9 unsigned bins = sums of opposite signed bins; cell energy = sum of
//     squared unsigned bins;
//   - four normalizers per cell from the 2x2 cell blocks toward each
//     diagonal (indices clamped), n_k = 1/sqrt(N_k + 1e-4);
//   - channels 0..17: 0.5 * sum_k min(signed_o * n_k, 0.2)
//     channels 18..26: 0.5 * sum_k min(unsigned_o * n_k, 0.2)
//     channels 27..30: 0.2357 * sum_{o<18} min(signed_o * n_k, 0.2), one per k.
// A cell with zero gradient energy yields all-zero features.
FeatureMap extract_hog(const Patch& patch, int cell_size);

// 10-channel color-name probabilities averaged per cell (3-channel input).
// For a grayscale patch this degenerates to the single mean-subtracted
// intensity channel.
FeatureMap extract_cn(const Patch& patch, const CnTable& table, int cell_size);

// Cell-averaged intensity, mean-subtracted over the patch.
FeatureMap extract_gray(const Patch& patch, int cell_size);

// Concatenates the channel stacks (which must share a grid) and applies the
// Hann window to every channel.
FeatureMap stack_features(const std::vector<FeatureMap>& maps, const MapF& window);

// Gaussian regression target with sigma = sigma_factor*sqrt(h*w), peak 1.0,
// circularly shifted so the peak sits at index (0,0).
MapF gaussian_label(int h, int w, double sigma_factor);

}  // namespace tacf

#endif  // TACF_CORE_FEATURES_HPP_
