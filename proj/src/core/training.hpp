#ifndef TACF_CORE_TRAINING_HPP_
#define TACF_CORE_TRAINING_HPP_

#include <string>
#include <vector>

#include "core/correlation.hpp"
#include "core/features.hpp"
#include "core/types.hpp"

namespace tacf {

// Per-channel ridge-regression filters in the frequency domain, plus the
// stored training sample needed to build detection kernel vectors.
struct FilterBank {
  int d = 0;
  std::vector<Spectrum> filters;          // one per feature channel
  Spectrum label_spec;                    // transform of the regression target
  FeatureMap tmpl;                        // stored (windowed) training sample
  std::vector<ChannelSpectrum> tmpl_norm; // transforms of energy-normalized tmpl channels
};

// Context patches enter training through their self kernel-correlations and
// per-patch regularization weights P_s = sqrt(lambda2) * p_s.
struct TrainContext {
  std::vector<std::vector<MapF>> kernels;  // [patch][channel]
  std::vector<double> penalties;           // P_s, one per patch
};

TrainContext make_train_context(std::vector<std::vector<MapF>> kernels,
                                const std::vector<double>& p, double lambda2);

// Closed-form solution with context patches as zero-target negatives:
// per channel n and frequency bin,
//   w_n = (K0 .* y) / (K0 .* conj(K0) + lambda1 + sum_s P_s^2 Ks .* conj(Ks))
// where K0/Ks are transforms of the object/context self kernel-correlations.
FilterBank train_with_context(const FeatureMap& obj, const TrainContext& ctx,
                              const MapF& label, double lambda1,
                              double kernel_sigma);

// Context-free form: w_n = (K0 .* y) / (K0 .* conj(K0) + lambda1).
// Bin-for-bin equal to train_with_context with zero penalties.
FilterBank train_plain(const FeatureMap& obj, const MapF& label, double lambda1,
                       double kernel_sigma);

// Linear interpolation toward the new bank: w <- (1-eta)*w_old + eta*w_new,
// applied to filters and the stored template alike.
FilterBank update_model(const FilterBank& prev, const FilterBank& next, double eta);

// Debugging snapshot (versioned binary; native endianness).
void save_filter_bank(const FilterBank& bank, const std::string& path);
FilterBank load_filter_bank(const std::string& path);

}  // namespace tacf

#endif  // TACF_CORE_TRAINING_HPP_
