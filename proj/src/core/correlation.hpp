#ifndef TACF_CORE_CORRELATION_HPP_
#define TACF_CORE_CORRELATION_HPP_

#include "core/fft.hpp"
#include "core/types.hpp"

namespace tacf {

// Scales a map to unit L2 norm. A (near-)zero map is returned unchanged.
MapF energy_normalize(const MapF& m);

// Precomputed per-channel transform of a sample, for reuse across calls.
struct ChannelSpectrum {
  Spectrum spec;
  double energy = 0.0;  // squared L2 norm of the spatial map

  ChannelSpectrum() = default;
  explicit ChannelSpectrum(const MapF& m);
};

// Gaussian-kernel correlation of x against every circular shift of z:
//   k(tau) = exp(-max(0, |x|^2 + |z|^2 - 2*cc(tau)) / (sigma^2 * M))
// with cc = ifft2(fft2(x) .* conj(fft2(z))) and M = h*w. Shapes must match.
MapF kernel_correlation(const MapF& x, const MapF& z, double sigma);
MapF kernel_correlation(const ChannelSpectrum& x, const ChannelSpectrum& z,
                        double sigma);

// Plain circular cross-correlation cc(tau) = sum_t x(t+tau) z(t), via FFT.
MapF linear_correlation(const MapF& x, const MapF& z);

// Response generation: ifft2(fft2(kernel_vec) .* filter_spec).
MapF correlate(const Spectrum& filter_spec, const MapF& kernel_vec);

// Circular shift moving content by (+dy, +dx).
MapF circshift(const MapF& m, int dy, int dx);

}  // namespace tacf

#endif  // TACF_CORE_CORRELATION_HPP_
