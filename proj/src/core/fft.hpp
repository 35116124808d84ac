#ifndef TACF_CORE_FFT_HPP_
#define TACF_CORE_FFT_HPP_

#include "core/types.hpp"

namespace tacf {

// 2-D DFT pair. Forward is unnormalized (DC bin = sum of entries); the
// inverse carries the 1/(h*w) factor, so ifft2(fft2(m)) == m to round-off.
// Plans are cached per shape in thread-local storage; plan creation is
// serialized around the FFTW planner.
Spectrum fft2(const MapF& m);
MapF ifft2(const Spectrum& s);

// Inverse transform of an elementwise product fft2(a) * b, sharing one plan
// lookup. Equivalent to ifft2({a.h, a.w, fft2(a)*b}) but without the
// intermediate copies.
MapF ifft2_of_product(const Spectrum& a, const Spectrum& b);

}  // namespace tacf

#endif  // TACF_CORE_FFT_HPP_
