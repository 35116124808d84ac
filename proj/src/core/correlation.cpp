#include "core/correlation.hpp"

#include <cmath>

namespace tacf {
namespace {

void check_same_shape(int h1, int w1, int h2, int w2, const char* who) {
  if (h1 != h2 || w1 != w2) {
    throw Error(ErrorCode::InvalidInput, std::string(who) + ": shape mismatch");
  }
}

}  // namespace

MapF energy_normalize(const MapF& m) {
  double e = 0.0;
  for (double x : m.v) e += x * x;
  if (e < 1e-24) return m;
  const double inv = 1.0 / std::sqrt(e);
  MapF out(m.h, m.w);
  for (size_t i = 0; i < m.size(); ++i) out.v[i] = m.v[i] * inv;
  return out;
}

ChannelSpectrum::ChannelSpectrum(const MapF& m) : spec(fft2(m)) {
  for (double x : m.v) energy += x * x;
}

MapF kernel_correlation(const ChannelSpectrum& x, const ChannelSpectrum& z,
                        double sigma) {
  check_same_shape(x.spec.h, x.spec.w, z.spec.h, z.spec.w, "kernel_correlation");
  if (sigma <= 0.0) {
    throw Error(ErrorCode::InvalidInput, "kernel_correlation: sigma must be > 0");
  }
  Spectrum prod(x.spec.h, x.spec.w);
  for (size_t i = 0; i < prod.size(); ++i) {
    prod.v[i] = x.spec.v[i] * std::conj(z.spec.v[i]);
  }
  MapF cc = ifft2(prod);
  const double m = static_cast<double>(cc.h) * cc.w;
  const double scale = -1.0 / (sigma * sigma * m);
  const double base = x.energy + z.energy;
  for (double& v : cc.v) {
    double d = base - 2.0 * v;
    if (d < 0.0) d = 0.0;  // float round-off guard
    v = std::exp(d * scale);
  }
  return cc;
}

MapF kernel_correlation(const MapF& x, const MapF& z, double sigma) {
  check_same_shape(x.h, x.w, z.h, z.w, "kernel_correlation");
  return kernel_correlation(ChannelSpectrum(x), ChannelSpectrum(z), sigma);
}

MapF linear_correlation(const MapF& x, const MapF& z) {
  check_same_shape(x.h, x.w, z.h, z.w, "linear_correlation");
  Spectrum xs = fft2(x);
  Spectrum zs = fft2(z);
  for (size_t i = 0; i < zs.size(); ++i) zs.v[i] = std::conj(zs.v[i]);
  return ifft2_of_product(xs, zs);
}

MapF correlate(const Spectrum& filter_spec, const MapF& kernel_vec) {
  check_same_shape(filter_spec.h, filter_spec.w, kernel_vec.h, kernel_vec.w,
                   "correlate");
  return ifft2_of_product(fft2(kernel_vec), filter_spec);
}

MapF circshift(const MapF& m, int dy, int dx) {
  MapF out(m.h, m.w);
  const int sy = ((dy % m.h) + m.h) % m.h;
  const int sx = ((dx % m.w) + m.w) % m.w;
  for (int i = 0; i < m.h; ++i) {
    const int si = (i - sy + m.h) % m.h;
    for (int j = 0; j < m.w; ++j) {
      const int sj = (j - sx + m.w) % m.w;
      out.at(i, j) = m.at(si, sj);
    }
  }
  return out;
}

}  // namespace tacf
