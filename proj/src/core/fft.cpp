#include "core/fft.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>
#include <unordered_map>

namespace tacf {
namespace {

// The FFTW planner is not thread-safe; execution is. Each thread keeps its
// own plans and scratch buffers so executions never share state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct ShapePlans {
  int h = 0, w = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ShapePlans(int h_, int w_) : h(h_), w(w_) {
    buf = fftw_alloc_complex(static_cast<size_t>(h) * w);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_2d(h, w, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(h, w, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~ShapePlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  ShapePlans(const ShapePlans&) = delete;
  ShapePlans& operator=(const ShapePlans&) = delete;
};

ShapePlans& plans_for(int h, int w) {
  thread_local std::unordered_map<uint64_t, std::unique_ptr<ShapePlans>> cache;
  const uint64_t key = (static_cast<uint64_t>(h) << 32) | static_cast<uint32_t>(w);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<ShapePlans>(h, w)).first;
  }
  return *it->second;
}

void check_shape(int h, int w) {
  if (h < 1 || w < 1) {
    throw Error(ErrorCode::InvalidInput, "fft2: shape must be at least 1x1");
  }
}

}  // namespace

Spectrum fft2(const MapF& m) {
  check_shape(m.h, m.w);
  ShapePlans& p = plans_for(m.h, m.w);
  const size_t n = m.size();
  for (size_t i = 0; i < n; ++i) {
    p.buf[i][0] = m.v[i];
    p.buf[i][1] = 0.0;
  }
  fftw_execute(p.fwd);
  Spectrum out(m.h, m.w);
  for (size_t i = 0; i < n; ++i) {
    out.v[i] = {p.buf[i][0], p.buf[i][1]};
  }
  return out;
}

MapF ifft2(const Spectrum& s) {
  check_shape(s.h, s.w);
  ShapePlans& p = plans_for(s.h, s.w);
  const size_t n = s.size();
  for (size_t i = 0; i < n; ++i) {
    p.buf[i][0] = s.v[i].real();
    p.buf[i][1] = s.v[i].imag();
  }
  fftw_execute(p.bwd);
  MapF out(s.h, s.w);
  const double scale = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) {
    out.v[i] = p.buf[i][0] * scale;
  }
  return out;
}

MapF ifft2_of_product(const Spectrum& a, const Spectrum& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::InvalidInput, "ifft2_of_product: shape mismatch");
  }
  check_shape(a.h, a.w);
  ShapePlans& p = plans_for(a.h, a.w);
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    const std::complex<double> c = a.v[i] * b.v[i];
    p.buf[i][0] = c.real();
    p.buf[i][1] = c.imag();
  }
  fftw_execute(p.bwd);
  MapF out(a.h, a.w);
  const double scale = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) {
    out.v[i] = p.buf[i][0] * scale;
  }
  return out;
}

}  // namespace tacf
