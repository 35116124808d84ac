#ifndef TACF_CORE_TYPES_HPP_
#define TACF_CORE_TYPES_HPP_

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tacf {

enum class ErrorCode {
  InvalidInput,
  InvalidConfig,
  InvalidRegion,
  DegenerateResponse,
  NoPeak,
  Io,
  Format,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// 2-D real map, row-major.
struct MapF {
  int h = 0;
  int w = 0;
  std::vector<double> v;

  MapF() = default;
  MapF(int h_, int w_, double fill = 0.0)
      : h(h_), w(w_), v(static_cast<size_t>(h_) * w_, fill) {}

  double& at(int i, int j) { return v[static_cast<size_t>(i) * w + j]; }
  double at(int i, int j) const { return v[static_cast<size_t>(i) * w + j]; }
  size_t size() const { return v.size(); }
  bool same_shape(const MapF& o) const { return h == o.h && w == o.w; }
};

// 2-D complex spectrum, row-major, same indexing as MapF.
struct Spectrum {
  int h = 0;
  int w = 0;
  std::vector<std::complex<double>> v;

  Spectrum() = default;
  Spectrum(int h_, int w_) : h(h_), w(w_), v(static_cast<size_t>(h_) * w_) {}

  std::complex<double>& at(int i, int j) {
    return v[static_cast<size_t>(i) * w + j];
  }
  const std::complex<double>& at(int i, int j) const {
    return v[static_cast<size_t>(i) * w + j];
  }
  size_t size() const { return v.size(); }
  bool same_shape(const Spectrum& o) const { return h == o.h && w == o.w; }
};

// Axis-aligned box: real-valued center + size in pixels. Never clamped to
// the frame; targets may partially leave the image.
struct BoundingBox {
  double cx = 0, cy = 0, w = 0, h = 0;

  static BoundingBox from_tl(double x, double y, double w_, double h_) {
    return BoundingBox{x + 0.5 * w_, y + 0.5 * h_, w_, h_};
  }
  double x() const { return cx - 0.5 * w; }  // top-left corner
  double y() const { return cy - 0.5 * h; }
};

// Decoded 8-bit frame, row-major interleaved (1 or 3 channels).
struct Frame {
  int width = 0;
  int height = 0;
  int channels = 1;
  int index = 1;  // 1-based frame number
  std::vector<uint8_t> data;

  uint8_t px(int y, int x, int c) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  uint8_t& px(int y, int x, int c) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  bool valid() const {
    return width >= 1 && height >= 1 && (channels == 1 || channels == 3) &&
           data.size() == static_cast<size_t>(width) * height * channels;
  }
};

// Patch sampled from a frame, planar channel layout, values in [0,1].
struct Patch {
  int h = 0;
  int w = 0;
  int c = 1;
  std::vector<double> v;
  BoundingBox source_box;  // the padded region that was sampled

  double at(int y, int x, int ch) const {
    return v[(static_cast<size_t>(ch) * h + y) * w + x];
  }
  double& at(int y, int x, int ch) {
    return v[(static_cast<size_t>(ch) * h + y) * w + x];
  }
};

// Stack of per-cell feature channels sharing one spatial grid.
struct FeatureMap {
  int h = 0;
  int w = 0;
  int cell_size = 1;
  std::vector<MapF> channels;

  int d() const { return static_cast<int>(channels.size()); }
};

}  // namespace tacf

#endif  // TACF_CORE_TYPES_HPP_
