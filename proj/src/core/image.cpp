#include "core/image.hpp"

#include <algorithm>
#include <cmath>

namespace tacf {
namespace {

std::vector<double> hann_1d(int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = 1.0;
    return v;
  }
  const double k = 2.0 * M_PI / (n - 1);
  for (int i = 0; i < n; ++i) {
    v[i] = 0.5 * (1.0 - std::cos(k * i));
  }
  return v;
}

inline int clampi(int x, int lo, int hi) { return x < lo ? lo : (x > hi ? hi : x); }

}  // namespace

MapF hann_window(int h, int w) {
  if (h < 1 || w < 1) {
    throw Error(ErrorCode::InvalidInput, "hann_window: dims must be >= 1");
  }
  const std::vector<double> hy = hann_1d(h);
  const std::vector<double> hx = hann_1d(w);
  MapF out(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      out.at(i, j) = hy[i] * hx[j];
    }
  }
  return out;
}

Patch crop_replicate(const Frame& frame, int x0, int y0, int w, int h) {
  Patch p;
  p.h = h;
  p.w = w;
  p.c = frame.channels;
  p.v.resize(static_cast<size_t>(h) * w * p.c);
  const double inv = 1.0 / 255.0;
  for (int c = 0; c < p.c; ++c) {
    for (int y = 0; y < h; ++y) {
      const int sy = clampi(y0 + y, 0, frame.height - 1);
      for (int x = 0; x < w; ++x) {
        const int sx = clampi(x0 + x, 0, frame.width - 1);
        p.at(y, x, c) = frame.px(sy, sx, c) * inv;
      }
    }
  }
  return p;
}

Patch resize_bilinear(const Patch& src, int out_w, int out_h) {
  if (src.w == out_w && src.h == out_h) return src;
  Patch dst;
  dst.h = out_h;
  dst.w = out_w;
  dst.c = src.c;
  dst.source_box = src.source_box;
  dst.v.resize(static_cast<size_t>(out_h) * out_w * src.c);
  const double sx_scale = static_cast<double>(src.w) / out_w;
  const double sy_scale = static_cast<double>(src.h) / out_h;
  for (int c = 0; c < src.c; ++c) {
    for (int y = 0; y < out_h; ++y) {
      double fy = (y + 0.5) * sy_scale - 0.5;
      int y0 = static_cast<int>(std::floor(fy));
      double wy = fy - y0;
      const int ya = clampi(y0, 0, src.h - 1);
      const int yb = clampi(y0 + 1, 0, src.h - 1);
      for (int x = 0; x < out_w; ++x) {
        double fx = (x + 0.5) * sx_scale - 0.5;
        int x0 = static_cast<int>(std::floor(fx));
        double wx = fx - x0;
        const int xa = clampi(x0, 0, src.w - 1);
        const int xb = clampi(x0 + 1, 0, src.w - 1);
        const double top = src.at(ya, xa, c) * (1.0 - wx) + src.at(ya, xb, c) * wx;
        const double bot = src.at(yb, xa, c) * (1.0 - wx) + src.at(yb, xb, c) * wx;
        dst.at(y, x, c) = top * (1.0 - wy) + bot * wy;
      }
    }
  }
  return dst;
}

Patch extract_patch(const Frame& frame, const BoundingBox& box, double padding,
                    int out_w, int out_h) {
  if (!frame.valid()) {
    throw Error(ErrorCode::InvalidInput, "extract_patch: invalid frame buffer");
  }
  if (padding < 1.0) {
    throw Error(ErrorCode::InvalidRegion, "extract_patch: padding must be >= 1");
  }
  if (box.w * padding < 1.0 || box.h * padding < 1.0) {
    throw Error(ErrorCode::InvalidRegion,
                "extract_patch: degenerate box (padded size < 1 px)");
  }
  if (out_w < 1 || out_h < 1) {
    throw Error(ErrorCode::InvalidInput, "extract_patch: bad output size");
  }
  const int pw = std::max<int>(1, static_cast<int>(std::lround(box.w * padding)));
  const int ph = std::max<int>(1, static_cast<int>(std::lround(box.h * padding)));
  const int x0 = static_cast<int>(std::lround(box.cx - pw * 0.5));
  const int y0 = static_cast<int>(std::lround(box.cy - ph * 0.5));
  Patch raw = crop_replicate(frame, x0, y0, pw, ph);
  raw.source_box = BoundingBox{box.cx, box.cy, static_cast<double>(pw),
                               static_cast<double>(ph)};
  return resize_bilinear(raw, out_w, out_h);
}

}  // namespace tacf
