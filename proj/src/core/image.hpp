#ifndef TACF_CORE_IMAGE_HPP_
#define TACF_CORE_IMAGE_HPP_

#include "core/types.hpp"

namespace tacf {

// Separable 2-D Hann window, values in [0,1], maximum at the center.
// A 1-point axis degenerates to 1.0.
MapF hann_window(int h, int w);

// Samples the axis-aligned region of size (box.w*padding, box.h*padding)
// centered on (box.cx, box.cy) and resizes it to (out_w, out_h) with
// bilinear interpolation. Pixels outside the frame replicate the nearest
// edge pixel. Output values are scaled to [0,1].
//
// Coordinates are continuous: pixel (x,y) covers [x,x+1) x [y,y+1), so a
// box (cx=8, w=16) spans pixels 0..15 exactly.
Patch extract_patch(const Frame& frame, const BoundingBox& box, double padding,
                    int out_w, int out_h);

// Integer replicate-border crop of [x0, x0+w) x [y0, y0+h), scaled to [0,1].
Patch crop_replicate(const Frame& frame, int x0, int y0, int w, int h);

// Per-channel bilinear resize (half-pixel-center convention; same-size
// resize is the identity).
Patch resize_bilinear(const Patch& src, int out_w, int out_h);

}  // namespace tacf

#endif  // TACF_CORE_IMAGE_HPP_
