#ifndef TACF_CORE_SEQUENCE_HPP_
#define TACF_CORE_SEQUENCE_HPP_

#include <string>
#include <vector>

#include "core/types.hpp"

namespace tacf {

struct GtEntry {
  BoundingBox box;
  bool present = true;  // false for NaN (full occlusion) annotations
};

// A tracking sequence: either disk-backed (frame paths + lazy decode) or
// in-memory (synthetic). Ground truth uses the top-left x,y,w,h convention
// on disk and center-size boxes in memory.
struct Sequence {
  std::string name;
  std::vector<std::string> frame_paths;
  std::vector<Frame> frames;  // used when in_memory()
  std::vector<GtEntry> gt;
  std::vector<std::string> attributes;

  bool in_memory() const { return !frames.empty(); }
  int length() const {
    return static_cast<int>(in_memory() ? frames.size() : frame_paths.size());
  }
  // Decodes (or copies the index into) frame i; 1-based frame.index is set.
  Frame load_frame(int i) const;
  const Frame& frame_ref(int i) const { return frames[i]; }
};

// Loads a sequence directory: ordered image files (directly or under img/)
// plus a ground-truth text file (groundtruth*.txt or *gt*.txt) with one
// "x,y,w,h" line per frame, comma/tab/space separated; NaN lines mark
// absent boxes. An optional attributes.txt is ingested as tags.
Sequence load_sequence(const std::string& dir);

// Writes frames as PNG plus groundtruth_rect.txt (and attributes.txt).
void save_sequence(const Sequence& seq, const std::string& dir);

Frame decode_image(const std::string& path);
void write_image_png(const Frame& frame, const std::string& path);

}  // namespace tacf

#endif  // TACF_CORE_SEQUENCE_HPP_
