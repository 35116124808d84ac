#ifndef TACF_CORE_SYNTH_HPP_
#define TACF_CORE_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "core/sequence.hpp"

namespace tacf {

// Synthetic stress-test scenario: a textured square target moving over a
// textured background, with optional similar distractors, a sweeping
// occluder, and pixel noise. Generation is fully deterministic in the seed
// (the RNG primitives avoid implementation-defined distributions).
struct Scenario {
  std::string name = "synthetic";
  int width = 320;
  int height = 240;
  int frames = 60;
  uint64_t seed = 1;
  bool color = true;

  double target_w = 48;
  double target_h = 48;
  double x0 = -1;  // <0: auto placement
  double y0 = -1;
  double vx = 2.0;
  double vy = 0.0;

  int clutter = 0;                 // similar distractor count
  double clutter_distance = 1.6;   // distractor offset in target sizes
  double clutter_similarity = 0.85;

  struct Occlusion {
    int start = 0;  // 1-based frame range, inclusive
    int end = 0;
    std::string from = "left";  // left | right | top | bottom
    double size = 1.3;          // occluder size in target sizes
  };
  std::vector<Occlusion> occlusions;

  double noise = 0.0;  // Gaussian sigma as a fraction of 255

  void validate() const;  // throws InvalidConfig
};

Scenario scenario_from_json(const std::string& text);
Scenario scenario_from_json_file(const std::string& path);
std::string scenario_to_json(const Scenario& sc);

Sequence generate_sequence(const Scenario& sc);

}  // namespace tacf

#endif  // TACF_CORE_SYNTH_HPP_
