#ifndef TACF_CORE_TRACKER_HPP_
#define TACF_CORE_TRACKER_HPP_

#include <memory>
#include <string>
#include <vector>

#include "core/context_attention.hpp"
#include "core/features.hpp"
#include "core/response_attention.hpp"
#include "core/training.hpp"
#include "core/types.hpp"

namespace tacf {

struct TrackerConfig {
  double lambda1 = 5e-5;
  double lambda2 = 0.0625;
  int context_interval = 2;  // frames between context-learning updates
  int context_patches = 4;
  double beta_t = 0.1;
  double eta = 0.02;
  double padding = 2.0;
  int cell_size = 4;
  double kernel_sigma = 0.5;
  double sigma_factor = 0.1;
  double gamma = 0.3;
  int template_size = 150;      // padded region is resized to ~this^2 pixels
  double context_offset = 1.0;  // context centers sit one object-size away
  bool use_ca = true;
  bool use_da = true;
  bool use_sa = true;
  std::string cn_table_path;  // empty: built-in table

  void validate() const;  // throws InvalidConfig
};

struct FrameTelemetry {
  int frame = 0;
  BoundingBox box;
  double peak = 0.0;
  double pme = 0.0;  // PME of the fused detection response
  double gamma_t = 0.0;
  double ms_detect = 0.0;
  double ms_train = 0.0;
  bool context_frame = false;
  std::vector<double> dim_z;  // filled when dimensional attention runs
  std::vector<double> dim_s;
};

// Per-channel detection responses of a sample against the current model.
ResponseStack detect_responses(const FilterBank& bank, const FeatureMap& sample,
                               double kernel_sigma);

// Online tracker: init on frame 1, then one step per frame. Each step
// detects at the previous center, applies the enabled attention stages,
// moves the box, and retrains (with context patches every
// context_interval-th frame when contextual attention is on).
class Tracker {
 public:
  explicit Tracker(const TrackerConfig& cfg);

  void init(const Frame& frame, const BoundingBox& box);
  BoundingBox step(const Frame& frame, FrameTelemetry* telem = nullptr);

  const TrackerConfig& config() const { return cfg_; }
  const BoundingBox& box() const { return box_; }
  int frame_index() const { return frame_idx_; }
  const FilterBank& model() const { return bank_; }

  FeatureMap features_for(const Patch& patch) const;
  int template_w() const { return tw_; }
  int template_h() const { return th_; }

 private:
  void setup_geometry(const BoundingBox& box);
  FilterBank train_on(const Frame& frame, bool context_frame, FrameTelemetry* telem);

  TrackerConfig cfg_;
  std::shared_ptr<const CnTable> cn_owned_;
  const CnTable* cn_ = nullptr;

  int pw_ = 0, ph_ = 0;  // padded region size in image pixels
  int tw_ = 0, th_ = 0;  // template size in pixels
  MapF window_;
  MapF label_;
  FilterBank bank_;
  BoundingBox box_;
  int frame_idx_ = 0;
  double last_disp_px_x_ = 0.0, last_disp_px_y_ = 0.0;      // image pixels
  double last_disp_cell_x_ = 0.0, last_disp_cell_y_ = 0.0;  // grid cells
  bool initialized_ = false;
};

// Dedicated context-free pipeline: plain training and plain channel-sum
// peak finding, no attention stages. Used as the ablation reference; its
// trajectory must match the full tracker with every stage disabled.
class BaselineTracker {
 public:
  explicit BaselineTracker(const TrackerConfig& cfg);

  void init(const Frame& frame, const BoundingBox& box);
  BoundingBox step(const Frame& frame);

  const BoundingBox& box() const { return box_; }

 private:
  FeatureMap features_for(const Patch& patch) const;

  TrackerConfig cfg_;
  std::shared_ptr<const CnTable> cn_owned_;
  const CnTable* cn_ = nullptr;
  int pw_ = 0, ph_ = 0;
  int tw_ = 0, th_ = 0;
  MapF window_;
  MapF label_;
  FilterBank bank_;
  BoundingBox box_;
  bool initialized_ = false;
};

}  // namespace tacf

#endif  // TACF_CORE_TRACKER_HPP_
