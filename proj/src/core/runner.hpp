#ifndef TACF_CORE_RUNNER_HPP_
#define TACF_CORE_RUNNER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "core/metrics.hpp"
#include "core/sequence.hpp"
#include "core/tracker.hpp"

namespace tacf {

struct RunOptions {
  std::string out_dir;
  int workers = 1;
  bool verbose = false;      // adds per-channel attention CSV
  std::string command;       // recorded verbatim in the manifest
  std::optional<uint64_t> seed;
  std::vector<std::string> inputs;  // recorded in the manifest
};

struct SequenceResult {
  std::string name;
  int frames = 0;
  bool ok = false;
  std::string error;
  std::vector<BoundingBox> boxes;
  std::vector<FrameTelemetry> telemetry;
  std::vector<double> ious;  // frames with a present ground-truth box
  SuccessCurve curve;
  double mean_iou = 0.0;
  double sr05 = 0.0;  // success rate at IoU 0.5 (strict)
  double fps = 0.0;   // tracking loop only; decoding excluded
  double mspf = 0.0;
  std::vector<std::string> attributes;
};

// Runs the tracker over one sequence (init on frame 1 at the ground-truth
// box, one step per following frame) and computes OPE metrics.
SequenceResult run_sequence(const Sequence& seq, const TrackerConfig& cfg);

// cmd_track: results.csv, telemetry.csv, metrics.json, manifest.json
// (and attention.csv in verbose mode) under opts.out_dir.
void run_track(const Sequence& seq, const TrackerConfig& cfg, const RunOptions& opts);

// cmd_bench: evaluates every sequence directory under root with a worker
// pool; per-sequence outputs plus aggregate.json and success_curve.csv.
// The aggregate carries only deterministic metrics (no wall-clock values).
// Returns the number of sequences that succeeded.
int run_bench(const std::string& root, const TrackerConfig& cfg, const RunOptions& opts);

// cmd_ablate: the five stage combinations (baseline; +SA; +DA; +CA; full),
// emitted as ablation.csv / ablation.json.
void run_ablation(const Sequence& seq, const TrackerConfig& cfg, const RunOptions& opts);

void write_manifest(const RunOptions& opts, const TrackerConfig& cfg,
                    const std::string& command_name);

}  // namespace tacf

#endif  // TACF_CORE_RUNNER_HPP_
