#include "core/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace fs = std::filesystem;

namespace tacf {
namespace {

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

ordered_json config_json(const TrackerConfig& cfg) {
  ordered_json j;
  j["lambda1"] = cfg.lambda1;
  j["lambda2"] = cfg.lambda2;
  j["fc"] = cfg.context_interval;
  j["context_patches"] = cfg.context_patches;
  j["beta_t"] = cfg.beta_t;
  j["eta"] = cfg.eta;
  j["padding"] = cfg.padding;
  j["cell_size"] = cfg.cell_size;
  j["kernel_sigma"] = cfg.kernel_sigma;
  j["sigma_factor"] = cfg.sigma_factor;
  j["gamma"] = cfg.gamma;
  j["template_size"] = cfg.template_size;
  j["context_offset"] = cfg.context_offset;
  j["ca"] = cfg.use_ca;
  j["da"] = cfg.use_da;
  j["sa"] = cfg.use_sa;
  j["cn_table"] = cfg.cn_table_path.empty() ? "builtin" : cfg.cn_table_path;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
  out << text;
}

ordered_json metrics_json(const SequenceResult& r) {
  ordered_json j;
  j["name"] = r.name;
  j["frames"] = r.frames;
  j["auc"] = r.curve.auc;
  j["sr_at_0_5"] = r.sr05;
  j["mean_iou"] = r.mean_iou;
  j["fps"] = r.fps;
  j["mspf"] = r.mspf;
  j["attributes"] = r.attributes;
  return j;
}

void write_sequence_outputs(const SequenceResult& r, const fs::path& dir,
                            bool verbose) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "results.csv");
    out << "frame,x,y,w,h\n";
    char line[160];
    for (size_t i = 0; i < r.boxes.size(); ++i) {
      const BoundingBox& b = r.boxes[i];
      std::snprintf(line, sizeof(line), "%zu,%.3f,%.3f,%.3f,%.3f\n", i + 1, b.x(),
                    b.y(), b.w, b.h);
      out << line;
    }
  }
  {
    std::ofstream out(dir / "telemetry.csv");
    out << "frame,x,y,w,h,peak,pme_object,gamma_t,ms_detect,ms_train,ctx\n";
    char line[256];
    for (const FrameTelemetry& t : r.telemetry) {
      std::snprintf(line, sizeof(line),
                    "%d,%.3f,%.3f,%.3f,%.3f,%.6g,%.6g,%.6g,%.3f,%.3f,%d\n", t.frame,
                    t.box.x(), t.box.y(), t.box.w, t.box.h, t.peak, t.pme, t.gamma_t,
                    t.ms_detect, t.ms_train, t.context_frame ? 1 : 0);
      out << line;
    }
  }
  if (verbose) {
    std::ofstream out(dir / "attention.csv");
    out << "frame,channel,z,s\n";
    for (const FrameTelemetry& t : r.telemetry) {
      for (size_t d = 0; d < t.dim_z.size(); ++d) {
        out << t.frame << "," << d << "," << t.dim_z[d] << "," << t.dim_s[d] << "\n";
      }
    }
  }
  write_text(dir / "metrics.json", metrics_json(r).dump(2) + "\n");
}

TrackerConfig ablation_config(const TrackerConfig& base, bool ca, bool da, bool sa) {
  TrackerConfig cfg = base;
  cfg.use_ca = ca;
  cfg.use_da = da;
  cfg.use_sa = sa;
  return cfg;
}

}  // namespace

SequenceResult run_sequence(const Sequence& seq, const TrackerConfig& cfg) {
  SequenceResult r;
  r.name = seq.name;
  r.frames = seq.length();
  r.attributes = seq.attributes;
  if (seq.length() < 1 || seq.gt.empty() || !seq.gt.front().present) {
    throw Error(ErrorCode::InvalidInput, "run_sequence: no usable first frame");
  }

  Tracker tracker(cfg);
  double loop_seconds = 0.0;

  for (int i = 0; i < seq.length(); ++i) {
    // Decode outside the timed section; FPS covers the tracking loop only.
    Frame decoded;
    const Frame* frame;
    if (seq.in_memory()) {
      frame = &seq.frame_ref(i);
    } else {
      decoded = seq.load_frame(i);
      frame = &decoded;
    }

    const auto t0 = Clock::now();
    if (i == 0) {
      tracker.init(*frame, seq.gt.front().box);
      FrameTelemetry t;
      t.frame = 1;
      t.box = tracker.box();
      r.telemetry.push_back(std::move(t));
    } else {
      FrameTelemetry t;
      tracker.step(*frame, &t);
      r.telemetry.push_back(std::move(t));
    }
    loop_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
    r.boxes.push_back(tracker.box());
  }

  for (int i = 0; i < seq.length(); ++i) {
    if (!seq.gt[i].present) continue;  // occlusion annotations excluded
    r.ious.push_back(iou(r.boxes[i], seq.gt[i].box));
  }
  if (!r.ious.empty()) {
    r.curve = success_auc(r.ious);
    double acc = 0.0;
    int hits = 0;
    for (double v : r.ious) {
      acc += v;
      if (v > 0.5) ++hits;
    }
    r.mean_iou = acc / r.ious.size();
    r.sr05 = static_cast<double>(hits) / r.ious.size();
  }
  r.fps = loop_seconds > 0.0 ? seq.length() / loop_seconds : 0.0;
  r.mspf = seq.length() > 0 ? 1000.0 * loop_seconds / seq.length() : 0.0;
  r.ok = true;
  return r;
}

void write_manifest(const RunOptions& opts, const TrackerConfig& cfg,
                    const std::string& command_name) {
  ordered_json j;
  j["tool"] = "tacf";
  j["version"] = "0.1.0";
  j["subcommand"] = command_name;
  j["command"] = opts.command;
  j["config"] = config_json(cfg);
  j["inputs"] = opts.inputs;
  j["out_dir"] = opts.out_dir;
  if (opts.seed) {
    j["seed"] = *opts.seed;
  } else {
    j["seed"] = nullptr;
  }
  fs::create_directories(opts.out_dir);
  write_text(fs::path(opts.out_dir) / "manifest.json", j.dump(2) + "\n");
}

void run_track(const Sequence& seq, const TrackerConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  write_manifest(opts, cfg, "track");
  SequenceResult r = run_sequence(seq, cfg);
  write_sequence_outputs(r, opts.out_dir, opts.verbose);
}

int run_bench(const std::string& root, const TrackerConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::Io, "dataset root not found: " + root);
  }
  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path().string());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) {
    throw Error(ErrorCode::InvalidInput, "no sequence directories under " + root);
  }
  write_manifest(opts, cfg, "bench");

  std::vector<SequenceResult> results(dirs.size());
  std::atomic<size_t> next{0};
  const int workers = std::max(1, opts.workers);
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= dirs.size()) return;
      try {
        Sequence seq = load_sequence(dirs[i]);
        results[i] = run_sequence(seq, cfg);
      } catch (const std::exception& e) {
        results[i].name = fs::path(dirs[i]).filename().string();
        results[i].ok = false;
        results[i].error = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }

  // Single aggregator writes everything, in fixed sequence order.
  int succeeded = 0;
  ordered_json agg;
  ordered_json per_seq = ordered_json::array();
  ordered_json failures = ordered_json::array();
  double sum_auc = 0.0, sum_iou = 0.0, sum_sr = 0.0;
  std::vector<double> mean_curve(101, 0.0);
  for (size_t i = 0; i < dirs.size(); ++i) {
    const SequenceResult& r = results[i];
    if (!r.ok) {
      failures.push_back({{"name", r.name}, {"error", r.error}});
      continue;
    }
    ++succeeded;
    sum_auc += r.curve.auc;
    sum_iou += r.mean_iou;
    sum_sr += r.sr05;
    for (size_t k = 0; k < r.curve.values.size(); ++k) mean_curve[k] += r.curve.values[k];
    ordered_json sj;
    sj["name"] = r.name;
    sj["frames"] = r.frames;
    sj["auc"] = r.curve.auc;
    sj["sr_at_0_5"] = r.sr05;
    sj["mean_iou"] = r.mean_iou;
    if (!r.attributes.empty()) sj["attributes"] = r.attributes;
    per_seq.push_back(sj);

    write_sequence_outputs(r, fs::path(opts.out_dir) / r.name, opts.verbose);
  }
  // Sequences weigh equally in the aggregate.
  agg["n_sequences"] = dirs.size();
  agg["n_succeeded"] = succeeded;
  agg["mean_auc"] = succeeded ? sum_auc / succeeded : 0.0;
  agg["mean_iou"] = succeeded ? sum_iou / succeeded : 0.0;
  agg["mean_sr_at_0_5"] = succeeded ? sum_sr / succeeded : 0.0;
  agg["sequences"] = per_seq;
  agg["failures"] = failures;
  write_text(fs::path(opts.out_dir) / "aggregate.json", agg.dump(2) + "\n");

  if (succeeded > 0) {
    std::ofstream curve(fs::path(opts.out_dir) / "success_curve.csv");
    curve << "threshold,success\n";
    char line[64];
    for (int k = 0; k <= 100; ++k) {
      std::snprintf(line, sizeof(line), "%.2f,%.6f\n", k * 0.01,
                    mean_curve[k] / succeeded);
      curve << line;
    }
  }
  return succeeded;
}

void run_ablation(const Sequence& seq, const TrackerConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  write_manifest(opts, cfg, "ablate");

  struct Row {
    const char* key;
    bool ca, da, sa;
  };
  const Row rows[] = {
      {"KCC", false, false, false},
      {"+SA", false, false, true},
      {"+DA", false, true, false},
      {"+CA", true, false, false},
      {"TACF", true, true, true},
  };

  ordered_json out = ordered_json::array();
  fs::create_directories(opts.out_dir);
  std::ofstream csv(fs::path(opts.out_dir) / "ablation.csv");
  csv << "tracker,ca,da,sa,auc,mean_iou,mspf\n";
  for (const Row& row : rows) {
    const TrackerConfig rc = ablation_config(cfg, row.ca, row.da, row.sa);
    SequenceResult r = run_sequence(seq, rc);
    char line[160];
    std::snprintf(line, sizeof(line), "%s,%d,%d,%d,%.6f,%.6f,%.3f\n", row.key,
                  row.ca ? 1 : 0, row.da ? 1 : 0, row.sa ? 1 : 0, r.curve.auc,
                  r.mean_iou, r.mspf);
    csv << line;
    ordered_json rj;
    rj["tracker"] = row.key;
    rj["ca"] = row.ca;
    rj["da"] = row.da;
    rj["sa"] = row.sa;
    rj["auc"] = r.curve.auc;
    rj["mean_iou"] = r.mean_iou;
    rj["mspf"] = r.mspf;
    out.push_back(rj);
  }
  write_text(fs::path(opts.out_dir) / "ablation.json", out.dump(2) + "\n");
}

}  // namespace tacf
