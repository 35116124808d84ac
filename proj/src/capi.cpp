#include "tacf/tacf.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "core/metrics.hpp"
#include "core/runner.hpp"
#include "core/sequence.hpp"
#include "core/synth.hpp"
#include "core/tracker.hpp"

struct tacf_tracker_s {
  tacf::Tracker impl;
  explicit tacf_tracker_s(const tacf::TrackerConfig& cfg) : impl(cfg) {}
};

struct tacf_sequence_s {
  tacf::Sequence impl;
};

namespace {

thread_local std::string g_last_error;

int status_for(const tacf::Error& e) {
  switch (e.code()) {
    case tacf::ErrorCode::InvalidConfig:
      return TACF_ERR_INVALID_CONFIG;
    case tacf::ErrorCode::Io:
      return TACF_ERR_IO;
    case tacf::ErrorCode::Format:
      return TACF_ERR_FORMAT;
    case tacf::ErrorCode::InvalidInput:
    case tacf::ErrorCode::InvalidRegion:
      return TACF_ERR_INVALID_ARG;
    default:
      return TACF_ERR_RUNTIME;
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TACF_OK;
  } catch (const tacf::Error& e) {
    g_last_error = e.what();
    return status_for(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TACF_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return TACF_ERR_RUNTIME;
  }
}

int fail_arg(const char* msg) {
  g_last_error = msg;
  return TACF_ERR_INVALID_ARG;
}

tacf::TrackerConfig to_cpp(const tacf_config& c) {
  tacf::TrackerConfig cfg;
  cfg.lambda1 = c.lambda1;
  cfg.lambda2 = c.lambda2;
  cfg.context_interval = c.context_interval;
  cfg.context_patches = c.context_patches;
  cfg.beta_t = c.beta_t;
  cfg.eta = c.eta;
  cfg.padding = c.padding;
  cfg.cell_size = c.cell_size;
  cfg.kernel_sigma = c.kernel_sigma;
  cfg.sigma_factor = c.sigma_factor;
  cfg.gamma = c.gamma;
  cfg.template_size = c.template_size;
  cfg.context_offset = c.context_offset;
  cfg.use_ca = c.use_ca != 0;
  cfg.use_da = c.use_da != 0;
  cfg.use_sa = c.use_sa != 0;
  if (c.cn_table_path && c.cn_table_path[0]) cfg.cn_table_path = c.cn_table_path;
  return cfg;
}

tacf::RunOptions to_cpp(const tacf_run_options& o) {
  tacf::RunOptions opts;
  opts.out_dir = o.out_dir ? o.out_dir : "";
  opts.workers = o.workers > 0 ? o.workers : 1;
  opts.verbose = o.verbose != 0;
  if (o.command) opts.command = o.command;
  if (o.has_seed) opts.seed = o.seed;
  return opts;
}

tacf_rect to_c(const tacf::BoundingBox& b) {
  return tacf_rect{b.x(), b.y(), b.w, b.h};
}

tacf::Frame make_frame(const uint8_t* pixels, int width, int height, int channels) {
  tacf::Frame f;
  f.width = width;
  f.height = height;
  f.channels = channels;
  f.data.assign(pixels, pixels + static_cast<size_t>(width) * height * channels);
  if (!f.valid()) {
    throw tacf::Error(tacf::ErrorCode::InvalidInput, "bad frame buffer dimensions");
  }
  return f;
}

void fill_telemetry(const tacf::FrameTelemetry& t, tacf_telemetry* out) {
  out->frame = t.frame;
  out->box = to_c(t.box);
  out->peak = t.peak;
  out->pme = t.pme;
  out->gamma_t = t.gamma_t;
  out->ms_detect = t.ms_detect;
  out->ms_train = t.ms_train;
  out->context_frame = t.context_frame ? 1 : 0;
}

}  // namespace

extern "C" {

const char* tacf_version(void) { return "0.1.0"; }

const char* tacf_last_error(void) { return g_last_error.c_str(); }

void tacf_config_default(tacf_config* cfg) {
  if (!cfg) return;
  const tacf::TrackerConfig d;
  cfg->lambda1 = d.lambda1;
  cfg->lambda2 = d.lambda2;
  cfg->context_interval = d.context_interval;
  cfg->context_patches = d.context_patches;
  cfg->beta_t = d.beta_t;
  cfg->eta = d.eta;
  cfg->padding = d.padding;
  cfg->cell_size = d.cell_size;
  cfg->kernel_sigma = d.kernel_sigma;
  cfg->sigma_factor = d.sigma_factor;
  cfg->gamma = d.gamma;
  cfg->template_size = d.template_size;
  cfg->context_offset = d.context_offset;
  cfg->use_ca = d.use_ca ? 1 : 0;
  cfg->use_da = d.use_da ? 1 : 0;
  cfg->use_sa = d.use_sa ? 1 : 0;
  cfg->cn_table_path = nullptr;
}

int tacf_tracker_create(tacf_tracker** out, const tacf_config* cfg) {
  if (!out || !cfg) return fail_arg("tracker_create: null argument");
  *out = nullptr;
  return guarded([&] { *out = new tacf_tracker_s(to_cpp(*cfg)); });
}

void tacf_tracker_destroy(tacf_tracker* tracker) { delete tracker; }

int tacf_tracker_init(tacf_tracker* tracker, const uint8_t* pixels, int width,
                      int height, int channels, tacf_rect init_box) {
  if (!tracker || !pixels) return fail_arg("tracker_init: null argument");
  return guarded([&] {
    tacf::Frame f = make_frame(pixels, width, height, channels);
    tracker->impl.init(
        f, tacf::BoundingBox::from_tl(init_box.x, init_box.y, init_box.w, init_box.h));
  });
}

int tacf_tracker_step(tacf_tracker* tracker, const uint8_t* pixels, int width,
                      int height, int channels, tacf_rect* out_box,
                      tacf_telemetry* telemetry) {
  if (!tracker || !pixels || !out_box) return fail_arg("tracker_step: null argument");
  return guarded([&] {
    tacf::Frame f = make_frame(pixels, width, height, channels);
    tacf::FrameTelemetry t;
    const tacf::BoundingBox box = tracker->impl.step(f, &t);
    *out_box = to_c(box);
    if (telemetry) fill_telemetry(t, telemetry);
  });
}

int tacf_sequence_load(tacf_sequence** out, const char* dir) {
  if (!out || !dir) return fail_arg("sequence_load: null argument");
  *out = nullptr;
  return guarded([&] {
    auto* seq = new tacf_sequence_s;
    try {
      seq->impl = tacf::load_sequence(dir);
    } catch (...) {
      delete seq;
      throw;
    }
    *out = seq;
  });
}

int tacf_sequence_synth(tacf_sequence** out, const char* scenario_json,
                        uint64_t seed_override, int has_seed_override) {
  if (!out || !scenario_json) return fail_arg("sequence_synth: null argument");
  *out = nullptr;
  return guarded([&] {
    tacf::Scenario sc = tacf::scenario_from_json(scenario_json);
    if (has_seed_override) sc.seed = seed_override;
    auto* seq = new tacf_sequence_s;
    try {
      seq->impl = tacf::generate_sequence(sc);
    } catch (...) {
      delete seq;
      throw;
    }
    *out = seq;
  });
}

int tacf_sequence_save(const tacf_sequence* seq, const char* dir) {
  if (!seq || !dir) return fail_arg("sequence_save: null argument");
  return guarded([&] { tacf::save_sequence(seq->impl, dir); });
}

int tacf_sequence_length(const tacf_sequence* seq) {
  return seq ? seq->impl.length() : 0;
}

int tacf_sequence_name(const tacf_sequence* seq, char* buf, size_t buf_size) {
  if (!seq || !buf || buf_size == 0) return fail_arg("sequence_name: null argument");
  std::snprintf(buf, buf_size, "%s", seq->impl.name.c_str());
  return TACF_OK;
}

int tacf_sequence_gt(const tacf_sequence* seq, int frame_index, tacf_rect* out,
                     int* present) {
  if (!seq || !out) return fail_arg("sequence_gt: null argument");
  if (frame_index < 0 || frame_index >= seq->impl.length()) {
    return fail_arg("sequence_gt: frame index out of range");
  }
  const tacf::GtEntry& e = seq->impl.gt[frame_index];
  *out = to_c(e.box);
  if (present) *present = e.present ? 1 : 0;
  return TACF_OK;
}

int tacf_sequence_frame_info(const tacf_sequence* seq, int frame_index,
                             int* width, int* height, int* channels) {
  if (!seq || !width || !height || !channels) {
    return fail_arg("sequence_frame_info: null argument");
  }
  return guarded([&] {
    const tacf::Frame f = seq->impl.load_frame(frame_index);
    *width = f.width;
    *height = f.height;
    *channels = f.channels;
  });
}

int tacf_sequence_frame_pixels(const tacf_sequence* seq, int frame_index,
                               uint8_t* buf, size_t buf_size) {
  if (!seq || !buf) return fail_arg("sequence_frame_pixels: null argument");
  return guarded([&] {
    const tacf::Frame f = seq->impl.load_frame(frame_index);
    if (buf_size < f.data.size()) {
      throw tacf::Error(tacf::ErrorCode::InvalidInput,
                        "sequence_frame_pixels: buffer too small");
    }
    std::memcpy(buf, f.data.data(), f.data.size());
  });
}

void tacf_sequence_destroy(tacf_sequence* seq) { delete seq; }

int tacf_run_track(const tacf_sequence* seq, const tacf_config* cfg,
                   const tacf_run_options* opts) {
  if (!seq || !cfg || !opts || !opts->out_dir) {
    return fail_arg("run_track: null argument");
  }
  return guarded([&] {
    tacf::RunOptions o = to_cpp(*opts);
    o.inputs.push_back(seq->impl.name);
    tacf::run_track(seq->impl, to_cpp(*cfg), o);
  });
}

int tacf_run_bench(const char* dataset_root, const tacf_config* cfg,
                   const tacf_run_options* opts) {
  if (!dataset_root || !cfg || !opts || !opts->out_dir) {
    return fail_arg("run_bench: null argument");
  }
  return guarded([&] {
    tacf::RunOptions o = to_cpp(*opts);
    o.inputs.push_back(dataset_root);
    const int ok = tacf::run_bench(dataset_root, to_cpp(*cfg), o);
    if (ok < 1) {
      throw tacf::Error(tacf::ErrorCode::Internal, "no sequence succeeded");
    }
  });
}

int tacf_run_ablation(const tacf_sequence* seq, const tacf_config* cfg,
                      const tacf_run_options* opts) {
  if (!seq || !cfg || !opts || !opts->out_dir) {
    return fail_arg("run_ablation: null argument");
  }
  return guarded([&] {
    tacf::RunOptions o = to_cpp(*opts);
    o.inputs.push_back(seq->impl.name);
    tacf::run_ablation(seq->impl, to_cpp(*cfg), o);
  });
}

int tacf_cn_table_write(const char* path) {
  if (!path) return fail_arg("cn_table_write: null path");
  return guarded([&] { tacf::CnTable::builtin().write(path); });
}

int tacf_iou(tacf_rect a, tacf_rect b, double* out) {
  if (!out) return fail_arg("iou: null output");
  return guarded([&] {
    *out = tacf::iou(tacf::BoundingBox::from_tl(a.x, a.y, a.w, a.h),
                     tacf::BoundingBox::from_tl(b.x, b.y, b.w, b.h));
  });
}

}  // extern "C"
