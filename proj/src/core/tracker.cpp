#include "core/tracker.hpp"

#include <chrono>
#include <cmath>

#include "core/image.hpp"

namespace tacf {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Geometry {
  int pw, ph, tw, th;
};

// Nearest power of two in log space (ties go down). Power-of-two grids keep
// every per-frame transform on the fast FFT path.
int snap_grid(double ideal) {
  int best = 4;
  double best_err = 1e30;
  for (int g = 4; g <= 128; g *= 2) {
    const double err = std::abs(std::log(ideal / g));
    if (err < best_err) {
      best_err = err;
      best = g;
    }
  }
  return best;
}

Geometry compute_geometry(const BoundingBox& box, const TrackerConfig& cfg) {
  Geometry g;
  g.pw = std::max<int>(1, static_cast<int>(std::lround(box.w * cfg.padding)));
  g.ph = std::max<int>(1, static_cast<int>(std::lround(box.h * cfg.padding)));
  const double area = static_cast<double>(cfg.template_size) * cfg.template_size;
  const double scale = std::sqrt(area / (static_cast<double>(g.pw) * g.ph));
  g.tw = snap_grid(g.pw * scale / cfg.cell_size) * cfg.cell_size;
  g.th = snap_grid(g.ph * scale / cfg.cell_size) * cfg.cell_size;
  return g;
}

const CnTable* resolve_cn_table(const TrackerConfig& cfg,
                                std::shared_ptr<const CnTable>* owned) {
  if (cfg.cn_table_path.empty()) {
    return &CnTable::builtin();
  }
  *owned = std::make_shared<const CnTable>(CnTable::load(cfg.cn_table_path));
  return owned->get();
}

FeatureMap build_features(const Patch& patch, const CnTable& table,
                          int cell_size, const MapF& window) {
  std::vector<FeatureMap> maps;
  maps.reserve(3);
  maps.push_back(extract_hog(patch, cell_size));
  if (patch.c == 3) {
    maps.push_back(extract_cn(patch, table, cell_size));
  }
  maps.push_back(extract_gray(patch, cell_size));
  return stack_features(maps, window);
}

void check_box(const BoundingBox& box) {
  if (!(box.w > 0.0) || !(box.h > 0.0) || !std::isfinite(box.cx) ||
      !std::isfinite(box.cy)) {
    throw Error(ErrorCode::InvalidInput, "tracker: box size must be positive");
  }
}

}  // namespace

void TrackerConfig::validate() const {
  if (!(lambda1 > 0.0)) throw Error(ErrorCode::InvalidConfig, "lambda1 must be > 0");
  if (lambda2 < 0.0) throw Error(ErrorCode::InvalidConfig, "lambda2 must be >= 0");
  if (context_interval < 1)
    throw Error(ErrorCode::InvalidConfig, "context interval must be >= 1");
  if (context_patches < 0)
    throw Error(ErrorCode::InvalidConfig, "context patch count must be >= 0");
  if (beta_t < 0.0) throw Error(ErrorCode::InvalidConfig, "beta_t must be >= 0");
  if (eta < 0.0 || eta > 1.0)
    throw Error(ErrorCode::InvalidConfig, "eta must be in [0,1]");
  if (padding < 1.0) throw Error(ErrorCode::InvalidConfig, "padding must be >= 1");
  if (cell_size < 1) throw Error(ErrorCode::InvalidConfig, "cell_size must be >= 1");
  if (!(kernel_sigma > 0.0))
    throw Error(ErrorCode::InvalidConfig, "kernel_sigma must be > 0");
  if (!(sigma_factor > 0.0))
    throw Error(ErrorCode::InvalidConfig, "sigma_factor must be > 0");
  if (gamma < 0.0) throw Error(ErrorCode::InvalidConfig, "gamma must be >= 0");
  if (template_size < 2 * cell_size)
    throw Error(ErrorCode::InvalidConfig, "template_size too small for cell grid");
  if (!(context_offset > 0.0))
    throw Error(ErrorCode::InvalidConfig, "context_offset must be > 0");
}

ResponseStack detect_responses(const FilterBank& bank, const FeatureMap& sample,
                               double kernel_sigma) {
  if (sample.d() != bank.d) {
    throw Error(ErrorCode::InvalidInput, "detect: channel count mismatch");
  }
  ResponseStack stack;
  stack.reserve(bank.d);
  for (int n = 0; n < bank.d; ++n) {
    ChannelSpectrum zs(energy_normalize(sample.channels[n]));
    MapF k = kernel_correlation(zs, bank.tmpl_norm[n], kernel_sigma);
    stack.push_back(correlate(bank.filters[n], k));
  }
  return stack;
}

Tracker::Tracker(const TrackerConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  cn_ = resolve_cn_table(cfg_, &cn_owned_);
}

void Tracker::setup_geometry(const BoundingBox& box) {
  const Geometry g = compute_geometry(box, cfg_);
  pw_ = g.pw;
  ph_ = g.ph;
  tw_ = g.tw;
  th_ = g.th;
  window_ = hann_window(th_ / cfg_.cell_size, tw_ / cfg_.cell_size);
  label_ = gaussian_label(th_ / cfg_.cell_size, tw_ / cfg_.cell_size,
                          cfg_.sigma_factor);
}

FeatureMap Tracker::features_for(const Patch& patch) const {
  return build_features(patch, *cn_, cfg_.cell_size, window_);
}

void Tracker::init(const Frame& frame, const BoundingBox& box) {
  check_box(box);
  setup_geometry(box);
  Patch patch = extract_patch(frame, box, cfg_.padding, tw_, th_);
  FeatureMap feats = features_for(patch);
  // Frame 1 trains context-free: penalties need model responses, which do
  // not exist yet.
  bank_ = train_plain(feats, label_, cfg_.lambda1, cfg_.kernel_sigma);
  box_ = box;
  frame_idx_ = 1;
  last_disp_px_x_ = last_disp_px_y_ = 0.0;
  last_disp_cell_x_ = last_disp_cell_y_ = 0.0;
  initialized_ = true;
}

FilterBank Tracker::train_on(const Frame& frame, bool context_frame,
                             FrameTelemetry* telem) {
  Patch patch = extract_patch(frame, box_, cfg_.padding, tw_, th_);
  FeatureMap feats = features_for(patch);
  if (!context_frame) {
    return train_plain(feats, label_, cfg_.lambda1, cfg_.kernel_sigma);
  }

  // Penalties come from response quality of the current model on the object
  // versus the context patches (channel-summed responses).
  MapF r0 = sum_channels(detect_responses(bank_, feats, cfg_.kernel_sigma));
  const auto offsets = context_offsets(box_, cfg_.context_offset);
  std::vector<Patch> ctx_patches = extract_context_patches(
      frame, box_, offsets, cfg_.padding, tw_, th_);

  // One pass per context channel builds both the cross-kernel response and
  // the self kernel-correlation needed by the training denominator.
  std::vector<MapF> ctx_resp;
  ctx_resp.reserve(ctx_patches.size());
  std::vector<std::vector<MapF>> kernels(ctx_patches.size());
  for (size_t s = 0; s < ctx_patches.size(); ++s) {
    FeatureMap cf = features_for(ctx_patches[s]);
    MapF sum(cf.h, cf.w, 0.0);
    kernels[s].reserve(cf.d());
    for (int n = 0; n < cf.d(); ++n) {
      ChannelSpectrum cs(energy_normalize(cf.channels[n]));
      MapF k = kernel_correlation(cs, bank_.tmpl_norm[n], cfg_.kernel_sigma);
      MapF r = correlate(bank_.filters[n], k);
      for (size_t i = 0; i < sum.size(); ++i) sum.v[i] += r.v[i];
      kernels[s].push_back(kernel_correlation(cs, cs, cfg_.kernel_sigma));
    }
    ctx_resp.push_back(std::move(sum));
  }

  std::vector<double> p;
  try {
    p = penalty_factors(challenging_factors(r0, ctx_resp));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateResponse) throw;
    p.assign(ctx_patches.size(), 1.0 / std::max<size_t>(1, ctx_patches.size()));
  }
  TrainContext ctx = make_train_context(std::move(kernels), p, cfg_.lambda2);
  if (telem) telem->context_frame = true;
  return train_with_context(feats, ctx, label_, cfg_.lambda1, cfg_.kernel_sigma);
}

BoundingBox Tracker::step(const Frame& frame, FrameTelemetry* telem) {
  if (!initialized_) {
    throw Error(ErrorCode::InvalidInput, "tracker used before init");
  }
  ++frame_idx_;
  FrameTelemetry local;
  FrameTelemetry& t = telem ? *telem : local;
  t = FrameTelemetry{};
  t.frame = frame_idx_;

  const auto t0 = Clock::now();
  Patch patch = extract_patch(frame, box_, cfg_.padding, tw_, th_);
  FeatureMap feats = features_for(patch);
  ResponseStack stack = detect_responses(bank_, feats, cfg_.kernel_sigma);

  if (cfg_.use_da) {
    t.dim_z = dim_weights(stack);
    t.dim_s = gate(t.dim_z, cfg_.beta_t);
    stack = apply_dim_attention(stack, t.dim_s);
  }

  PeakResult pr;
  bool have_peak = true;
  try {
    if (cfg_.use_sa) {
      MapF s = static_spatial_map(stack, window_);
      t.gamma_t = motion_factor(last_disp_px_x_, last_disp_px_y_, box_.w, box_.h,
                                cfg_.gamma);
      MapF sd = dynamic_map(s, t.gamma_t,
                            static_cast<int>(std::lround(last_disp_cell_y_)),
                            static_cast<int>(std::lround(last_disp_cell_x_)));
      pr = fuse_and_locate(stack, sd, cfg_.cell_size);
    } else {
      pr = locate_peak(sum_channels(stack), cfg_.cell_size);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPeak) throw;
    have_peak = false;
  }

  if (have_peak) {
    const double sx = static_cast<double>(pw_) / tw_;
    const double sy = static_cast<double>(ph_) / th_;
    const double dx_img = pr.dx_px * sx;
    const double dy_img = pr.dy_px * sy;
    box_.cx += dx_img;
    box_.cy += dy_img;
    last_disp_px_x_ = dx_img;
    last_disp_px_y_ = dy_img;
    last_disp_cell_x_ = pr.dx_px / cfg_.cell_size;
    last_disp_cell_y_ = pr.dy_px / cfg_.cell_size;
    t.peak = pr.peak;
    t.pme = pme(pr.fused);
  } else {
    // Hold position; the motion prior resets and the model is left as-is.
    last_disp_px_x_ = last_disp_px_y_ = 0.0;
    last_disp_cell_x_ = last_disp_cell_y_ = 0.0;
  }
  t.ms_detect = ms_since(t0);

  if (have_peak) {
    const auto t1 = Clock::now();
    const bool context_frame = cfg_.use_ca && cfg_.context_patches > 0 &&
                               (frame_idx_ % cfg_.context_interval == 0);
    FilterBank fresh = train_on(frame, context_frame, &t);
    bank_ = update_model(bank_, fresh, cfg_.eta);
    t.ms_train = ms_since(t1);
  }

  t.box = box_;
  return box_;
}

BaselineTracker::BaselineTracker(const TrackerConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  cn_ = resolve_cn_table(cfg_, &cn_owned_);
}

FeatureMap BaselineTracker::features_for(const Patch& patch) const {
  return build_features(patch, *cn_, cfg_.cell_size, window_);
}

void BaselineTracker::init(const Frame& frame, const BoundingBox& box) {
  check_box(box);
  const Geometry g = compute_geometry(box, cfg_);
  pw_ = g.pw;
  ph_ = g.ph;
  tw_ = g.tw;
  th_ = g.th;
  window_ = hann_window(th_ / cfg_.cell_size, tw_ / cfg_.cell_size);
  label_ = gaussian_label(th_ / cfg_.cell_size, tw_ / cfg_.cell_size,
                          cfg_.sigma_factor);
  Patch patch = extract_patch(frame, box, cfg_.padding, tw_, th_);
  bank_ = train_plain(features_for(patch), label_, cfg_.lambda1, cfg_.kernel_sigma);
  box_ = box;
  initialized_ = true;
}

BoundingBox BaselineTracker::step(const Frame& frame) {
  if (!initialized_) {
    throw Error(ErrorCode::InvalidInput, "tracker used before init");
  }
  Patch patch = extract_patch(frame, box_, cfg_.padding, tw_, th_);
  ResponseStack stack =
      detect_responses(bank_, features_for(patch), cfg_.kernel_sigma);
  PeakResult pr;
  try {
    pr = locate_peak(sum_channels(stack), cfg_.cell_size);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPeak) throw;
    return box_;
  }
  const double sx = static_cast<double>(pw_) / tw_;
  const double sy = static_cast<double>(ph_) / th_;
  box_.cx += pr.dx_px * sx;
  box_.cy += pr.dy_px * sy;

  Patch train_patch = extract_patch(frame, box_, cfg_.padding, tw_, th_);
  FilterBank fresh =
      train_plain(features_for(train_patch), label_, cfg_.lambda1, cfg_.kernel_sigma);
  bank_ = update_model(bank_, fresh, cfg_.eta);
  return box_;
}

}  // namespace tacf
