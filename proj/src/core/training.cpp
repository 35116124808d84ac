#include "core/training.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace tacf {
namespace {

void rebuild_template_cache(FilterBank& bank) {
  bank.tmpl_norm.clear();
  bank.tmpl_norm.reserve(bank.tmpl.channels.size());
  for (const MapF& ch : bank.tmpl.channels) {
    bank.tmpl_norm.emplace_back(energy_normalize(ch));
  }
}

FilterBank train_impl(const FeatureMap& obj, const TrainContext* ctx,
                      const MapF& label, double lambda1, double kernel_sigma) {
  if (lambda1 <= 0.0) {
    throw Error(ErrorCode::InvalidConfig, "train: lambda1 must be > 0");
  }
  if (obj.d() < 1) {
    throw Error(ErrorCode::InvalidInput, "train: empty feature map");
  }
  if (label.h != obj.h || label.w != obj.w) {
    throw Error(ErrorCode::InvalidInput, "train: label/feature shape mismatch");
  }
  if (ctx) {
    if (ctx->kernels.size() != ctx->penalties.size()) {
      throw Error(ErrorCode::InvalidInput, "train: context size mismatch");
    }
    for (const auto& per_patch : ctx->kernels) {
      if (static_cast<int>(per_patch.size()) != obj.d()) {
        throw Error(ErrorCode::InvalidInput,
                    "train: context kernel channel count mismatch");
      }
      for (const MapF& k : per_patch) {
        if (k.h != obj.h || k.w != obj.w) {
          throw Error(ErrorCode::InvalidInput,
                      "train: context kernel shape mismatch");
        }
      }
    }
  }

  FilterBank bank;
  bank.d = obj.d();
  bank.tmpl = obj;
  bank.label_spec = fft2(label);
  rebuild_template_cache(bank);
  bank.filters.reserve(bank.d);

  const size_t m = label.size();
  // Context kernel spectra are shared across channels of the same patch index,
  // so transform lazily per (patch, channel).
  for (int n = 0; n < bank.d; ++n) {
    const ChannelSpectrum& cs = bank.tmpl_norm[n];
    MapF k0 = kernel_correlation(cs, cs, kernel_sigma);
    Spectrum k0s = fft2(k0);
    std::vector<double> denom(m, lambda1);
    for (size_t i = 0; i < m; ++i) {
      denom[i] += std::norm(k0s.v[i]);
    }
    if (ctx) {
      for (size_t s = 0; s < ctx->kernels.size(); ++s) {
        const double p2 = ctx->penalties[s] * ctx->penalties[s];
        if (p2 == 0.0) continue;
        Spectrum ks = fft2(ctx->kernels[s][n]);
        for (size_t i = 0; i < m; ++i) {
          denom[i] += p2 * std::norm(ks.v[i]);
        }
      }
    }
    Spectrum filt(label.h, label.w);
    for (size_t i = 0; i < m; ++i) {
      filt.v[i] = k0s.v[i] * bank.label_spec.v[i] / denom[i];
    }
    bank.filters.push_back(std::move(filt));
  }
  return bank;
}

}  // namespace

TrainContext make_train_context(std::vector<std::vector<MapF>> kernels,
                                const std::vector<double>& p, double lambda2) {
  if (lambda2 < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "make_train_context: lambda2 must be >= 0");
  }
  if (kernels.size() != p.size()) {
    throw Error(ErrorCode::InvalidInput,
                "make_train_context: penalties/kernels size mismatch");
  }
  TrainContext ctx;
  ctx.kernels = std::move(kernels);
  const double root = std::sqrt(lambda2);
  ctx.penalties.reserve(p.size());
  for (double ps : p) {
    if (ps < 0.0) {
      throw Error(ErrorCode::InvalidInput, "make_train_context: negative penalty");
    }
    ctx.penalties.push_back(root * ps);
  }
  return ctx;
}

FilterBank train_with_context(const FeatureMap& obj, const TrainContext& ctx,
                              const MapF& label, double lambda1,
                              double kernel_sigma) {
  return train_impl(obj, &ctx, label, lambda1, kernel_sigma);
}

FilterBank train_plain(const FeatureMap& obj, const MapF& label, double lambda1,
                       double kernel_sigma) {
  return train_impl(obj, nullptr, label, lambda1, kernel_sigma);
}

FilterBank update_model(const FilterBank& prev, const FilterBank& next, double eta) {
  if (eta < 0.0 || eta > 1.0) {
    throw Error(ErrorCode::InvalidConfig, "update_model: eta must be in [0,1]");
  }
  if (prev.d != next.d || prev.label_spec.h != next.label_spec.h ||
      prev.label_spec.w != next.label_spec.w) {
    throw Error(ErrorCode::InvalidInput, "update_model: bank shape mismatch");
  }
  if (eta == 0.0) return prev;
  if (eta == 1.0) return next;

  FilterBank out;
  out.d = prev.d;
  const double keep = 1.0 - eta;
  out.filters.reserve(prev.filters.size());
  for (int n = 0; n < prev.d; ++n) {
    Spectrum f(prev.filters[n].h, prev.filters[n].w);
    for (size_t i = 0; i < f.size(); ++i) {
      f.v[i] = keep * prev.filters[n].v[i] + eta * next.filters[n].v[i];
    }
    out.filters.push_back(std::move(f));
  }
  out.label_spec = prev.label_spec;
  out.tmpl = prev.tmpl;
  for (int n = 0; n < prev.d; ++n) {
    MapF& dst = out.tmpl.channels[n];
    const MapF& add = next.tmpl.channels[n];
    for (size_t i = 0; i < dst.size(); ++i) {
      dst.v[i] = keep * dst.v[i] + eta * add.v[i];
    }
  }
  rebuild_template_cache(out);
  return out;
}

namespace {

constexpr char kMagic[8] = {'T', 'A', 'C', 'F', 'F', 'B', '0', '1'};

void put_i32(std::FILE* f, int32_t v) { std::fwrite(&v, 4, 1, f); }
int32_t get_i32(std::FILE* f) {
  int32_t v = 0;
  if (std::fread(&v, 4, 1, f) != 1) {
    throw Error(ErrorCode::Format, "filter bank snapshot truncated");
  }
  return v;
}

}  // namespace

void save_filter_bank(const FilterBank& bank, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Error(ErrorCode::Io, "cannot write filter bank: " + path);
  std::fwrite(kMagic, 1, 8, f);
  put_i32(f, bank.d);
  put_i32(f, bank.label_spec.h);
  put_i32(f, bank.label_spec.w);
  put_i32(f, bank.tmpl.cell_size);
  const size_t m = bank.label_spec.size();
  std::fwrite(bank.label_spec.v.data(), sizeof(std::complex<double>), m, f);
  for (const Spectrum& s : bank.filters) {
    std::fwrite(s.v.data(), sizeof(std::complex<double>), m, f);
  }
  for (const MapF& ch : bank.tmpl.channels) {
    std::fwrite(ch.v.data(), sizeof(double), m, f);
  }
  std::fclose(f);
}

FilterBank load_filter_bank(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw Error(ErrorCode::Io, "cannot read filter bank: " + path);
  char magic[8];
  if (std::fread(magic, 1, 8, f) != 8 || std::memcmp(magic, kMagic, 8) != 0) {
    std::fclose(f);
    throw Error(ErrorCode::Format, "bad filter bank header: " + path);
  }
  FilterBank bank;
  try {
    bank.d = get_i32(f);
    const int h = get_i32(f);
    const int w = get_i32(f);
    const int cell = get_i32(f);
    if (bank.d < 1 || h < 1 || w < 1) {
      throw Error(ErrorCode::Format, "bad filter bank dims: " + path);
    }
    const size_t m = static_cast<size_t>(h) * w;
    bank.label_spec = Spectrum(h, w);
    if (std::fread(bank.label_spec.v.data(), sizeof(std::complex<double>), m, f) != m) {
      throw Error(ErrorCode::Format, "filter bank snapshot truncated");
    }
    bank.filters.assign(bank.d, Spectrum(h, w));
    for (Spectrum& s : bank.filters) {
      if (std::fread(s.v.data(), sizeof(std::complex<double>), m, f) != m) {
        throw Error(ErrorCode::Format, "filter bank snapshot truncated");
      }
    }
    bank.tmpl.h = h;
    bank.tmpl.w = w;
    bank.tmpl.cell_size = cell;
    bank.tmpl.channels.assign(bank.d, MapF(h, w));
    for (MapF& ch : bank.tmpl.channels) {
      if (std::fread(ch.v.data(), sizeof(double), m, f) != m) {
        throw Error(ErrorCode::Format, "filter bank snapshot truncated");
      }
    }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
  rebuild_template_cache(bank);
  return bank;
}

}  // namespace tacf
