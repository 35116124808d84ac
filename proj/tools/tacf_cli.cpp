// tacf command-line tool. Everything goes through the C API in tacf/tacf.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tacf/tacf.h"

namespace {

struct CliState {
  tacf_config cfg;
  std::string cn_table;
  bool no_ca = false, no_da = false, no_sa = false;
  std::string out_dir;
  int workers = 1;
  bool verbose = false;
  uint64_t seed = 0;
  bool has_seed = false;
  std::string command_line;
};

void add_config_flags(CLI::App* app, CliState& st) {
  app->add_option("--lambda1", st.cfg.lambda1, "Filter regularization");
  app->add_option("--lambda2", st.cfg.lambda2, "Context regularization");
  app->add_option("--fc", st.cfg.context_interval, "Context learning interval");
  app->add_option("--context-patches", st.cfg.context_patches,
                  "Number of context patches");
  app->add_option("--beta-t", st.cfg.beta_t, "Dimensional attention threshold");
  app->add_option("--gamma", st.cfg.gamma, "Motion factor gain");
  app->add_option("--eta", st.cfg.eta, "Model learning rate");
  app->add_option("--padding", st.cfg.padding, "Search region scale");
  app->add_option("--cell-size", st.cfg.cell_size, "Feature cell size (px)");
  app->add_option("--kernel-sigma", st.cfg.kernel_sigma, "Gaussian kernel width");
  app->add_option("--sigma-factor", st.cfg.sigma_factor, "Label width factor");
  app->add_option("--template-size", st.cfg.template_size, "Template side (px)");
  app->add_option("--context-offset", st.cfg.context_offset,
                  "Context offset in object sizes");
  app->add_flag("--no-ca", st.no_ca, "Disable contextual attention");
  app->add_flag("--no-da", st.no_da, "Disable dimensional attention");
  app->add_flag("--no-sa", st.no_sa, "Disable spatiotemporal attention");
  app->add_option("--cn-table", st.cn_table, "Color-name table file")
      ->envname("TACF_CN_TABLE");
}

void finish_config(CliState& st) {
  if (st.no_ca) st.cfg.use_ca = 0;
  if (st.no_da) st.cfg.use_da = 0;
  if (st.no_sa) st.cfg.use_sa = 0;
  st.cfg.cn_table_path = st.cn_table.empty() ? nullptr : st.cn_table.c_str();
}

tacf_run_options run_options(const CliState& st) {
  tacf_run_options o{};
  o.out_dir = st.out_dir.c_str();
  o.workers = st.workers;
  o.verbose = st.verbose ? 1 : 0;
  o.command = st.command_line.c_str();
  o.seed = st.seed;
  o.has_seed = st.has_seed ? 1 : 0;
  return o;
}

int fail(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, tacf_last_error());
  return 1;
}

std::string read_file(const std::string& path, bool* ok) {
  std::ifstream in(path);
  if (!in) {
    *ok = false;
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  *ok = true;
  return ss.str();
}

// Loads either a sequence directory or a scenario JSON into a handle.
int open_input(const std::string& seq_dir, const std::string& scenario,
               const CliState& st, tacf_sequence** out) {
  if (!seq_dir.empty()) {
    return tacf_sequence_load(out, seq_dir.c_str());
  }
  bool ok = false;
  const std::string text = read_file(scenario, &ok);
  if (!ok) {
    std::fprintf(stderr, "error: cannot read scenario file: %s\n", scenario.c_str());
    return TACF_ERR_IO;
  }
  return tacf_sequence_synth(out, text.c_str(), st.seed, st.has_seed ? 1 : 0);
}

}  // namespace

int main(int argc, char** argv) {
  CliState st;
  tacf_config_default(&st.cfg);
  {
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) {
      if (i) cmd << ' ';
      cmd << argv[i];
    }
    st.command_line = cmd.str();
  }

  CLI::App app{"Tri-attention correlation-filter tracker"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tacf_version());

  std::string seq_dir, scenario, dataset_root, out_file;

  CLI::App* track = app.add_subcommand("track", "Track one sequence");
  auto* tr_seq = track->add_option("--seq", seq_dir, "Sequence directory");
  auto* tr_scn = track->add_option("--scenario", scenario, "Scenario JSON file");
  track->add_option("--out", st.out_dir, "Output directory")->required();
  track->add_option("--seed", st.seed, "Scenario seed override");
  track->add_flag("--verbose", st.verbose, "Export per-channel attention CSV");
  add_config_flags(track, st);

  CLI::App* bench = app.add_subcommand("bench", "Evaluate a dataset root");
  bench->add_option("--root", dataset_root, "Directory of sequence directories")
      ->required();
  bench->add_option("--out", st.out_dir, "Output directory")->required();
  bench->add_option("--workers", st.workers, "Parallel sequence workers");
  bench->add_flag("--verbose", st.verbose, "Export per-channel attention CSV");
  add_config_flags(bench, st);

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic sequence");
  synth->add_option("--scenario", scenario, "Scenario JSON file")->required();
  synth->add_option("--out", st.out_dir, "Output directory")->required();
  synth->add_option("--seed", st.seed, "Scenario seed override");

  CLI::App* ablate = app.add_subcommand("ablate", "Run the stage ablation table");
  auto* ab_seq = ablate->add_option("--seq", seq_dir, "Sequence directory");
  auto* ab_scn = ablate->add_option("--scenario", scenario, "Scenario JSON file");
  ablate->add_option("--out", st.out_dir, "Output directory")->required();
  ablate->add_option("--seed", st.seed, "Scenario seed override");
  add_config_flags(ablate, st);

  CLI::App* cn = app.add_subcommand("cn-table", "Write the built-in color-name table");
  cn->add_option("--out", out_file, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    app.exit(e);
    return 2;
  }

  st.has_seed = (track->count("--seed") || synth->count("--seed") ||
                 ablate->count("--seed")) > 0;
  finish_config(st);

  if (track->parsed()) {
    if ((*tr_seq ? tr_seq->count() : 0) + (*tr_scn ? tr_scn->count() : 0) != 1) {
      std::fprintf(stderr, "error: track needs exactly one of --seq/--scenario\n");
      return 2;
    }
    tacf_sequence* seq = nullptr;
    if (open_input(seq_dir, scenario, st, &seq) != TACF_OK) return fail("track");
    const tacf_run_options o = run_options(st);
    const int rc = tacf_run_track(seq, &st.cfg, &o);
    tacf_sequence_destroy(seq);
    if (rc != TACF_OK) return fail("track");
    std::printf("track: wrote %s\n", st.out_dir.c_str());
    return 0;
  }

  if (bench->parsed()) {
    const tacf_run_options o = run_options(st);
    if (tacf_run_bench(dataset_root.c_str(), &st.cfg, &o) != TACF_OK) {
      return fail("bench");
    }
    std::printf("bench: wrote %s\n", st.out_dir.c_str());
    return 0;
  }

  if (synth->parsed()) {
    tacf_sequence* seq = nullptr;
    if (open_input("", scenario, st, &seq) != TACF_OK) return fail("synth");
    const int rc = tacf_sequence_save(seq, st.out_dir.c_str());
    tacf_sequence_destroy(seq);
    if (rc != TACF_OK) return fail("synth");
    std::printf("synth: wrote %s\n", st.out_dir.c_str());
    return 0;
  }

  if (ablate->parsed()) {
    if ((*ab_seq ? ab_seq->count() : 0) + (*ab_scn ? ab_scn->count() : 0) != 1) {
      std::fprintf(stderr, "error: ablate needs exactly one of --seq/--scenario\n");
      return 2;
    }
    tacf_sequence* seq = nullptr;
    if (open_input(seq_dir, scenario, st, &seq) != TACF_OK) return fail("ablate");
    const tacf_run_options o = run_options(st);
    const int rc = tacf_run_ablation(seq, &st.cfg, &o);
    tacf_sequence_destroy(seq);
    if (rc != TACF_OK) return fail("ablate");
    std::printf("ablate: wrote %s\n", st.out_dir.c_str());
    return 0;
  }

  if (cn->parsed()) {
    if (tacf_cn_table_write(out_file.c_str()) != TACF_OK) return fail("cn-table");
    std::printf("cn-table: wrote %s\n", out_file.c_str());
    return 0;
  }

  return 2;
}
