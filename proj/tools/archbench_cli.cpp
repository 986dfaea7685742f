// Command-line front end. Talks to the library only through archbench.h.
#include <archbench/archbench.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

int exit_code(archbench_status st) {
  switch (st) {
    case ARCHBENCH_OK:
      return kOk;
    case ARCHBENCH_ERR_VALIDATION:
    case ARCHBENCH_ERR_PARAMETER:
    case ARCHBENCH_ERR_PARSE:
    case ARCHBENCH_ERR_NULL_ARGUMENT:
      return kValidation;
    default:
      return kRuntime;
  }
}

int report(archbench_status st) {
  if (st != ARCHBENCH_OK)
    std::cerr << "error [" << archbench_status_name(st) << "]: " << archbench_last_error() << '\n';
  return exit_code(st);
}

struct BenchDeleter {
  void operator()(archbench_bench *b) const { archbench_bench_free(b); }
};
using BenchPtr = std::unique_ptr<archbench_bench, BenchDeleter>;

// Two-pass fetch of a text result.
template <class Fn>
archbench_status fetch_text(Fn &&call, std::string &out) {
  size_t needed = 0;
  archbench_status st = call(nullptr, 0, &needed);
  if (st != ARCHBENCH_ERR_BUFFER_TOO_SMALL && st != ARCHBENCH_OK) return st;
  std::vector<char> buf(needed);
  st = call(buf.data(), buf.size(), nullptr);
  if (st == ARCHBENCH_OK) out.assign(buf.data());
  return st;
}

bool read_file(const std::string &path, std::string &out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int cmd_gen_synthetic(const std::string &spec_path, const std::string &out_path) {
  std::string spec;
  if (!read_file(spec_path, spec)) {
    std::cerr << "error: cannot read " << spec_path << '\n';
    return kValidation;
  }
  archbench_bench *raw = nullptr;
  if (auto st = archbench_bench_synthetic(spec.c_str(), &raw); st != ARCHBENCH_OK) return report(st);
  BenchPtr bench(raw);
  if (auto st = archbench_bench_save(bench.get(), out_path.c_str()); st != ARCHBENCH_OK) return report(st);
  std::string id;
  fetch_text([&](char *b, size_t c, size_t *n) { return archbench_bench_id(bench.get(), b, c, n); }, id);
  std::cout << "wrote " << out_path << " (" << id << ")\n";
  return kOk;
}

int cmd_info(const std::string &path) {
  std::string text;
  auto st = fetch_text([&](char *b, size_t c, size_t *n) { return archbench_bench_info(path.c_str(), b, c, n); },
                       text);
  if (st != ARCHBENCH_OK) return report(st);
  std::cout << text;
  return kOk;
}

int cmd_campaign(const std::string &config, const std::string &out_dir, bool sweep) {
  archbench_campaign_summary s{};
  const char *dir = out_dir.empty() ? nullptr : out_dir.c_str();
  if (auto st = archbench_run_campaign(config.c_str(), dir, sweep ? 1 : 0, &s); st != ARCHBENCH_OK)
    return report(st);
  std::cout << "planned " << s.planned << ", skipped " << s.skipped << ", completed " << s.completed
            << ", failed " << s.failed << '\n';
  return kOk;
}

struct StatsArgs {
  std::string bench, out = ".";
  bool box = false, rwa = false, nbhd = false, time = false, iqr = false;
  size_t cap = 0;
  uint64_t seed = 0;
};

int cmd_stats(const StatsArgs &a) {
  unsigned flags = 0;
  if (a.box) flags |= ARCHBENCH_STATS_BOX;
  if (a.rwa) flags |= ARCHBENCH_STATS_RWA;
  if (a.nbhd) flags |= ARCHBENCH_STATS_NBHD;
  if (a.time) flags |= ARCHBENCH_STATS_TIME;
  if (a.iqr) flags |= ARCHBENCH_STATS_IQR;
  if (flags == 0) {
    std::cerr << "error: select at least one of --box --rwa --nbhd --time --iqr\n";
    return kValidation;
  }
  archbench_bench *raw = nullptr;
  if (auto st = archbench_bench_load(a.bench.c_str(), &raw); st != ARCHBENCH_OK) return report(st);
  BenchPtr bench(raw);
  return report(archbench_write_stats(bench.get(), a.out.c_str(), flags, a.cap, a.seed));
}

struct AnalyzeArgs {
  std::string in, out = ".";
  bool regret = false, kendall = false, loo = false, ranks = false;
};

int cmd_analyze(const AnalyzeArgs &a) {
  unsigned flags = 0;
  if (a.regret) flags |= ARCHBENCH_ANALYZE_REGRET;
  if (a.kendall) flags |= ARCHBENCH_ANALYZE_KENDALL;
  if (a.loo) flags |= ARCHBENCH_ANALYZE_LOO;
  if (a.ranks) flags |= ARCHBENCH_ANALYZE_RANKS;
  if (flags == 0)
    flags = ARCHBENCH_ANALYZE_REGRET | ARCHBENCH_ANALYZE_KENDALL | ARCHBENCH_ANALYZE_LOO | ARCHBENCH_ANALYZE_RANKS;
  return report(archbench_analyze(a.in.c_str(), a.out.c_str(), flags));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"archbench: architecture benchmark tooling"};
  app.set_version_flag("--version", std::string(archbench_version()));
  app.require_subcommand(1);

  auto *bench = app.add_subcommand("bench", "benchmark files");
  bench->require_subcommand(1);
  std::string spec_path, gen_out;
  auto *gen = bench->add_subcommand("gen-synthetic", "tabulate a synthetic landscape");
  gen->add_option("spec", spec_path, "synthetic spec (JSON with a \"space\" key)")->required()->check(CLI::ExistingFile);
  gen->add_option("-o,--out", gen_out, "output .nbtab")->required();
  std::string info_path;
  auto *info = bench->add_subcommand("info", "print metadata and metric ranges");
  info->add_option("file", info_path)->required();

  std::string run_cfg, run_out;
  auto *run = app.add_subcommand("run", "run every configured method");
  run->add_option("-c,--config", run_cfg, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", run_out, "results directory (default: config output_dir)");

  std::string sweep_cfg, sweep_out;
  auto *sweep = app.add_subcommand("sweep", "run a hyperparameter sweep campaign");
  sweep->add_option("-c,--config", sweep_cfg, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--out", sweep_out, "results directory (default: config output_dir)");

  StatsArgs sa;
  auto *stats = app.add_subcommand("stats", "landscape statistics");
  stats->add_option("-b,--bench", sa.bench, ".nbtab file")->required()->check(CLI::ExistingFile);
  stats->add_option("-o,--out", sa.out, "output directory");
  stats->add_flag("--box", sa.box, "accuracy distribution");
  stats->add_flag("--rwa", sa.rwa, "random-walk autocorrelation");
  stats->add_flag("--nbhd", sa.nbhd, "average neighborhood size");
  stats->add_flag("--time", sa.time, "average train time");
  stats->add_flag("--iqr", sa.iqr, "IQR against number of operations");
  stats->add_option("--cap", sa.cap, "sample cap (default 100000)");
  stats->add_option("--seed", sa.seed, "sampling seed");

  AnalyzeArgs aa;
  auto *an = app.add_subcommand("analyze", "tables from campaign results");
  an->add_option("-i,--in", aa.in, "results directory")->required()->check(CLI::ExistingDirectory);
  an->add_option("-o,--out", aa.out, "output directory");
  an->add_flag("--regret", aa.regret);
  an->add_flag("--kendall", aa.kendall);
  an->add_flag("--loo", aa.loo);
  an->add_flag("--ranks", aa.ranks);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*gen) return cmd_gen_synthetic(spec_path, gen_out);
    if (*info) return cmd_info(info_path);
    if (*run) return cmd_campaign(run_cfg, run_out, false);
    if (*sweep) return cmd_campaign(sweep_cfg, sweep_out, true);
    if (*stats) return cmd_stats(sa);
    if (*an) return cmd_analyze(aa);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kValidation;
}
