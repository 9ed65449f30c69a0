#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rectri/bench.hpp"
#include "rectri/error.hpp"

namespace {

using rectri::index_t;

struct SweepCli {
  std::string op;
  std::string side = "left";
  std::string uplo = "lower";
  std::string trans = "n";
  std::string diag = "nonunit";
  double alpha = 1.0;
  std::string sizes;
  std::string m_mode = "fixed:256";
  index_t threshold = 256;
  std::string backend = "par";
  int reps = 5;
  int warmup = 2;
  std::string elem = "f32";
  std::string out;
  std::uint64_t seed = 42;
  bool inject_fault = false;
};

std::vector<index_t> parse_size_list(const std::string& text,
                                     const std::string& what) {
  std::vector<index_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw rectri::ConfigError("bad " + what + " entry '" + item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

rectri::bench::BenchConfig to_config(const SweepCli& cli) {
  rectri::bench::BenchConfig config;
  config.op = rectri::parse_op_kind(cli.op);
  config.spec.side = rectri::parse_side(cli.side);
  config.spec.uplo = rectri::parse_uplo(cli.uplo);
  config.spec.trans = rectri::parse_trans(cli.trans);
  config.spec.diag = rectri::parse_diag(cli.diag);
  config.spec.alpha = cli.alpha;
  config.sizes = parse_size_list(cli.sizes, "--sizes");

  if (cli.m_mode == "square") {
    config.m_mode = rectri::bench::MMode::Square;
  } else if (cli.m_mode.rfind("fixed:", 0) == 0) {
    config.m_mode = rectri::bench::MMode::Fixed;
    try {
      config.fixed_m = std::stoll(cli.m_mode.substr(6));
    } catch (const std::exception&) {
      throw rectri::ConfigError("bad --m value '" + cli.m_mode + "'");
    }
  } else {
    throw rectri::ConfigError("--m must be fixed:<width> or square, got '" +
                              cli.m_mode + "'");
  }

  config.threshold = rectri::Threshold{cli.threshold};
  if (cli.backend == "seq")
    config.backend = rectri::Backend::seq();
  else if (cli.backend == "par")
    config.backend = rectri::Backend::par();
  else
    throw rectri::ConfigError("--backend must be seq or par, got '" +
                              cli.backend + "'");
  config.repetitions = cli.reps;
  config.warmup = cli.warmup;
  if (cli.elem == "f32")
    config.elem = rectri::ElemKind::F32;
  else if (cli.elem == "f64")
    config.elem = rectri::ElemKind::F64;
  else
    throw rectri::ConfigError("--elem must be f32 or f64, got '" + cli.elem +
                              "'");
  config.out_path = cli.out;
  config.seed = cli.seed;
  config.inject_fault = cli.inject_fault;
  return config;
}

void add_sweep_options(CLI::App* cmd, SweepCli& cli) {
  cmd->add_option("--op", cli.op, "Operation: trmm|trsm")->required();
  cmd->add_option("--side", cli.side, "left|right");
  cmd->add_option("--uplo", cli.uplo, "lower|upper");
  cmd->add_option("--trans", cli.trans, "n|t|c");
  cmd->add_option("--diag", cli.diag, "unit|nonunit");
  cmd->add_option("--alpha", cli.alpha, "Scalar applied to B");
  cmd->add_option("--sizes", cli.sizes, "Comma-separated list of n")->required();
  cmd->add_option("--m", cli.m_mode,
                  "Right-hand-side count: fixed:<width> or square (m = n)");
  cmd->add_option("--threshold", cli.threshold, "Recursion cutoff dimension");
  cmd->add_option("--backend", cli.backend, "seq|par");
  cmd->add_option("--reps", cli.reps, "Timed repetitions per size");
  cmd->add_option("--warmup", cli.warmup, "Untimed warmup runs per size");
  cmd->add_option("--elem", cli.elem, "f32|f64");
  cmd->add_option("--out", cli.out, "Output CSV path (default: stdout)");
  cmd->add_option("--seed", cli.seed, "Input generator seed");
  cmd->add_flag("--inject-fault", cli.inject_fault,
                "Corrupt each result before the residual gate (testing aid)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runtime sweeps and runtime-ratio reports for recursive "
               "TRMM/TRSM"};
  app.require_subcommand(1);

  SweepCli sweep_cli;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Time one variant across a list of sizes and emit CSV");
  add_sweep_options(sweep, sweep_cli);

  SweepCli crossover_cli;
  std::string thresholds_text;
  CLI::App* crossover = app.add_subcommand(
      "crossover", "Time sizes against a list of thresholds");
  add_sweep_options(crossover, crossover_cli);
  crossover->add_option("--thresholds", thresholds_text,
                        "Comma-separated threshold list")
      ->required();

  std::string baseline_path, candidate_path, ratio_out;
  CLI::App* ratio = app.add_subcommand(
      "ratio", "Join two sweep CSVs and report baseline/candidate ratios");
  ratio->add_option("--baseline", baseline_path, "Baseline sweep CSV")
      ->required();
  ratio->add_option("--candidate", candidate_path, "Candidate sweep CSV")
      ->required();
  ratio->add_option("--out", ratio_out, "Output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sweep->parsed()) {
      const auto records = rectri::bench::run_sweep(to_config(sweep_cli));
      if (sweep_cli.out.empty()) rectri::bench::write_sweep_csv(std::cout, records);
    } else if (crossover->parsed()) {
      const auto thresholds = parse_size_list(thresholds_text, "--thresholds");
      const auto records =
          rectri::bench::crossover_scan(to_config(crossover_cli), thresholds);
      if (crossover_cli.out.empty())
        rectri::bench::write_sweep_csv(std::cout, records);
    } else if (ratio->parsed()) {
      const auto records =
          rectri::bench::ratio_report(baseline_path, candidate_path, ratio_out);
      if (ratio_out.empty()) rectri::bench::write_ratio_csv(std::cout, records);
    }
  } catch (const rectri::ValidationError& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
