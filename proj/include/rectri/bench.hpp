#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rectri/backend.hpp"
#include "rectri/flags.hpp"
#include "rectri/recursion.hpp"

namespace rectri::bench {

// How the right-hand-side count follows the sweep: a fixed width, or m = n.
enum class MMode { Fixed, Square };

struct BenchConfig {
  OpKind op = OpKind::Trsm;
  TriangularSpec spec{};
  std::vector<index_t> sizes;
  MMode m_mode = MMode::Fixed;
  index_t fixed_m = 256;
  Threshold threshold{};
  Backend backend = Backend::par();
  int repetitions = 5;
  int warmup = 2;
  std::string out_path;  // empty: no CSV written
  ElemKind elem = ElemKind::F32;
  std::uint64_t seed = 42;

  // Testing aid: perturbs each result before the residual gate, which must
  // then fail. Never set by normal runs.
  bool inject_fault = false;
};

// One timed measurement. gflops = n^2 * m / median_time_s / 1e9 (multiply and
// add counted as two flops).
struct BenchRecord {
  std::string op;
  std::string variant;
  index_t n = 0;
  index_t m = 0;
  index_t threshold = 0;
  std::string backend;
  std::string elem;
  double median_time_s = 0;
  double min_time_s = 0;
  double gflops = 0;
};

// ratio_percent = 100 * baseline_s / candidate_s; above 100 means the
// candidate is faster than the baseline.
struct RatioRecord {
  std::string op;
  std::string variant;
  index_t n = 0;
  index_t m = 0;
  double baseline_s = 0;
  double candidate_s = 0;
  double ratio_percent = 0;
};

inline constexpr std::string_view kSweepCsvHeader =
    "op,variant,n,m,threshold,backend,elem,median_time_s,min_time_s,gflops";
inline constexpr std::string_view kRatioCsvHeader =
    "op,variant,n,m,baseline_s,candidate_s,ratio_percent";

// For each n: allocate fresh random inputs (diagonally dominant A for TRSM),
// run `warmup` untimed passes, time `repetitions` passes on a monotonic
// clock, and record median and min. Every iteration's output must pass a
// sampled residual gate before its time counts; a failing gate throws
// ValidationError. Writes the CSV when out_path is set.
std::vector<BenchRecord> run_sweep(const BenchConfig& config);

// Joins two sweep CSVs on (op, variant, n, m) and reports per-key runtime
// ratios from the median times. The key sets must match exactly; otherwise a
// JoinError lists the missing keys. Writes the ratio CSV when out_path is
// nonempty.
std::vector<RatioRecord> ratio_report(const std::string& baseline_csv,
                                      const std::string& candidate_csv,
                                      const std::string& out_path = {});

// Times config.sizes against each threshold in the list, for per-machine
// threshold selection. Records land in one table (and CSV, when configured).
std::vector<BenchRecord> crossover_scan(BenchConfig config,
                                        const std::vector<index_t>& thresholds);

void write_sweep_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_sweep_csv(const std::string& path,
                     const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_sweep_csv(const std::string& path);
void write_ratio_csv(std::ostream& out, const std::vector<RatioRecord>& records);
void write_ratio_csv(const std::string& path,
                     const std::vector<RatioRecord>& records);

}  // namespace rectri::bench
