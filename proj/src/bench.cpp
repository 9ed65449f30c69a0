#include "rectri/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace rectri::bench {

namespace {

using clock_type = std::chrono::steady_clock;

template <typename T>
struct ProblemData {
  MatrixBuffer<T> a;
  MatrixBuffer<T> b;
};

// Random inputs in [-1, 1]; for TRSM the stored diagonal is overwritten with
// the row's off-diagonal magnitude sum plus one, so systems stay diagonally
// dominant at every size.
template <typename T>
ProblemData<T> make_inputs(OpKind op, const TriangularSpec& spec, index_t n,
                           index_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ProblemData<T> data;
  data.a = MatrixBuffer<T>(n, n);
  for (index_t c = 0; c < n; ++c)
    for (index_t r = 0; r < n; ++r) data.a(r, c) = static_cast<T>(dist(rng));

  if (op == OpKind::Trsm && spec.diag == Diag::NonUnit) {
    for (index_t r = 0; r < n; ++r) {
      double sum = 0.0;
      if (spec.uplo == Uplo::Lower) {
        for (index_t c = 0; c < r; ++c) sum += std::abs(double(data.a(r, c)));
      } else {
        for (index_t c = r + 1; c < n; ++c)
          sum += std::abs(double(data.a(r, c)));
      }
      data.a(r, r) = static_cast<T>(sum + 1.0);
    }
  }

  const index_t brows = spec.side == Side::Left ? n : m;
  const index_t bcols = spec.side == Side::Left ? m : n;
  data.b = MatrixBuffer<T>(brows, bcols);
  for (index_t c = 0; c < bcols; ++c)
    for (index_t r = 0; r < brows; ++r) data.b(r, c) = static_cast<T>(dist(rng));
  return data;
}

// op(A)(i, k) through the uplo/diag mask, in double.
template <typename T>
double masked_op_entry(const MatrixView<const T>& A, Uplo uplo, Diag diag,
                       Trans eff, index_t i, index_t k) {
  const index_t r = eff == Trans::NoTrans ? i : k;
  const index_t c = eff == Trans::NoTrans ? k : i;
  if (r == c) return diag == Diag::Unit ? 1.0 : static_cast<double>(A(r, r));
  const bool stored = uplo == Uplo::Lower ? r > c : r < c;
  return stored ? static_cast<double>(A(r, c)) : 0.0;
}

template <typename T>
double masked_a_norm_inf(const MatrixView<const T>& A, Uplo uplo, Diag diag) {
  const index_t n = A.rows();
  double norm = 0.0;
  for (index_t r = 0; r < n; ++r) {
    double sum = diag == Diag::Unit ? 1.0 : std::abs(double(A(r, r)));
    const index_t c0 = uplo == Uplo::Lower ? 0 : r + 1;
    const index_t c1 = uplo == Uplo::Lower ? r : n;
    for (index_t c = c0; c < c1; ++c) sum += std::abs(double(A(r, c)));
    norm = std::max(norm, sum);
  }
  return norm;
}

template <typename T>
double max_abs(const MatrixBuffer<T>& m) {
  double v = 0.0;
  for (index_t c = 0; c < m.cols(); ++c)
    for (index_t r = 0; r < m.rows(); ++r)
      v = std::max(v, std::abs(double(m(r, c))));
  return v;
}

// Residual gate: |op(A)X - alpha*B| (TRSM) or |result - alpha*op(A)B| (TRMM)
// on up to eight sampled output columns, against a backward-error bound in
// the compute precision. A fast corruption check, not a full oracle run.
template <typename T>
void validate_result(OpKind op, const TriangularSpec& spec,
                     const MatrixBuffer<T>& A, const MatrixBuffer<T>& b_orig,
                     const MatrixBuffer<T>& result, std::uint64_t column_seed) {
  const index_t n = A.rows();
  const Trans eff = effective_op(spec, elem_kind_of<T>::value);
  const MatrixView<const T> a = A.view();
  const double alpha = spec.alpha;

  const index_t cols = result.cols();
  std::vector<index_t> sample;
  if (cols <= 8) {
    for (index_t c = 0; c < cols; ++c) sample.push_back(c);
  } else {
    std::mt19937_64 rng(column_seed);
    std::uniform_int_distribution<index_t> pick(0, cols - 1);
    for (int s = 0; s < 8; ++s) sample.push_back(pick(rng));
  }

  const double a_norm = masked_a_norm_inf(a, spec.uplo, spec.diag);
  const double scale =
      op == OpKind::Trsm
          ? a_norm * max_abs(result) + std::abs(alpha) * max_abs(b_orig)
          : (1.0 + std::abs(alpha)) * a_norm * max_abs(b_orig);
  const double tol = 64.0 * static_cast<double>(std::max<index_t>(n, 1)) *
                     std::numeric_limits<T>::epsilon() * scale;

  double worst = 0.0;
  const bool left = spec.side == Side::Left;
  for (index_t c : sample) {
    for (index_t i = 0; i < result.rows(); ++i) {
      double lhs = 0.0;
      if (op == OpKind::Trsm) {
        if (left) {
          for (index_t k = 0; k < n; ++k)
            lhs += masked_op_entry(a, spec.uplo, spec.diag, eff, i, k) *
                   static_cast<double>(result(k, c));
        } else {
          for (index_t k = 0; k < n; ++k)
            lhs += static_cast<double>(result(i, k)) *
                   masked_op_entry(a, spec.uplo, spec.diag, eff, k, c);
        }
        lhs -= alpha * static_cast<double>(b_orig(i, c));
      } else {
        double ref = 0.0;
        if (left) {
          for (index_t k = 0; k < n; ++k)
            ref += masked_op_entry(a, spec.uplo, spec.diag, eff, i, k) *
                   static_cast<double>(b_orig(k, c));
        } else {
          for (index_t k = 0; k < n; ++k)
            ref += static_cast<double>(b_orig(i, k)) *
                   masked_op_entry(a, spec.uplo, spec.diag, eff, k, c);
        }
        lhs = static_cast<double>(result(i, c)) - alpha * ref;
      }
      worst = std::max(worst, std::abs(lhs));
    }
  }
  if (!(worst <= tol)) {
    std::ostringstream msg;
    msg << "residual gate failed: |r| = " << worst << " > " << tol << " for "
        << to_string(op) << " " << variant_string(spec) << " n=" << n;
    throw ValidationError(msg.str());
  }
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  if (xs.size() % 2 == 1) return xs[mid];
  return 0.5 * (xs[mid - 1] + xs[mid]);
}

template <typename T>
BenchRecord time_one(const BenchConfig& config, index_t n, index_t m,
                     std::uint64_t seed) {
  // Inputs are regenerated (fresh seed) if a singular system slips through.
  for (int attempt = 0;; ++attempt) {
    ProblemData<T> data =
        make_inputs<T>(config.op, config.spec, n, m, seed + attempt);
    try {
      std::vector<double> times;
      MatrixBuffer<T> work;
      for (int it = 0; it < config.warmup + config.repetitions; ++it) {
        work = data.b;
        const auto t0 = clock_type::now();
        if (config.op == OpKind::Trmm)
          rec_trmm<T>(config.spec, data.a.view(), work.view(),
                      config.threshold, config.backend);
        else
          rec_trsm<T>(config.spec, data.a.view(), work.view(),
                      config.threshold, config.backend);
        const auto t1 = clock_type::now();
        if (config.inject_fault) {
          const T shift = static_cast<T>(max_abs(work) + 1.0);
          for (index_t c = 0; c < work.cols(); ++c)
            for (index_t r = 0; r < work.rows(); ++r) work(r, c) += shift;
        }
        validate_result(config.op, config.spec, data.a, data.b, work,
                        config.seed ^
                            (0x51ed270bull * static_cast<std::uint64_t>(it + 1)));
        if (it >= config.warmup)
          times.push_back(std::chrono::duration<double>(t1 - t0).count());
      }
      BenchRecord rec;
      rec.op = std::string(to_string(config.op));
      rec.variant = variant_string(config.spec);
      rec.n = n;
      rec.m = m;
      rec.threshold = config.threshold.value;
      rec.backend = config.backend.name;
      rec.elem = elem_kind_name(config.elem);
      rec.median_time_s = median_of(times);
      rec.min_time_s = *std::min_element(times.begin(), times.end());
      const double flops = static_cast<double>(n) * static_cast<double>(n) *
                           static_cast<double>(m);
      rec.gflops = flops / rec.median_time_s / 1e9;
      return rec;
    } catch (const SingularityError&) {
      if (attempt >= 10) throw;
    }
  }
}

void check_config(const BenchConfig& config) {
  validate(config.spec);
  validate(config.backend);
  if (config.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (config.warmup < 0) throw ConfigError("warmup must be >= 0");
  if (config.sizes.empty()) throw ConfigError("no sizes given");
  for (index_t n : config.sizes)
    if (n < 1) throw ConfigError("sizes must be >= 1");
  if (config.m_mode == MMode::Fixed && config.fixed_m < 1)
    throw ConfigError("fixed m must be >= 1");
  if (config.threshold.value < 1) throw ConfigError("threshold must be >= 1");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kSweepCsvHeader << '\n';
  for (const BenchRecord& r : records) {
    out << r.op << ',' << r.variant << ',' << r.n << ',' << r.m << ','
        << r.threshold << ',' << r.backend << ',' << r.elem << ','
        << format_double(r.median_time_s) << ',' << format_double(r.min_time_s)
        << ',' << format_double(r.gflops) << '\n';
  }
}

void write_sweep_csv(const std::string& path,
                     const std::vector<BenchRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_sweep_csv(out, records);
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<BenchRecord> read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("'" + path + "' is empty");
  if (line != kSweepCsvHeader)
    throw ConfigError("'" + path + "' has an unexpected header: " + line);
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 10)
      throw ConfigError("'" + path + "' has a malformed row: " + line);
    BenchRecord r;
    r.op = fields[0];
    r.variant = fields[1];
    r.n = std::stoll(fields[2]);
    r.m = std::stoll(fields[3]);
    r.threshold = std::stoll(fields[4]);
    r.backend = fields[5];
    r.elem = fields[6];
    r.median_time_s = std::stod(fields[7]);
    r.min_time_s = std::stod(fields[8]);
    r.gflops = std::stod(fields[9]);
    records.push_back(std::move(r));
  }
  return records;
}

void write_ratio_csv(std::ostream& out, const std::vector<RatioRecord>& records) {
  out << kRatioCsvHeader << '\n';
  for (const RatioRecord& r : records) {
    out << r.op << ',' << r.variant << ',' << r.n << ',' << r.m << ','
        << format_double(r.baseline_s) << ',' << format_double(r.candidate_s)
        << ',' << format_double(r.ratio_percent) << '\n';
  }
}

void write_ratio_csv(const std::string& path,
                     const std::vector<RatioRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_ratio_csv(out, records);
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<BenchRecord> run_sweep(const BenchConfig& config) {
  check_config(config);
  std::vector<BenchRecord> records;
  for (std::size_t i = 0; i < config.sizes.size(); ++i) {
    const index_t n = config.sizes[i];
    const index_t m = config.m_mode == MMode::Fixed ? config.fixed_m : n;
    const std::uint64_t seed = config.seed + 7919 * (i + 1);
    if (config.elem == ElemKind::F32)
      records.push_back(time_one<float>(config, n, m, seed));
    else
      records.push_back(time_one<double>(config, n, m, seed));
  }
  if (!config.out_path.empty()) write_sweep_csv(config.out_path, records);
  return records;
}

std::vector<RatioRecord> ratio_report(const std::string& baseline_csv,
                                      const std::string& candidate_csv,
                                      const std::string& out_path) {
  const std::vector<BenchRecord> base = read_sweep_csv(baseline_csv);
  const std::vector<BenchRecord> cand = read_sweep_csv(candidate_csv);

  using Key = std::tuple<std::string, std::string, index_t, index_t>;
  const auto key_of = [](const BenchRecord& r) {
    return Key{r.op, r.variant, r.n, r.m};
  };
  const auto key_str = [](const Key& k) {
    return std::get<0>(k) + "," + std::get<1>(k) + "," +
           std::to_string(std::get<2>(k)) + "," + std::to_string(std::get<3>(k));
  };

  std::map<Key, double> cand_times;
  for (const BenchRecord& r : cand) cand_times[key_of(r)] = r.median_time_s;

  std::string missing;
  std::map<Key, bool> seen;
  for (const BenchRecord& r : base) {
    seen[key_of(r)] = true;
    if (!cand_times.count(key_of(r)))
      missing += " candidate lacks (" + key_str(key_of(r)) + ")";
  }
  for (const BenchRecord& r : cand)
    if (!seen.count(key_of(r)))
      missing += " baseline lacks (" + key_str(key_of(r)) + ")";
  if (!missing.empty()) throw JoinError("key mismatch:" + missing);

  std::vector<RatioRecord> out;
  for (const BenchRecord& r : base) {
    RatioRecord rr;
    rr.op = r.op;
    rr.variant = r.variant;
    rr.n = r.n;
    rr.m = r.m;
    rr.baseline_s = r.median_time_s;
    rr.candidate_s = cand_times[key_of(r)];
    // Quotient first: identical times give exactly 1.0, hence exactly 100.
    rr.ratio_percent = 100.0 * (rr.baseline_s / rr.candidate_s);
    out.push_back(std::move(rr));
  }
  if (!out_path.empty()) write_ratio_csv(out_path, out);
  return out;
}

std::vector<BenchRecord> crossover_scan(BenchConfig config,
                                        const std::vector<index_t>& thresholds) {
  if (thresholds.empty()) throw ConfigError("no thresholds given");
  const std::string out_path = config.out_path;
  config.out_path.clear();
  std::vector<BenchRecord> all;
  for (index_t t : thresholds) {
    config.threshold = Threshold{t};
    std::vector<BenchRecord> part = run_sweep(config);
    all.insert(all.end(), part.begin(), part.end());
  }
  if (!out_path.empty()) write_sweep_csv(out_path, all);
  return all;
}

}  // namespace rectri::bench
