#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "rectri/bench.hpp"
#include "test_support.hpp"

using namespace rectri;
using namespace rectri::bench;

namespace {

std::string temp_path(const std::string& tag) {
  return "rectri_test_" + tag + ".csv";
}

BenchConfig small_config() {
  BenchConfig config;
  config.op = OpKind::Trsm;
  config.spec = testing::make_spec(Side::Left, Uplo::Lower, Trans::NoTrans,
                                   Diag::NonUnit);
  config.sizes = {2};
  config.m_mode = MMode::Fixed;
  config.fixed_m = 3;
  config.threshold = Threshold{2};
  config.backend = Backend::seq();
  config.repetitions = 3;
  config.warmup = 1;
  config.elem = ElemKind::F32;
  return config;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

TEST_CASE("run_sweep output shape") {
  BenchConfig config = small_config();
  const std::string path = temp_path("shape");
  config.out_path = path;
  const auto records = run_sweep(config);
  REQUIRE(records.size() == 1);
  CHECK(records[0].op == "trsm");
  CHECK(records[0].variant == "left-lower-n-nonunit");
  CHECK(records[0].n == 2);
  CHECK(records[0].m == 3);
  CHECK(records[0].threshold == 2);
  CHECK(records[0].backend == "seq");
  CHECK(records[0].elem == "f32");
  CHECK(records[0].median_time_s > 0.0);
  CHECK(records[0].min_time_s <= records[0].median_time_s);
  CHECK(records[0].gflops > 0.0);

  std::ifstream in(path);
  std::string header, row, extra;
  REQUIRE(std::getline(in, header));
  CHECK(header == std::string(kSweepCsvHeader));
  REQUIRE(std::getline(in, row));
  CHECK(split_fields(row).size() == split_fields(header).size());
  CHECK_FALSE(std::getline(in, extra));
  std::remove(path.c_str());
}

TEST_CASE("m mode") {
  BenchConfig config = small_config();
  config.sizes = {8};
  config.fixed_m = 5;
  auto fixed = run_sweep(config);
  REQUIRE(fixed.size() == 1);
  CHECK(fixed[0].m == 5);

  config.m_mode = MMode::Square;
  auto square = run_sweep(config);
  REQUIRE(square.size() == 1);
  CHECK(square[0].m == 8);

  // gflops follows n^2 * m.
  const double expected =
      8.0 * 8.0 * 8.0 / square[0].median_time_s / 1e9;
  CHECK(square[0].gflops == doctest::Approx(expected));
}

TEST_CASE("sweep covers trmm and f64") {
  BenchConfig config = small_config();
  config.op = OpKind::Trmm;
  config.elem = ElemKind::F64;
  config.sizes = {3, 7};
  config.spec.alpha = 2.0;
  const auto records = run_sweep(config);
  REQUIRE(records.size() == 2);
  CHECK(records[0].op == "trmm");
  CHECK(records[0].elem == "f64");
  CHECK(records[1].n == 7);
}

TEST_CASE("ratio arithmetic") {
  std::vector<BenchRecord> base(1), cand(1);
  base[0] = BenchRecord{"trsm", "left-lower-n-nonunit", 8, 3, 2,
                        "seq",  "f32", 2.0, 2.0, 1.0};
  cand[0] = base[0];
  cand[0].median_time_s = 1.0;

  const std::string bpath = temp_path("ratio_base");
  const std::string cpath = temp_path("ratio_cand");
  write_sweep_csv(bpath, base);
  write_sweep_csv(cpath, cand);

  auto faster = ratio_report(bpath, cpath);
  REQUIRE(faster.size() == 1);
  CHECK(faster[0].ratio_percent == doctest::Approx(200.0));

  auto equal = ratio_report(bpath, bpath);
  CHECK(equal[0].ratio_percent == 100.0);

  auto slower = ratio_report(cpath, bpath);
  CHECK(slower[0].ratio_percent == doctest::Approx(50.0));

  std::remove(bpath.c_str());
  std::remove(cpath.c_str());
}

TEST_CASE("ratio of a sweep against itself is 100 for every key") {
  BenchConfig config = small_config();
  config.sizes = {2, 4, 6};
  const std::string path = temp_path("self");
  config.out_path = path;
  run_sweep(config);

  const std::string out = temp_path("self_ratio");
  auto records = ratio_report(path, path, out);
  REQUIRE(records.size() == 3);
  for (const RatioRecord& r : records) CHECK(r.ratio_percent == 100.0);

  std::ifstream in(out);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == std::string(kRatioCsvHeader));
  std::remove(path.c_str());
  std::remove(out.c_str());
}

TEST_CASE("ratio join errors list the missing keys") {
  std::vector<BenchRecord> base(2), cand(1);
  base[0] = BenchRecord{"trsm", "left-lower-n-nonunit", 8,  3, 2,
                        "seq",  "f32", 2.0, 2.0, 1.0};
  base[1] = base[0];
  base[1].n = 16;
  cand[0] = base[0];

  const std::string bpath = temp_path("join_base");
  const std::string cpath = temp_path("join_cand");
  write_sweep_csv(bpath, base);
  write_sweep_csv(cpath, cand);

  bool threw = false;
  try {
    ratio_report(bpath, cpath);
  } catch (const JoinError& e) {
    threw = true;
    CHECK(std::string(e.what()).find("16") != std::string::npos);
  }
  CHECK(threw);
  std::remove(bpath.c_str());
  std::remove(cpath.c_str());
}

TEST_CASE("crossover scan covers the threshold grid") {
  BenchConfig config = small_config();
  config.sizes = {4, 8};
  auto records = crossover_scan(config, {1, 8});
  REQUIRE(records.size() == 4);
  CHECK(records[0].threshold == 1);
  CHECK(records[1].threshold == 1);
  CHECK(records[2].threshold == 8);
  CHECK(records[3].threshold == 8);
}

TEST_CASE("csv round trip") {
  BenchConfig config = small_config();
  config.sizes = {2, 4};
  const std::string path = temp_path("roundtrip");
  config.out_path = path;
  const auto written = run_sweep(config);
  const auto read = read_sweep_csv(path);
  REQUIRE(read.size() == written.size());
  for (std::size_t i = 0; i < read.size(); ++i) {
    CHECK(read[i].op == written[i].op);
    CHECK(read[i].variant == written[i].variant);
    CHECK(read[i].n == written[i].n);
    CHECK(read[i].m == written[i].m);
    CHECK(read[i].median_time_s ==
          doctest::Approx(written[i].median_time_s).epsilon(1e-8));
  }
  std::remove(path.c_str());

  CHECK_THROWS_AS(read_sweep_csv("no_such_file.csv"), IoError);
}

TEST_CASE("the residual gate rejects corrupted results") {
  BenchConfig config = small_config();
  config.sizes = {16};
  config.threshold = Threshold{4};
  config.inject_fault = true;
  CHECK_THROWS_AS(run_sweep(config), ValidationError);

  config.inject_fault = false;
  CHECK_NOTHROW(run_sweep(config));
}

TEST_CASE("config validation") {
  BenchConfig config = small_config();
  config.repetitions = 0;
  CHECK_THROWS_AS(run_sweep(config), ConfigError);

  config = small_config();
  config.sizes.clear();
  CHECK_THROWS_AS(run_sweep(config), ConfigError);

  config = small_config();
  config.sizes = {0};
  CHECK_THROWS_AS(run_sweep(config), ConfigError);

  config = small_config();
  CHECK_THROWS_AS(crossover_scan(config, {}), ConfigError);
}

TEST_CASE("unwritable output path") {
  BenchConfig config = small_config();
  config.out_path = "no_such_dir/definitely/not/here.csv";
  CHECK_THROWS_AS(run_sweep(config), IoError);
}
