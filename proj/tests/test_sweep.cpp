#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "dicke/sweep.hpp"
#include "dicke/verify.hpp"

using namespace dicke;

namespace {

SweepConfig purity_config() {
  SweepConfig c;
  c.n_list = {8};
  c.omega_min = 0.05;
  c.omega_max = 20.0;
  c.steps = 50;
  c.measures = {"purity"};
  c.timing = false;
  return c;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dicke_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string to_csv(const std::vector<SweepRecord>& rs) {
  std::ostringstream os;
  write_csv(os, rs);
  return os.str();
}

}  // namespace

TEST(Config, Validation) {
  SweepConfig c;
  EXPECT_THROW(c.validate(), std::invalid_argument);  // no measures
  c.measures = {"purity"};
  EXPECT_NO_THROW(c.validate());
  c.measures = {"entropy"};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.measures = {"gmn"};
  c.n_list = {16};
  c.n_r = {6};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.n_r = {4};
  EXPECT_NO_THROW(c.validate());
  c.measures = {"jmulti"};
  c.n_list = {10};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.measures = {"negativity"};
  c.n_list = {8};
  c.n_a = {5};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.n_a = {};
  c.n_list = {300};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.n_list = {8};
  c.steps = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, FromJson) {
  const auto j = nlohmann::json::parse(R"({"n":[4,6],"omega":{"min":0.1,"max":2,"steps":5,"scale":"linear"},
    "measures":["purity","negativity"],"na":[1,2],"workers":3,"format":"jsonl","timing":false})");
  const auto c = config_from_json(j);
  EXPECT_EQ(c.n_list, (std::vector<int>{4, 6}));
  EXPECT_EQ(c.steps, 5);
  EXPECT_EQ(c.scale, GridScale::Linear);
  EXPECT_EQ(c.workers, 3);
  EXPECT_EQ(c.format, OutputFormat::Jsonl);
  EXPECT_FALSE(c.timing);
  EXPECT_EQ(c.n_a, (std::vector<int>{1, 2}));
}

TEST(Config, DensifiesOnlyForEntanglementMeasures) {
  SweepConfig c = purity_config();
  c.steps = 60;
  EXPECT_EQ(c.grid().size(), 60u);
  c.measures = {"negativity"};
  const auto g = c.grid();
  EXPECT_GT(g.size(), 90u);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  c.densify = false;
  EXPECT_EQ(c.grid().size(), 60u);
}

TEST(Sweep, PurityExample) {
  const auto rs = run_sweep(purity_config());
  ASSERT_EQ(rs.size(), 50u);
  EXPECT_GT(rs.front().value, 0.99);
  EXPECT_NEAR(rs.back().value, 1.0 / 9.0, 5e-3);
  for (std::size_t i = 1; i < rs.size(); ++i) {
    EXPECT_LT(rs[i].value, rs[i - 1].value + 1e-12) << i;
    EXPECT_LT(rs[i - 1].omega, rs[i].omega);
  }
}

TEST(Sweep, NegativityPeakGrowsWithN) {
  SweepConfig c;
  c.n_list = {8, 16};
  c.measures = {"negativity"};
  c.timing = false;
  const auto rs = run_sweep(c);
  double peak8 = 0, peak16 = 0;
  for (const auto& r : rs) {
    ASSERT_FALSE(r.failed()) << r.error;
    (r.n == 8 ? peak8 : peak16) = std::max(r.n == 8 ? peak8 : peak16, r.value);
    EXPECT_EQ(r.params, "na=" + std::to_string(r.n / 2));
  }
  EXPECT_GT(peak16, peak8);
}

TEST(Sweep, OrderingAndRecordCount) {
  SweepConfig c;
  c.n_list = {4, 2};
  c.omega_min = 0.1;
  c.omega_max = 5;
  c.steps = 4;
  c.measures = {"purity", "observables", "concurrence"};
  c.densify = false;
  c.timing = false;
  const auto rs = run_sweep(c);
  // per point: purity + three observables + concurrence
  ASSERT_EQ(rs.size(), 2u * 4u * 5u);
  for (std::size_t i = 1; i < rs.size(); ++i) {
    const auto& a = rs[i - 1];
    const auto& b = rs[i];
    EXPECT_TRUE(std::tie(a.n, a.omega, a.measure, a.params) < std::tie(b.n, b.omega, b.measure, b.params));
  }
  EXPECT_EQ(rs.front().n, 2);
}

TEST(Sweep, DeterministicAndWorkerIndependent) {
  SweepConfig c;
  c.n_list = {4, 6};
  c.omega_min = 0.1;
  c.omega_max = 10;
  c.steps = 6;
  c.measures = {"purity", "negativity", "discord2", "gmn", "mid"};
  c.densify = false;
  c.timing = false;
  const auto a = run_sweep(c);
  const auto b = run_sweep(c);
  c.workers = 8;
  const auto p = run_sweep(c);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_EQ(to_csv(a), to_csv(p));
  ASSERT_EQ(a.size(), p.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_FALSE(a[i].failed()) << a[i].measure << " " << a[i].error;
    EXPECT_EQ(std::memcmp(&a[i].value, &p[i].value, sizeof(double)), 0) << i;
  }
}

TEST(Sweep, FailuresBecomeErrorRecords) {
  // coherent steady states are rejected by the diagonal-state test; purity on the same points survives
  SweepConfig c;
  c.n_list = {4};
  c.omega_min = 0.5;
  c.omega_max = 100;
  c.steps = 3;
  c.measures = {"hankel", "purity"};
  c.timing = false;
  c.diag_tol = 1e-2;
  const auto rs = run_sweep(c);
  ASSERT_EQ(rs.size(), 6u);
  int errors = 0;
  for (const auto& r : rs) {
    if (r.measure == "purity") {
      EXPECT_FALSE(r.failed());
      const CMatrix m = steady_state({4, r.omega}).matrix();
      EXPECT_EQ(r.value, (m * m).trace().real());
    } else if (r.failed()) {
      ++errors;
      EXPECT_TRUE(std::isnan(r.value));
      EXPECT_NE(r.error.find("not diagonal"), std::string::npos);
    }
  }
  EXPECT_EQ(errors, 2);
  const auto& last = rs.back().measure == "hankel" ? rs.back() : rs[rs.size() - 2];
  EXPECT_FALSE(last.failed());
  EXPECT_TRUE(last.aux.at("separable").get<bool>());
}

TEST(Sweep, SteadyStatesComputedOncePerPoint) {
  SweepConfig c;
  c.n_list = {3, 5};
  c.omega_min = 0.2;
  c.omega_max = 2;
  c.steps = 5;
  c.measures = {"purity", "observables", "negativity", "concurrence", "discord2"};
  c.densify = false;
  c.workers = 4;
  SteadyStateCache cache;
  (void)run_sweep(c, &cache);
  EXPECT_EQ(cache.computed(), 10);
  (void)run_sweep(c, &cache);
  EXPECT_EQ(cache.computed(), 10);
}

TEST(Sweep, DiskCacheReused) {
  const auto dir = scratch_dir("cache");
  SweepConfig c = purity_config();
  c.steps = 3;
  c.cache_dir = dir.string();
  const auto a = run_sweep(c);
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir), {}), 3);
  SteadyStateCache cache(dir.string());
  const auto b = run_sweep(c, &cache);
  EXPECT_EQ(to_csv(a), to_csv(b));
  std::filesystem::remove_all(dir);
}

TEST(Output, CsvHeaderAndNan) {
  SweepRecord ok, bad;
  ok.n = bad.n = 8;
  ok.omega = bad.omega = 0.5;
  ok.measure = "purity";
  ok.value = 0.25;
  bad.measure = "hankel";
  bad.error = "boom";
  const auto s = to_csv({ok, bad});
  std::istringstream in(s);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,omega,measure,params,value,wall_time_ms");
  std::getline(in, line);
  EXPECT_EQ(line, "8,0.5,purity,,0.25,0");
  std::getline(in, line);
  EXPECT_EQ(line, "8,0.5,hankel,,nan,0");
}

TEST(Output, JsonLinesCarrySchemaAndAux) {
  SweepConfig c;
  c.n_list = {4};
  c.omega_min = 0.5;
  c.omega_max = 1;
  c.steps = 2;
  c.measures = {"discord2"};
  const auto rs = run_sweep(c);
  std::ostringstream os;
  write_jsonl(os, rs);
  std::istringstream in(os.str());
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("schema_version"), "1");
    EXPECT_TRUE(j.at("aux").contains("theta"));
    EXPECT_TRUE(j.at("value").is_number());
    ++count;
  }
  EXPECT_EQ(count, 2);
}

TEST(State, DumpRoundTrip) {
  const auto dir = scratch_dir("state");
  const auto path = dir / "s.json";
  const auto rho = dump_state(2, 0.5, path);
  const auto [back, w] = read_state(path);
  EXPECT_EQ(w, 0.5);
  EXPECT_EQ(back.dim(), 3);
  EXPECT_NEAR(back.matrix().trace().real(), 1.0, 1e-15);
  EXPECT_LE((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  const auto big = dump_state(4, 100.0, dir / "t.json");
  EXPECT_LT(off_diagonal_mass(read_state(dir / "t.json").first.matrix()), 1e-2);
  (void)big;
  EXPECT_THROW(dump_state(0, 1.0, dir / "u.json"), std::invalid_argument);
  EXPECT_THROW(dump_state(2, 1.0, dir / "missing" / "v.json"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(Verify, QuickPasses) {
  const auto report = verify({VerifyLevel::Quick, false});
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << " residual " << c.residual;
  EXPECT_TRUE(report.passed());
}

TEST(Verify, TamperedClebschGordanIsReported) {
  const auto report = verify({VerifyLevel::Quick, true});
  EXPECT_FALSE(report.passed());
  const auto* cg = report.find("clebsch-gordan orthonormality");
  ASSERT_NE(cg, nullptr);
  EXPECT_FALSE(cg->passed);
  EXPECT_GT(cg->residual, 1e-4);
  // the shared cache is untouched
  EXPECT_LT(detail::cg_isometry_defect(*cg_table(half(3), half(5))), 1e-12);
}
