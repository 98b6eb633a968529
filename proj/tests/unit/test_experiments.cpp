#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "expect_errc.hpp"
#include "kirchhoff/experiments.hpp"

using namespace kirchhoff;

namespace {

const Verdict& verdict(const ExperimentResult& r, const std::string& name) {
  for (const auto& v : r.verdicts)
    if (v.name == name) return v;
  throw std::runtime_error("no verdict " + name);
}

double cell(const Table& t, std::size_t row, const std::string& col) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c] == col) return std::get<double>(t.rows.at(row).at(c));
  throw std::runtime_error("no column " + col);
}

Json four_mode(const char* experiment) {
  Json j = Json::parse(R"({
    "spectrum": {"kind": "linear", "modes": 4},
    "nonlinearity": {"kind": "affine", "nu0": 1.0, "slope": 1.0},
    "initial": {"u0": [0.2, 0.1, 0.05, 0.025], "u1": [0, 0, 0, 0]},
    "perturbation": {"d0": [1, 0.5, 0.25, 0.125], "d1": [0, 0.5, 0, 0.25],
                     "epsilon_powers": {"base": 2, "from": 4, "to": 20}},
    "solver": {"tol": 1e-10, "t_end": 20, "samples": 100}
  })");
  j["experiment"] = experiment;
  return j;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Lsc, FourModeAffineGapShrinksWithEpsilon) {
  const ExperimentResult r = run_lsc(parse_config(four_mode("lsc")));
  ASSERT_EQ(r.rows.rows.size(), 17u);
  EXPECT_TRUE(r.all_pass());
  for (std::size_t i = 0; i < r.rows.rows.size(); ++i) {
    // Quadratic in eps: E(u - v) ~ eps^2 E(d) up to the Lipschitz growth.
    EXPECT_LE(cell(r.rows, i, "max_bound_ratio"), 1.0);
    EXPECT_GT(cell(r.rows, i, "sup_gap_over_eps2"), 0.0);
  }
  const double ratio = cell(r.rows, 16, "sup_gap_over_eps2") / cell(r.rows, 12, "sup_gap_over_eps2");
  EXPECT_NEAR(ratio, 1.0, 1e-2);
  EXPECT_LT(cell(r.rows, 16, "sup_gap_energy"), 1e-6);
}

TEST(Lsc, IdenticalRunsHaveZeroGap) {
  const ScenarioConfig c = parse_config(four_mode("simulate"));
  const ExperimentResult r = run_simulate(c);
  const Trajectory t = trajectory_from_json(*r.trajectory);
  EXPECT_EQ(sup_energy_gap(t, t), 0.0);
  EXPECT_EQ(grid_samples(t).size(), 101u);  // samples counts intervals
}

TEST(Age, FiniteDimensionalTimesScaleWithLogEpsilon) {
  Json j = four_mode("age");
  j["age"] = {{"case", "finite_dimensional"}, {"max_simulation_time", 100}};
  const ExperimentResult r = run_age(parse_config(j));
  EXPECT_TRUE(r.all_pass());
  EXPECT_TRUE(verdict(r, "log_scaling").pass);
  const double g2 = r.summary.at("gammas").at("gamma2").get<double>();
  const std::size_t last = r.rows.rows.size() - 1;
  const double eps = cell(r.rows, last, "epsilon");
  // T_g inverts eps^2 E(d) Gamma1 e^{Gamma2 T} = R1^2, so T_g |log eps|^{-1} -> 2 / Gamma2.
  EXPECT_NEAR(cell(r.rows, last, "guaranteed_time") / std::abs(std::log(eps)), 2.0 / g2, 0.25 * (2.0 / g2));
  EXPECT_NEAR(cell(r.rows, last, "closed_form_time"), std::abs(std::log(eps)) / g2, 1e-9);
}

TEST(Age, ConstantCoefficientHasUnboundedGuaranteedTime) {
  Json j = four_mode("age");
  j["nonlinearity"] = {{"kind", "constant"}, {"nu0", 1.5}};
  j["age"] = {{"case", "finite_dimensional"}, {"max_simulation_time", 30}};
  const ExperimentResult r = run_age(parse_config(j));
  EXPECT_EQ(r.summary.at("gammas").at("gamma2").get<double>(), 0.0);
  EXPECT_TRUE(std::isinf(cell(r.rows, 0, "guaranteed_time")));
  EXPECT_TRUE(r.all_pass());
}

TEST(Age, NullSolutionTimesScaleWithInverseSquare) {
  Json j = four_mode("age");
  j["initial"] = {{"u0", {0, 0, 0, 0}}, {"u1", {0, 0, 0, 0}}};
  j["perturbation"].erase("epsilon_powers");
  j["perturbation"]["epsilons"] = {1e-1, 1e-2, 1e-3, 1e-4};
  j["age"] = {{"case", "null_solution"}, {"max_simulation_time", 50}};
  const ExperimentResult r = run_age(parse_config(j));
  EXPECT_TRUE(r.all_pass());
  for (std::size_t i = 0; i < r.rows.rows.size(); ++i)
    EXPECT_GT(cell(r.rows, i, "guaranteed_time_eps2"), 0.0);
}

TEST(Age, LargeEpsilonOnlyRaisesHypothesisFailed) {
  Json j = four_mode("age");
  j["initial"]["u0"] = {1.5, 1.0, 0.5, 0.2};
  j["perturbation"].erase("epsilon_powers");
  j["perturbation"]["epsilons"] = {0.9, 0.8};
  j["age"] = {{"case", "finite_dimensional"}};
  EXPECT_EQ(code_of([&] { (void)run_age(parse_config(j)); }), Errc::HypothesisFailed);
}

TEST(Age, CaseMustMatchWeight) {
  Json j = four_mode("age");
  j["age"] = {{"case", "analytic"}};
  EXPECT_EQ(code_of([&] { (void)run_age(parse_config(j)); }), Errc::ConfigError);
}

TEST(Growth, AnalyticAndQuasiAnalyticEnvelopesHold) {
  for (const char* kind : {"linear", "quasi_analytic"}) {
    Json j = four_mode("growth");
    j["weight"] = {{"kind", kind}, {"r0", 0.5}};
    j["solver"]["t_end"] = 5;
    const ExperimentResult r = run_growth(parse_config(j));
    EXPECT_TRUE(r.all_pass()) << kind;
    for (std::size_t i = 0; i < r.rows.rows.size(); ++i) {
      EXPECT_LE(cell(r.rows, i, "log_f_phi"), cell(r.rows, i, "log_envelope")) << kind;
      EXPECT_LE(cell(r.rows, i, "log_comparison"), cell(r.rows, i, "log_envelope") + 1e-9) << kind;
    }
  }
}

TEST(Growth, ZeroWeightIsRejected) {
  EXPECT_EQ(code_of([&] { (void)run_growth(parse_config(four_mode("growth"))); }), Errc::ConfigError);
}

TEST(Simulate, TrajectoryJsonRoundTrips) {
  const ScenarioConfig c = parse_config(four_mode("simulate"));
  const ExperimentResult r = run_simulate(c);
  ASSERT_TRUE(r.trajectory.has_value());
  const Trajectory t = trajectory_from_json(*r.trajectory);
  EXPECT_EQ(trajectory_to_json(t).dump(), r.trajectory->dump());
  EXPECT_TRUE(verdict(r, "hamiltonian_drift").pass);
}

TEST(WriteResult, RerunsAreByteIdentical) {
  const auto base = std::filesystem::temp_directory_path() / "kirchhoff_write_result";
  std::filesystem::remove_all(base);
  for (OutputFormat f : {OutputFormat::Csv, OutputFormat::Json}) {
    ScenarioConfig c = parse_config(four_mode("lsc"));
    const auto a = write_result(run_experiment(c), base / "a", f);
    const auto b = write_result(run_experiment(c), base / "b", f);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].filename(), b[i].filename());
      EXPECT_EQ(slurp(base / "a" / a[i].filename()), slurp(base / "b" / b[i].filename()));
    }
  }
  std::filesystem::remove_all(base);
}

TEST(RunExperiment, MetadataCarriesHashAndSeed) {
  const ScenarioConfig c = parse_config(four_mode("lsc"));
  const ExperimentResult r = run_experiment(c);
  EXPECT_EQ(r.metadata.at("config_hash").get<std::string>(), config_hash(c));
  EXPECT_EQ(r.metadata.at("seed").get<std::uint64_t>(), c.seed);
  EXPECT_EQ(r.metadata.at("experiment").get<std::string>(), "lsc");
  EXPECT_FALSE(r.metadata.at("config").contains("output"));
}
