// One line per acceptance criterion: PASS/FAIL, the measured quantity and the
// wall time against its budget. Exit status is nonzero when any line fails.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kirchhoff/dynamics.hpp"
#include "kirchhoff/experiments.hpp"
#include "kirchhoff/verify.hpp"

using namespace kirchhoff;

namespace {

constexpr std::uint64_t kSeed = 20240521;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

Outcome from_row(const SuiteRow& r) {
  std::ostringstream s;
  s << r.cases << " cases, " << r.violations << " violations, worst " << r.worst;
  return {r.pass(), s.str()};
}

Outcome from_verdicts(const ExperimentResult& r, const std::vector<std::string>& names) {
  Outcome o{true, ""};
  for (const auto& name : names) {
    bool found = false;
    for (const auto& v : r.verdicts)
      if (v.name == name) {
        found = true;
        o.pass = o.pass && v.pass;
        o.detail += (o.detail.empty() ? "" : "; ") + v.name + ": " + v.detail;
      }
    if (!found) {
      o.pass = false;
      o.detail += "; missing verdict " + name;
    }
  }
  return o;
}

Json four_mode_affine() {
  return Json::parse(R"({
    "spectrum": {"kind": "linear", "modes": 4},
    "nonlinearity": {"kind": "affine", "nu0": 1.0, "slope": 1.0},
    "weight": {"kind": "zero"},
    "initial": {"u0": [0.2, 0.1, 0.05, 0.025], "u1": [0, 0, 0, 0]},
    "perturbation": {"d0": [1, 0.5, 0.25, 0.125], "d1": [0, 0.5, 0, 0.25],
                     "epsilon_powers": {"base": 2, "from": 4, "to": 20}},
    "solver": {"tol": 1e-10, "t_end": 20, "samples": 200}
  })");
}

Outcome hamiltonian_drift_check() {
  const Spectrum spec = Spectrum::linear(8);
  const Nonlinearity nl = Nonlinearity::affine(1.0, 1.0);
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    ModeVector u(8), v(8);
    for (std::size_t k = 0; k < 8; ++k) {
      const double scale = 0.5 / double(k + 1);
      u[k] = scale * (double(rng() >> 11) * 0x1.0p-53 - 0.5);
      v[k] = scale * (double(rng() >> 11) * 0x1.0p-53 - 0.5);
    }
    const Trajectory tr = evolve_kirchhoff(spec, nl, State{0.0, u, v}, 100.0, 1e-10);
    worst = std::max(worst, hamiltonian_drift(tr, nl));
  }
  std::ostringstream s;
  s << "max relative drift " << worst << " over 4 random data sets";
  return {worst <= 1e-8, s.str()};
}

Outcome age_scaling_check() {
  Json fd = four_mode_affine();
  fd["experiment"] = "age";
  fd["solver"]["tol"] = 1e-9;
  fd["age"] = {{"case", "finite_dimensional"}, {"max_simulation_time", 200}};
  const Outcome a = from_verdicts(run_age(parse_config(fd)), {"log_scaling", "confinement_below_2R1"});

  Json null = four_mode_affine();
  null["experiment"] = "age";
  null["solver"]["tol"] = 1e-9;
  null["initial"] = {{"u0", {0, 0, 0, 0}}, {"u1", {0, 0, 0, 0}}};
  null["perturbation"].erase("epsilon_powers");
  null["perturbation"]["epsilons"] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  null["age"] = {{"case", "null_solution"}, {"max_simulation_time", 200}};
  const Outcome b =
      from_verdicts(run_age(parse_config(null)), {"null_scaling_bounded_below", "confinement_below_2R1"});
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

Outcome lsc_check() {
  Json j = four_mode_affine();
  j["experiment"] = "lsc";
  j["perturbation"]["epsilon_powers"]["from"] = 1;
  return from_verdicts(run_lsc(parse_config(j)), {"sup_gap_monotone", "sup_gap_vanishes"});
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism_check() {
  const auto base = std::filesystem::temp_directory_path() / "kirchhoff_acceptance_determinism";
  std::filesystem::remove_all(base);
  ScenarioConfig cfg;
  cfg.experiment = Experiment::Verify;
  cfg.seed = kSeed;
  std::size_t files = 0;
  bool same = true;
  for (OutputFormat f : {OutputFormat::Csv, OutputFormat::Json}) {
    const auto a = write_result(run_experiment(cfg), base / "a", f);
    const auto b = write_result(run_experiment(cfg), base / "b", f);
    same = same && a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = slurp(base / "a" / a[i].filename()) == slurp(base / "b" / b[i].filename());
      ++files;
    }
  }
  std::filesystem::remove_all(base);
  return {same, std::to_string(files) + " files compared across two full verify runs"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"hamiltonian_conservation", 5, hamiltonian_drift_check},
      {"linear_energy_bound", 30, [] { return from_row(suite_linear_energy(kSeed, 200, 1e-9)); }},
      {"wellposedness_regular", 60, [] { return from_row(suite_regular_wellposedness(kSeed, 50, 1e-9)); }},
      {"wellposedness_minimal", 120, [] { return from_row(suite_minimal_wellposedness(kSeed, 20, 1e-9)); }},
      {"interpolation_inequality", 10, [] { return from_row(suite_interpolation(kSeed, 10000)); }},
      {"growth_envelopes", 30,
       [] {
         const Outcome a = from_row(suite_envelope(kSeed, 1000, EnvelopeFamily::Analytic));
         const Outcome q = from_row(suite_envelope(kSeed, 1000, EnvelopeFamily::QuasiAnalytic));
         return Outcome{a.pass && q.pass, "analytic " + a.detail + "; quasi-analytic " + q.detail};
       }},
      {"guaranteed_time_tightness", 1, [] { return from_row(suite_guaranteed_time_tightness(kSeed, 100)); }},
      {"almost_global_existence_scaling", 60, age_scaling_check},
      {"lifespan_continuity", 60, lsc_check},
      {"verify_determinism", 60, determinism_check},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << c.name << " (" << secs << " s of "
              << c.budget_s << " s" << (in_time ? "" : ", over budget") << "): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
