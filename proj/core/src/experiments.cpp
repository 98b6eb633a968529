#include "kirchhoff/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kirchhoff/error.hpp"
#include "kirchhoff/verify.hpp"
#include "parallel.hpp"

namespace kirchhoff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) { return format_double(x); }

/// max{|A^{1/4} v|, |A^{3/4} u|}
double regularity_norm(const Spectrum& spec, const ModeVector& u, const ModeVector& v) {
  return std::sqrt(std::max(power_norm_sq(spec, v, 0.25), power_norm_sq(spec, u, 0.75)));
}

ModeVector direction(const std::vector<double>& d, std::size_t n, const char* name) {
  if (d.empty()) return ModeVector(n);
  if (d.size() != n) throw Error(Errc::ConfigError, std::string(name) + " length does not match the spectrum");
  return ModeVector(d);
}

/// E(d0, d1); the perturbation must be nonzero and an epsilon grid present.
double direction_energy(const ScenarioConfig& cfg, const Spectrum& spec) {
  if (cfg.perturbation.epsilons.empty())
    throw Error(Errc::ConfigError, "perturbation.epsilons (or epsilon_powers) is required");
  const double Ed = sobolev_energy(spec, direction(cfg.perturbation.d0, spec.size(), "perturbation.d0"),
                                   direction(cfg.perturbation.d1, spec.size(), "perturbation.d1"));
  if (!(Ed > 0.0)) throw Error(Errc::ConfigError, "perturbation direction (d0, d1) is zero");
  return Ed;
}

std::vector<double> solver_grid(const ScenarioConfig& cfg, double t_end) {
  return uniform_grid(0.0, t_end, cfg.solver.samples);
}

Trajectory run(const ScenarioConfig& cfg, const Spectrum& spec, const Nonlinearity& nl,
               const State& init, double t_end) {
  const std::vector<double> grid = solver_grid(cfg, t_end);
  return evolve_kirchhoff(spec, nl, init, t_end, cfg.solver.tol, grid);
}

std::vector<double> gap_curve(const Trajectory& a, const Trajectory& b) {
  const auto ga = grid_samples(a), gb = grid_samples(b);
  if (ga.size() != gb.size())
    throw Error(Errc::LengthMismatch, "trajectories have different output grids");
  std::vector<double> out(ga.size());
  for (std::size_t i = 0; i < ga.size(); ++i) {
    if (ga[i].t != gb[i].t) throw Error(Errc::LengthMismatch, "trajectories have different output grids");
    out[i] = sobolev_energy(a.spectrum, ga[i].u - gb[i].u, ga[i].v - gb[i].v);
  }
  return out;
}

Json optional_number(std::optional<double> x) {
  if (!x) return nullptr;
  if (!std::isfinite(*x)) return fmt(*x);
  return *x;
}

}  // namespace

std::string_view library_version() noexcept { return KIRCHHOFF_VERSION; }

bool ExperimentResult::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<TrajectorySample> grid_samples(const Trajectory& traj) {
  std::vector<TrajectorySample> out;
  for (const auto& s : traj.samples)
    if (s.on_grid || &s == &traj.samples.front()) out.push_back(s);
  return out;
}

double sup_energy_gap(const Trajectory& a, const Trajectory& b) {
  const std::vector<double> g = gap_curve(a, b);
  return g.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
}

std::vector<std::filesystem::path> write_result(const ExperimentResult& r,
                                                const std::filesystem::path& dir,
                                                OutputFormat format) {
  std::vector<std::filesystem::path> written;
  const std::string ext = format == OutputFormat::Csv ? ".csv" : ".json";
  auto emit = [&](const std::string& stem, const Table& t) {
    std::string text;
    if (format == OutputFormat::Csv) {
      std::ostringstream os;
      write_csv(os, t);
      text = os.str();
    } else {
      text = table_to_json(t).dump(1) + "\n";
    }
    write_file(dir / (stem + ext), text);
    written.push_back(dir / (stem + ext));
  };

  const std::string name(to_string(r.experiment));
  emit(name, r.rows);
  Table verdicts;
  verdicts.columns = {"verdict", "pass", "detail"};
  for (const auto& v : r.verdicts) verdicts.add_row({v.name, v.pass, v.detail});
  emit("verdicts", verdicts);
  for (const auto& [stem, table] : r.extra_tables) emit(stem, table);

  if (r.trajectory && format == OutputFormat::Json) {
    write_file(dir / "trajectory.json", r.trajectory->dump() + "\n");
    written.push_back(dir / "trajectory.json");
  }

  Json meta = r.metadata;
  meta["summary"] = r.summary;
  meta["all_pass"] = r.all_pass();
  write_file(dir / "metadata.json", meta.dump(1) + "\n");
  written.push_back(dir / "metadata.json");
  return written;
}

// ---------------------------------------------------------------- lsc

ExperimentResult run_lsc(const ScenarioConfig& cfg) {
  const Spectrum spec = make_spectrum(cfg.spectrum);
  const Nonlinearity nl = make_nonlinearity(cfg.nonlinearity);
  const State init = initial_state(cfg);
  (void)direction_energy(cfg, spec);
  const double t_end = cfg.solver.t_end;
  const Trajectory base = run(cfg, spec, nl, init, t_end);
  const std::vector<double> times = solver_grid(cfg, t_end);

  struct Cell {
    double eps, gap0, sup, ratio, g1, g2;
    std::vector<double> curve, bound;
  };
  const auto& eps = cfg.perturbation.epsilons;
  const std::vector<Cell> cells = detail::parallel_map(eps.size(), [&](std::size_t i) {
    const Trajectory pert = run(cfg, spec, nl, perturbed_state(cfg, eps[i]), t_end);
    Cell c{eps[i], 0.0, 0.0, 0.0, 0.0, 0.0, gap_curve(base, pert), {}};
    const GammaSet gs = gammas(build_pair_constants(spec, nl, base, pert), GammaCase::Regular);
    c.g1 = *gs.gamma1;
    c.g2 = *gs.gamma2;
    c.gap0 = c.curve.front();
    for (std::size_t j = 0; j < c.curve.size(); ++j) {
      const double bound = c.g1 * c.gap0 * std::exp(c.g2 * times[j]);
      c.bound.push_back(bound);
      c.sup = std::max(c.sup, c.curve[j]);
      if (c.curve[j] > 0.0) c.ratio = std::max(c.ratio, bound > 0.0 ? c.curve[j] / bound : kInf);
    }
    return c;
  });

  ExperimentResult r;
  r.experiment = Experiment::Lsc;
  r.rows.columns = {"epsilon", "gap_energy_0", "sup_gap_energy", "sup_gap_over_eps2",
                    "gamma1", "gamma2", "max_bound_ratio"};
  Table curves;
  curves.columns = {"epsilon", "t", "gap_energy", "regular_bound"};
  double worst_ratio = 0.0;
  bool monotone = true;
  std::string monotone_detail = "sup gap nonincreasing along the epsilon grid";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    r.rows.add_row({c.eps, c.gap0, c.sup, c.sup / (c.eps * c.eps), c.g1, c.g2, c.ratio});
    for (std::size_t j = 0; j < c.curve.size(); ++j)
      curves.add_row({c.eps, times[j], c.curve[j], c.bound[j]});
    worst_ratio = std::max(worst_ratio, c.ratio);
    if (i > 0 && c.sup > (1.0 + cfg.lsc.monotone_slack) * cells[i - 1].sup && monotone) {
      monotone = false;
      monotone_detail = "sup gap rises from " + fmt(cells[i - 1].sup) + " to " + fmt(c.sup) +
                        " at epsilon " + fmt(c.eps);
    }
  }
  r.extra_tables.emplace_back("lsc_curves", std::move(curves));

  const double last = cells.empty() ? kNaN : cells.back().sup;
  r.verdicts.push_back({"regular_wellposedness_bound", worst_ratio <= 1.0 + cfg.lsc.bound_slack,
                        "max ratio " + fmt(worst_ratio) + " (allowed 1 + " + fmt(cfg.lsc.bound_slack) + ")"});
  r.verdicts.push_back({"sup_gap_monotone", monotone, monotone_detail});
  r.verdicts.push_back({"sup_gap_vanishes", last < cfg.lsc.zero_threshold,
                        "last sup gap " + fmt(last) + " vs threshold " + fmt(cfg.lsc.zero_threshold)});
  r.summary = {{"H0", hamiltonian(spec, nl, init.u, init.v)},
               {"base_hamiltonian_drift", optional_number(base.info.hamiltonian_drift)},
               {"t_end", t_end}};
  return r;
}

// ---------------------------------------------------------------- age

namespace {

LifespanCase lifespan_case(const ScenarioConfig& cfg) {
  if (cfg.age.lifespan_case) return *cfg.age.lifespan_case;
  switch (cfg.weight.kind) {
    case WeightFamily::Linear: return LifespanCase::Analytic;
    case WeightFamily::QuasiAnalytic: return LifespanCase::QuasiAnalytic;
    default: return LifespanCase::FiniteDimensional;
  }
}

struct Hypothesis {
  const char* key;
  const char* statement;
};

constexpr Hypothesis kEnergyHyp{"energy", "energy hypothesis H(v) <= 2 H0"};
constexpr Hypothesis kNullEnergyHyp{"energy", "energy hypothesis H(v) <= nu0 R0^2"};
constexpr Hypothesis kRegularHyp{"smallness_regular",
                                 "regular smallness E0 Gamma1 exp(Gamma2 T) < R1^2"};
constexpr Hypothesis kMinimalHyp{
    "smallness_minimal",
    "minimal smallness E0 {Gamma1_l exp(Gamma2_l T) + 2 Gamma3 exp(Gamma4 T)} < R1^2 / 2"};
constexpr Hypothesis kHighHyp{"high_frequency",
                              "high-frequency condition E_u^{l,+}(0) Gamma3 exp(Gamma4 T) < R1^2 / 6"};

/// Outcome of the hypothesis checks for one epsilon.
struct Admission {
  double eps = 0.0;
  double E0 = 0.0;
  double H_perturbed = 0.0;
  bool energy_ok = false;
  std::optional<Hypothesis> failed;
  double T_guaranteed = kNaN;
  [[nodiscard]] bool admissible() const { return !failed; }
};

Admission admit(double eps, double E0, double Hv, double energy_cap, const Hypothesis& energy_hyp,
                const GammaSet& gs, double R1, GammaCase gc, std::optional<double> Eu_high) {
  Admission a{eps, E0, Hv, Hv <= energy_cap, std::nullopt, kNaN};
  if (!a.energy_ok) {
    a.failed = energy_hyp;
    return a;
  }
  try {
    a.T_guaranteed = guaranteed_time(gs, E0, R1, gc, Eu_high);
  } catch (const Error& e) {
    if (e.code() == Errc::LambdaConditionFails) a.failed = kHighHyp;
    else if (e.code() == Errc::GapTooLarge) a.failed = gc == GammaCase::Regular ? kRegularHyp : kMinimalHyp;
    else throw;
  }
  return a;
}

struct Confinement {
  double simulated_until = 0.0;
  double max_norm = 0.0;
  std::optional<double> escape;
};

Confinement confine(const ScenarioConfig& cfg, const Spectrum& spec, const Nonlinearity& nl,
                    const State& init, double T, double R1) {
  Confinement c;
  c.simulated_until = T;
  if (!(T > 0.0)) {
    c.max_norm = regularity_norm(spec, init.u, init.v);
    return c;
  }
  const Trajectory tr = run(cfg, spec, nl, init, T);
  for (const auto& s : tr.samples) c.max_norm = std::max(c.max_norm, regularity_norm(spec, s.u, s.v));
  c.escape = escape_time(tr, 4.0 * R1 * R1);
  return c;
}

std::optional<double> closed_form(LifespanCase kind, double eps, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) return std::nullopt;
  try {
    return lifespan_lower_bound(kind, eps, rate).lower_bound;
  } catch (const Error& e) {
    if (e.code() == Errc::EpsilonTooLarge) return std::nullopt;
    throw;
  }
}

bool nondecreasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] < xs[i - 1]) return false;
  return true;
}

void add_age_row(Table& t, const Admission& a, std::optional<double> T_closed, bool small_at_closed,
                 const std::optional<Confinement>& c, double two_R1, double R1_eps) {
  const double Tg = a.T_guaranteed;
  t.add_row({a.eps, a.E0, a.H_perturbed, a.energy_ok, a.admissible(),
             std::string(a.failed ? a.failed->key : ""), Tg, T_closed.value_or(kNaN), small_at_closed,
             std::isfinite(Tg) ? Tg * a.eps * a.eps : Tg, c ? c->simulated_until : kNaN,
             c ? c->max_norm : kNaN, two_R1, c ? c->max_norm <= two_R1 : false,
             c && c->escape ? *c->escape : kNaN, R1_eps});
}

const std::vector<std::string> kAgeColumns = {
    "epsilon",       "E0",           "H_perturbed",     "energy_ok",    "admissible",
    "failed_hypothesis", "guaranteed_time", "closed_form_time", "smallness_at_closed_form",
    "guaranteed_time_eps2", "simulated_until", "max_regularity_norm", "two_R1", "confined",
    "escape_time", "R1"};

Table constants_ledger(const ConstantsBundle& cb, const GammaSet& gs) {
  Table t;
  t.columns = {"name", "formula", "value"};
  t.add_row({std::string("H0"), std::string("|u1|^2 + M(|A^{1/2} u0|^2)"), cb.H0});
  t.add_row({std::string("R0"), std::string("(2 H0 / nu0)^{1/2}"), cb.R0});
  t.add_row({std::string("C0"), std::string("max m on [0, R0^2]"), cb.C0});
  t.add_row({std::string("L0"), std::string("max |m'| on [0, R0^2]"), cb.L0});
  t.add_row({std::string("R1"), std::string("1.01 sup max{|A^{1/4} u'|, |A^{3/4} u|}"), cb.R1});
  if (cb.R2) t.add_row({std::string("R2"), std::string("1.01 sup |A^{5/4} u|"), *cb.R2});
  if (cb.R2_lambda)
    t.add_row({std::string("R2_lambda"), std::string("1.01 sup |A^{5/4} u_{l,-}|"), *cb.R2_lambda});
  const std::pair<const char*, const char*> formulas[] = {
      {"gamma1", "max{1,C0} / min{1,nu0}"},
      {"gamma2", "8 L0 R1^2 / nu0 + 4 L0 R0 (R1 + R2) / sqrt(nu0)"},
      {"gamma1_lambda", "gamma1 max{1, 1/l^2}"},
      {"gamma2_lambda", "8 L0 R1^2 / nu0 + 2 L0 (2 R0 + 3 R1)(2 R1 + R2_l) / sqrt(nu0)"},
      {"gamma3", "2 max{1,C0} / min{1,nu0}"},
      {"gamma4", "8 L0 R1^2 / nu0"}};
  const std::optional<double> values[] = {gs.gamma1,        gs.gamma2, gs.gamma1_lambda,
                                          gs.gamma2_lambda, gs.gamma3, gs.gamma4};
  for (std::size_t i = 0; i < std::size(values); ++i)
    if (values[i]) t.add_row({std::string(formulas[i].first), std::string(formulas[i].second), *values[i]});
  return t;
}

[[noreturn]] void no_admissible(const std::vector<Admission>& adm) {
  const Admission& a = adm.back();
  throw Error(Errc::HypothesisFailed, std::string(a.failed->statement) + " fails for every epsilon (smallest " +
                                          fmt(a.eps) + ")");
}

ExperimentResult age_null_solution(const ScenarioConfig& cfg, const Spectrum& spec,
                                   const Nonlinearity& nl) {
  const State init = initial_state(cfg);
  if (init.u.norm_sq() != 0.0 || init.v.norm_sq() != 0.0)
    throw Error(Errc::ConfigError, "the null_solution case needs zero initial data");
  const double Ed = direction_energy(cfg, spec);
  const double nu0 = nl.nu0();
  const double g1_0 = std::max(1.0, nl.value(0.0)) / std::min(1.0, nu0);
  const double a0 = cfg.age.amplitude.value_or(2.0 * std::sqrt(Ed * g1_0));
  const double L_0 = std::abs(nl.slope(0.0));
  // Gamma2 = g eps^2 in the small-amplitude limit
  const double g = a0 * a0 * L_0 * (8.0 / nu0 + 8.0 / std::sqrt(nu0));
  const double a1 = g > 0.0 ? std::log(a0 * a0 / (Ed * g1_0)) / g : kInf;

  struct Cell {
    Admission adm;
    double R1;
    std::optional<Confinement> conf;
    std::optional<double> T_closed;
    bool small_at_closed;
  };
  const auto& eps = cfg.perturbation.epsilons;
  const std::vector<Cell> cells = detail::parallel_map(eps.size(), [&](std::size_t i) {
    const double R = a0 * eps[i];
    const ConstantsBundle cb = null_solution_constants(nl, R);
    const GammaSet gs = gammas(cb, GammaCase::Regular);
    const State v = perturbed_state(cfg, eps[i]);
    Cell c{admit(eps[i], sobolev_energy(spec, v.u, v.v), hamiltonian(spec, nl, v.u, v.v), nu0 * R * R,
                 kNullEnergyHyp, gs, R, GammaCase::Regular, std::nullopt),
           R, std::nullopt, closed_form(LifespanCase::NullSolution, eps[i], a1), false};
    if (c.T_closed) c.small_at_closed = smallness_lhs(gs, c.adm.E0, *c.T_closed, GammaCase::Regular) < R * R;
    if (c.adm.admissible())
      c.conf = confine(cfg, spec, nl, v, std::min(c.adm.T_guaranteed, cfg.age.max_simulation_time), R);
    return c;
  });

  ExperimentResult r;
  r.experiment = Experiment::Age;
  r.rows.columns = kAgeColumns;
  std::vector<Admission> adm;
  std::vector<double> T_ok, Teps2;
  bool confined = true;
  for (const Cell& c : cells) {
    adm.push_back(c.adm);
    add_age_row(r.rows, c.adm, c.T_closed, c.small_at_closed, c.conf, 2.0 * c.R1, c.R1);
    if (!c.adm.admissible()) continue;
    T_ok.push_back(c.adm.T_guaranteed);
    Teps2.push_back(c.adm.T_guaranteed * c.adm.eps * c.adm.eps);
    confined = confined && c.conf->max_norm <= 2.0 * c.R1;
  }
  if (T_ok.empty()) no_admissible(adm);

  const double lo = *std::min_element(Teps2.begin(), Teps2.end());
  const double hi = *std::max_element(Teps2.begin(), Teps2.end());
  const bool bounded = lo > 0.0 && (std::isinf(lo) || lo >= 0.5 * hi);
  r.verdicts.push_back({"confinement_below_2R1", confined, "every admissible run stays below 2 R1 on [0, T]"});
  r.verdicts.push_back({"guaranteed_time_monotone", nondecreasing(T_ok), "T nondecreasing as epsilon decreases"});
  r.verdicts.push_back({"null_scaling_bounded_below", bounded,
                        "T eps^2 in [" + fmt(lo) + ", " + fmt(hi) + "], limit a1 = " + fmt(a1)});
  r.summary = {{"case", to_string(LifespanCase::NullSolution)},
               {"a0", a0},
               {"a1", a1},
               {"direction_energy", Ed},
               {"epsilon0", std::find_if(adm.begin(), adm.end(), [](const Admission& a) {
                              return a.admissible();
                            })->eps}};
  return r;
}

}  // namespace

ExperimentResult run_age(const ScenarioConfig& cfg) {
  const Spectrum spec = make_spectrum(cfg.spectrum);
  const Nonlinearity nl = make_nonlinearity(cfg.nonlinearity);
  const LifespanCase kind = lifespan_case(cfg);
  if (kind == LifespanCase::NullSolution) return age_null_solution(cfg, spec, nl);

  const Weight w = make_weight(cfg.weight);
  if ((kind == LifespanCase::Analytic && w.family() != WeightFamily::Linear) ||
      (kind == LifespanCase::QuasiAnalytic && w.family() != WeightFamily::QuasiAnalytic))
    throw Error(Errc::ConfigError, std::string("age case ") + std::string(to_string(kind)) +
                                       " needs the matching weight kind");
  const State init = initial_state(cfg);
  (void)direction_energy(cfg, spec);
  const auto& eps = cfg.perturbation.epsilons;
  const std::optional<double> cutoff = cfg.age.cutoff;
  const GammaCase gc = cutoff ? GammaCase::Minimal : GammaCase::Regular;
  std::optional<double> Eu_high;
  if (cutoff)
    Eu_high = sobolev_energy(spec, split(spec, init.u, *cutoff).high, split(spec, init.v, *cutoff).high);

  std::vector<State> perturbed;
  for (double e : eps) perturbed.push_back(perturbed_state(cfg, e));

  // The constants must describe the base solution on the whole interval
  // that is later simulated, so the horizon is grown until it covers it.
  double horizon = std::min(cfg.solver.t_end, cfg.age.max_simulation_time);
  Trajectory base = run(cfg, spec, nl, init, horizon);
  ConstantsBundle cb;
  GammaSet gs;
  std::vector<Admission> adm;
  bool covered = false;
  std::size_t iterations = 0;
  while (iterations < cfg.age.horizon_iterations) {
    ++iterations;
    cb = build_constants(spec, nl, base, cutoff);
    gs = gammas(cb, gc);
    adm.clear();
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const State& v = perturbed[i];
      adm.push_back(admit(eps[i], sobolev_energy(spec, v.u - init.u, v.v - init.v),
                          hamiltonian(spec, nl, v.u, v.v), 2.0 * cb.H0, kEnergyHyp, gs, cb.R1, gc,
                          Eu_high));
    }
    double need = 0.0;
    for (const auto& a : adm)
      if (a.admissible()) need = std::max(need, std::min(a.T_guaranteed, cfg.age.max_simulation_time));
    if (need <= horizon) {
      covered = true;
      break;
    }
    horizon = std::min(1.05 * need, cfg.age.max_simulation_time);
    base = run(cfg, spec, nl, init, horizon);
  }
  if (std::none_of(adm.begin(), adm.end(), [](const Admission& a) { return a.admissible(); }))
    no_admissible(adm);

  double rate = kNaN;
  std::optional<GrowthEnvelope> env;
  if (kind == LifespanCase::FiniteDimensional) {
    rate = gc == GammaCase::Regular ? *gs.gamma2 : gs.gamma2.value_or(*gs.gamma2_lambda);
  } else {
    env = envelope_for(w, calibrate(base, nl, w), cfg.growth.c2_range);
    rate = 12.0 * env->beta;
  }

  struct Cell {
    std::optional<double> T_closed;
    bool small_at_closed = false;
    std::optional<Confinement> conf;
  };
  const std::vector<Cell> cells = detail::parallel_map(eps.size(), [&](std::size_t i) {
    Cell c;
    c.T_closed = closed_form(kind, eps[i], rate);
    if (c.T_closed) {
      const double R1sq = cb.R1 * cb.R1;
      c.small_at_closed = gc == GammaCase::Regular
                              ? smallness_lhs(gs, adm[i].E0, *c.T_closed, gc) < R1sq
                              : smallness_lhs(gs, adm[i].E0, *c.T_closed, gc) < 0.5 * R1sq &&
                                    high_frequency_lhs(gs, *Eu_high, *c.T_closed) < R1sq / 6.0;
    }
    if (adm[i].admissible())
      c.conf = confine(cfg, spec, nl, perturbed[i],
                       std::min(adm[i].T_guaranteed, cfg.age.max_simulation_time), cb.R1);
    return c;
  });

  ExperimentResult r;
  r.experiment = Experiment::Age;
  r.rows.columns = kAgeColumns;
  std::vector<double> T_ok, closed, ratio;
  bool confined = true;
  std::optional<double> eps0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const Cell& c = cells[i];
    add_age_row(r.rows, adm[i], c.T_closed, c.small_at_closed, c.conf, 2.0 * cb.R1, cb.R1);
    if (c.T_closed) closed.push_back(*c.T_closed);
    if (!adm[i].admissible()) continue;
    if (!eps0) eps0 = eps[i];
    T_ok.push_back(adm[i].T_guaranteed);
    ratio.push_back(adm[i].T_guaranteed / std::abs(std::log(eps[i])));
    confined = confined && c.conf->max_norm <= 2.0 * cb.R1;
  }

  r.verdicts.push_back({"constants_cover_horizon", covered,
                        "base horizon " + fmt(horizon) + " after " + std::to_string(iterations) +
                            " iteration(s)"});
  r.verdicts.push_back({"confinement_below_2R1", confined, "every admissible run stays below 2 R1 = " +
                                                               fmt(2.0 * cb.R1) + " on [0, T]"});
  r.verdicts.push_back({"guaranteed_time_monotone", nondecreasing(T_ok), "T nondecreasing as epsilon decreases"});
  if (kind == LifespanCase::FiniteDimensional) {
    Verdict v{"log_scaling", false, ""};
    if (std::isinf(T_ok.back())) {
      v.pass = true;
      v.detail = "guaranteed time is unbounded (Gamma2 = 0)";
    } else if (ratio.size() < 4) {
      v.detail = "fewer than 4 admissible epsilons";
    } else {
      const auto tail = std::span(ratio).last(4);
      const double lo = *std::min_element(tail.begin(), tail.end());
      const double hi = *std::max_element(tail.begin(), tail.end());
      v.pass = lo > 0.0 && hi / lo < 2.0;
      v.detail = "T/|log eps| over the last 4 admissible points in [" + fmt(lo) + ", " + fmt(hi) + "]";
    }
    r.verdicts.push_back(v);
  } else {
    r.verdicts.push_back({"closed_form_monotone", !closed.empty() && nondecreasing(closed),
                          std::to_string(closed.size()) + " epsilons inside the closed-form range"});
  }

  r.extra_tables.emplace_back("constants_ledger", constants_ledger(cb, gs));
  r.summary = {{"case", to_string(kind)},
               {"gamma_case", to_string(gc)},
               {"constants", to_json(cb)},
               {"gammas", to_json(gs)},
               {"rate", rate},
               {"horizon", horizon},
               {"epsilon0", *eps0}};
  if (Eu_high) r.summary["high_frequency_energy"] = *Eu_high;
  if (env) r.summary["envelope"] = to_json(*env);
  return r;
}

// ---------------------------------------------------------------- growth

ExperimentResult run_growth(const ScenarioConfig& cfg) {
  const Spectrum spec = make_spectrum(cfg.spectrum);
  const Nonlinearity nl = make_nonlinearity(cfg.nonlinearity);
  const Weight w = make_weight(cfg.weight);
  if (w.family() != WeightFamily::Linear && w.family() != WeightFamily::QuasiAnalytic)
    throw Error(Errc::ConfigError, "growth needs weight kind linear or quasi_analytic");
  const double t_end = cfg.solver.t_end;
  const Trajectory pilot = run(cfg, spec, nl, initial_state(cfg), t_end);

  Calibration cal = calibrate(pilot, nl, w);
  const Calibration fitted = cal;
  if (cfg.growth.c0) cal.c0 = *cfg.growth.c0;
  if (cfg.growth.c1) cal.c1 = *cfg.growth.c1;
  const GrowthEnvelope env = envelope_for(w, cal, cfg.growth.c2_range);
  const EnvelopeCheck chk = verify_supersolution(env, t_end, cfg.growth.grid);
  const GrowthReport rep = envelope_vs_simulation(pilot, nl, w, env);

  const double t_cmp = std::min(t_end, 0.999 * env.overflow_horizon());
  std::vector<double> cmp_times;
  for (double t : solver_grid(cfg, t_end))
    if (t > 0.0 && t <= t_cmp) cmp_times.push_back(t);
  const ComparisonSolution sol = integrate_comparison(env, t_cmp, cfg.solver.tol, cmp_times);

  ExperimentResult r;
  r.experiment = Experiment::Growth;
  r.rows.columns = {"t", "log_f_phi", "log_comparison", "log_envelope", "margin",
                    "alpha_quarter", "alpha_three_quarters"};
  const double rel = 1e-6;
  bool below_cmp = true;
  double worst_cmp = -kInf;
  for (const GrowthRow& row : rep.rows) {
    const double lc = row.t <= t_cmp ? sol.log_value(row.t) : kNaN;
    r.rows.add_row({row.t, row.log_f_phi, lc, row.log_envelope, row.log_envelope - row.log_f_phi,
                    row.alpha_quarter, row.alpha_three_quarters});
    if (row.t <= t_cmp) {
      const double gap = row.log_f_phi - lc;
      worst_cmp = std::max(worst_cmp, gap);
      if (gap > rel * std::max(1.0, std::abs(lc))) below_cmp = false;
    }
  }
  bool cmp_below_env = true;
  double worst_env = -kInf;
  for (const auto& s : sol.samples) {
    const double cap = env.log_envelope(s.t);
    worst_env = std::max(worst_env, s.log_y - cap);
    if (s.log_y > cap + rel * std::abs(cap)) cmp_below_env = false;
  }
  r.extra_tables.emplace_back("growth_supersolution", envelope_check_table(chk));

  r.verdicts.push_back({"supersolution", chk.pass,
                        "min margin " + fmt(chk.margin) + " on [0, " + fmt(chk.checked_until) + "]"});
  r.verdicts.push_back({"simulation_below_envelope", rep.max_log_ratio <= 0.0,
                        "max log(F / envelope) = " + fmt(rep.max_log_ratio)});
  r.verdicts.push_back({"comparison_below_envelope", cmp_below_env,
                        "max log y - log envelope = " + fmt(worst_env)});
  r.verdicts.push_back({"simulation_below_comparison", below_cmp,
                        "max log F - log y = " + fmt(worst_cmp)});
  r.verdicts.push_back({"alpha_interpolation", rep.alpha_bounds_hold,
                        "worst relative slack " + fmt(rep.worst_alpha_slack)});
  r.summary = {{"envelope", to_json(env)},
               {"calibrated", {{"c0", fitted.c0}, {"c1", fitted.c1}, {"F0", fitted.F0}}},
               {"overflow_horizon", env.overflow_horizon()},
               {"comparison_until", t_cmp},
               {"fitted_B_quarter", rep.fitted_B_quarter},
               {"fitted_B_three_quarters", rep.fitted_B_three_quarters},
               {"max_log_ratio", rep.max_log_ratio}};
  return r;
}

// ---------------------------------------------------------------- simulate

ExperimentResult run_simulate(const ScenarioConfig& cfg) {
  const Spectrum spec = make_spectrum(cfg.spectrum);
  const Nonlinearity nl = make_nonlinearity(cfg.nonlinearity);
  const Trajectory tr = run(cfg, spec, nl, initial_state(cfg), cfg.solver.t_end);
  std::optional<Weight> w;
  if (cfg.weight.kind != WeightFamily::Zero) w = make_weight(cfg.weight);

  ExperimentResult r;
  r.experiment = Experiment::Simulate;
  r.rows = trajectory_table(tr, nl, w, true);
  r.trajectory = trajectory_to_json(tr);
  const double drift = tr.info.hamiltonian_drift.value_or(0.0);
  r.verdicts.push_back({"hamiltonian_drift", drift <= 1e3 * cfg.solver.tol,
                        "relative drift " + fmt(drift) + " at tol " + fmt(cfg.solver.tol)});
  r.summary = {{"accepted_steps", tr.info.accepted_steps},
               {"rejected_steps", tr.info.rejected_steps},
               {"rhs_evals", tr.info.rhs_evals},
               {"hamiltonian_drift", drift}};
  return r;
}

ExperimentResult run_experiment(const ScenarioConfig& cfg) {
  ExperimentResult r;
  switch (cfg.experiment) {
    case Experiment::Lsc: r = run_lsc(cfg); break;
    case Experiment::Age: r = run_age(cfg); break;
    case Experiment::Growth: r = run_growth(cfg); break;
    case Experiment::Simulate: r = run_simulate(cfg); break;
    case Experiment::Verify: r = run_verify(cfg); break;
  }
  Json canon = to_json(cfg);
  canon.erase("output");
  r.metadata = {{"experiment", to_string(cfg.experiment)},
                {"version", library_version()},
                {"seed", cfg.seed},
                {"config_hash", config_hash(cfg)},
                {"config", canon}};
  return r;
}

}  // namespace kirchhoff
