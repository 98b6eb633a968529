#include "kirchhoff/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "kirchhoff/error.hpp"
#include "parallel.hpp"

namespace kirchhoff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// mt19937_64 output mapped to doubles by bit slicing, so draws are the same
/// on every standard library (std::uniform_real_distribution is not).
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double a, double b) {
    return a + (b - a) * static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  std::vector<double> vector(std::size_t n, double scale, double decay = 0.0) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k)
      x[k] = uniform(-scale, scale) / std::pow(static_cast<double>(k + 1), decay);
    return x;
  }

 private:
  std::mt19937_64 rng_;
};

enum SuiteId : std::uint64_t {
  kLinear = 1,
  kRegular,
  kMinimal,
  kInterpolation,
  kEnvelopeAnalytic,
  kEnvelopeQuasi,
  kLocalExistence,
  kTightness
};

/// Per-case result folded into a SuiteRow.
struct CaseOutcome {
  std::size_t violations = 0;
  double worst = 0.0;
  std::string note;  ///< first violation, if any
};

SuiteRow fold(std::string name, std::string statement, std::size_t cases,
              const std::vector<CaseOutcome>& outcomes) {
  SuiteRow row{std::move(name), std::move(statement), cases, 0, outcomes.empty() ? 0.0 : -kInf, ""};
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    row.violations += outcomes[i].violations;
    row.worst = std::max(row.worst, outcomes[i].worst);
    if (row.detail.empty() && !outcomes[i].note.empty())
      row.detail = "case " + std::to_string(i) + ": " + outcomes[i].note;
  }
  if (row.detail.empty()) row.detail = "worst ratio " + format_double(row.worst);
  return row;
}

Nonlinearity random_affine(Draw& d, double slope_lo, double slope_hi) {
  return Nonlinearity::affine(d.uniform(0.5, 2.0), d.uniform(slope_lo, slope_hi));
}

std::vector<double> gaps(const Spectrum& spec, const std::vector<TrajectorySample>& a,
                         const std::vector<TrajectorySample>& b) {
  std::vector<double> g(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) g[i] = sobolev_energy(spec, a[i].u - b[i].u, a[i].v - b[i].v);
  return g;
}

constexpr std::size_t kGrid = 200;

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t suite, std::uint64_t index) {
  // splitmix64 finalizer over a combination of the three inputs
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (suite * 0x100000001ull + index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SuiteRow suite_linear_energy(std::uint64_t seed, std::size_t cases, double tol) {
  constexpr double kSlack = 1e-6, kT = 10.0;
  const auto out = detail::parallel_map(cases, [&](std::size_t i) {
    Draw d(case_seed(seed, kLinear, i));
    const std::size_t n = 1 + d.index(6);
    std::vector<double> lambdas(n);
    for (double& l : lambdas) l = d.uniform(0.2, 4.0);
    std::sort(lambdas.begin(), lambdas.end());
    const Spectrum spec(lambdas);
    const double a = d.uniform(1.0, 3.0), b1 = d.uniform(-0.25, 0.25) * a, b2 = d.uniform(-0.25, 0.25) * a;
    const double w1 = d.uniform(0.2, 3.0), w2 = d.uniform(0.2, 3.0);
    const TimeCoefficient c{[=](double t) { return a + b1 * std::sin(w1 * t) + b2 * std::cos(w2 * t); },
                            a - std::abs(b1) - std::abs(b2), a + std::abs(b1) + std::abs(b2),
                            std::abs(b1) * w1 + std::abs(b2) * w2};
    const State init{0.0, ModeVector(d.vector(n, 1.0)), ModeVector(d.vector(n, 1.0))};
    const Trajectory tr = evolve_linear(spec, c, init, kT, tol, uniform_grid(0.0, kT, kGrid));
    const double gamma = std::max(1.0, c.C0) / std::min(1.0, c.nu0);
    CaseOutcome o;
    for (double alpha : {0.0, 0.25}) {
      const double e0 = alpha_energy(spec, init.u, init.v, alpha);
      for (const auto& s : tr.samples) {
        const double ratio = alpha_energy(spec, s.u, s.v, alpha) / (e0 * gamma * std::exp(c.Lambda0 * s.t / c.nu0));
        o.worst = std::max(o.worst, ratio);
        if (ratio > 1.0 + kSlack) {
          if (!o.violations) o.note = "alpha " + format_double(alpha) + " t " + format_double(s.t);
          ++o.violations;
        }
      }
    }
    return o;
  });
  return fold("linear_energy_bound",
              "E_a(t) <= E_a(0) max{1,C0}/min{1,nu0} exp(Lambda0 t/nu0), a in {0, 1/4}", cases, out);
}

SuiteRow suite_regular_wellposedness(std::uint64_t seed, std::size_t cases, double tol,
                                     double gamma2_scale) {
  constexpr double kSlack = 1e-3, kT = 20.0;
  const std::vector<double> grid = uniform_grid(0.0, kT, kGrid);
  const auto out = detail::parallel_map(cases, [&](std::size_t i) {
    Draw d(case_seed(seed, kRegular, i));
    const Spectrum spec = Spectrum::linear(4);
    const Nonlinearity nl = random_affine(d, 0.2, 1.5);
    const State init{0.0, ModeVector(d.vector(4, 0.5, 1.0)), ModeVector(d.vector(4, 0.5, 1.0))};
    const ModeVector d0(d.vector(4, 1.0)), d1(d.vector(4, 1.0));
    const Trajectory base = evolve_kirchhoff(spec, nl, init, kT, tol, grid);
    const auto gb = grid_samples(base);
    CaseOutcome o;
    for (double eps : {1e-2, 1e-4}) {
      const State v{0.0, init.u + eps * d0, init.v + eps * d1};
      const Trajectory pert = evolve_kirchhoff(spec, nl, v, kT, tol, grid);
      const GammaSet gs = gammas(build_pair_constants(spec, nl, base, pert), GammaCase::Regular);
      const auto g = gaps(spec, gb, grid_samples(pert));
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double bound = *gs.gamma1 * g.front() * std::exp(gamma2_scale * *gs.gamma2 * gb[j].t);
        const double ratio = g[j] / bound;
        o.worst = std::max(o.worst, ratio);
        if (ratio > 1.0 + kSlack) {
          if (!o.violations) o.note = "eps " + format_double(eps) + " t " + format_double(gb[j].t);
          ++o.violations;
        }
      }
    }
    return o;
  });
  return fold("wellposedness_regular", "E_w(t) <= Gamma1 E_w(0) exp(Gamma2 t)", cases, out);
}

SuiteRow suite_minimal_wellposedness(std::uint64_t seed, std::size_t cases, double tol) {
  constexpr double kSlack = 1e-3, kT = 10.0, kEps = 1e-3;
  constexpr std::size_t kModes = 32;
  const std::vector<double> grid = uniform_grid(0.0, kT, kGrid);
  const auto out = detail::parallel_map(cases, [&](std::size_t i) {
    Draw d(case_seed(seed, kMinimal, i));
    const Spectrum spec = Spectrum::linear(kModes);
    const Nonlinearity nl = random_affine(d, 0.2, 1.0);
    const State init{0.0, ModeVector(d.vector(kModes, 0.3, 2.5)), ModeVector(d.vector(kModes, 0.3, 1.5))};
    const State v{0.0, init.u + kEps * ModeVector(d.vector(kModes, 1.0, 2.5)),
                  init.v + kEps * ModeVector(d.vector(kModes, 1.0, 1.5))};
    const Trajectory base = evolve_kirchhoff(spec, nl, init, kT, tol, grid);
    const Trajectory pert = evolve_kirchhoff(spec, nl, v, kT, tol, grid);
    const auto gb = grid_samples(base);
    const auto g = gaps(spec, gb, grid_samples(pert));
    CaseOutcome o;
    std::optional<GammaSet> first;
    for (double cutoff : {2.0, 8.0}) {
      const GammaSet gs = gammas(build_pair_constants(spec, nl, base, pert, cutoff), GammaCase::Minimal);
      const auto high = [&](const State& s) {
        return sobolev_energy(spec, split(spec, s.u, cutoff).high, split(spec, s.v, cutoff).high);
      };
      const double hf = high(init) + high(v);
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double t = gb[j].t;
        const double bound = *gs.gamma1_lambda * g.front() * std::exp(*gs.gamma2_lambda * t) +
                             *gs.gamma3 * hf * std::exp(*gs.gamma4 * t);
        const double ratio = g[j] / bound;
        o.worst = std::max(o.worst, ratio);
        if (ratio > 1.0 + kSlack) {
          if (!o.violations) o.note = "cutoff " + format_double(cutoff) + " t " + format_double(t);
          ++o.violations;
        }
      }
      if (!first) {
        first = gs;
      } else {
        const auto differ = [](double a, double b) { return std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b)); };
        if (differ(*first->gamma3, *gs.gamma3) || differ(*first->gamma4, *gs.gamma4)) {
          if (!o.violations) o.note = "Gamma3/Gamma4 depend on the cutoff";
          ++o.violations;
        }
      }
    }
    return o;
  });
  return fold("wellposedness_minimal",
              "E_w(t) <= Gamma1_l E_w(0) exp(Gamma2_l t) + Gamma3 (E_u^{l,+}(0) + E_v^{l,+}(0)) exp(Gamma4 t)",
              cases, out);
}

SuiteRow suite_interpolation(std::uint64_t seed, std::size_t cases) {
  const std::array<Weight, 4> weights = {Weight::linear(0.5), Weight::linear(1.0), Weight::linear(2.0),
                                         Weight::quasi_analytic()};
  const std::array<double, 4> bs = {0.5, 1.0, 2.0, 3.0};
  // warm the K_b cache before fanning out
  for (const auto& w : weights)
    for (double b : bs) (void)interpolation_constant(w, b);
  std::size_t clamped = 0;
  const auto out = detail::parallel_map(cases, [&](std::size_t i) {
    Draw d(case_seed(seed, kInterpolation, i));
    const std::size_t n = 1 + d.index(64);
    std::vector<double> lambdas(n), a(n);
    for (std::size_t k = 0; k < n; ++k) {
      lambdas[k] = d.uniform(0.0, 20.0);
      a[k] = d.uniform(0.0, 1.0) < 0.2 ? 0.0 : d.uniform(0.0, 1.0);
    }
    if (std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; })) a[0] = 0.5;
    const double b = bs[d.index(bs.size())];
    const Weight& w = weights[d.index(weights.size())];
    const InterpolationResult r = interpolate(a, lambdas, b, w);
    CaseOutcome o;
    o.worst = r.lhs / r.bound;
    if (!r.holds(1e-9)) {
      o.violations = 1;
      o.note = "b " + format_double(b) + " lhs " + format_double(r.lhs) + " bound " + format_double(r.bound);
    }
    return std::pair{o, r.clamped};
  });
  std::vector<CaseOutcome> outcomes;
  for (const auto& [o, c] : out) {
    outcomes.push_back(o);
    clamped += c ? 1 : 0;
  }
  SuiteRow row = fold("interpolation_inequality", "sum a_k l_k^b <= {K_b + [phi^-1(2 log(F/E))]^b} E",
                      cases, outcomes);
  if (row.violations == 0) row.detail += ", " + std::to_string(clamped) + " cases with F < E clamped";
  return row;
}

SuiteRow suite_envelope(std::uint64_t seed, std::size_t draws, EnvelopeFamily family, double c2_range) {
  const bool analytic = family == EnvelopeFamily::Analytic;
  const double c2 = analytic ? 0.0 : inv_phi_majorant_c2(Weight::quasi_analytic(), c2_range);
  constexpr double kRel = 1e-6, kT = 3.0;
  const auto out = detail::parallel_map(draws, [&](std::size_t i) {
    Draw d(case_seed(seed, analytic ? kEnvelopeAnalytic : kEnvelopeQuasi, i));
    const double c0 = d.uniform(0.05, 3.0), c1 = d.uniform(0.05, 3.0);
    const double F0 = c1 * std::exp(d.uniform(0.0, 5.0));
    const GrowthEnvelope env = analytic
                                   ? GrowthEnvelope::analytic(c0, c1, d.uniform(0.05, 3.0), F0)
                                   : GrowthEnvelope::quasi_analytic(c0, c1, c2 * d.uniform(0.5, 3.5), F0);
    CaseOutcome o;
    const EnvelopeCheck chk = verify_supersolution(env, kT);
    if (!chk.pass) {
      ++o.violations;
      o.note = "supersolution margin " + format_double(chk.margin);
    }
    const double t_end = std::min(kT, 0.999 * env.overflow_horizon());
    const ComparisonSolution sol = integrate_comparison(env, t_end, 1e-10);
    o.worst = -kInf;
    for (const auto& s : sol.samples) {
      const double cap = env.log_envelope(s.t);
      o.worst = std::max(o.worst, (s.log_y - cap) / std::abs(cap));
    }
    if (o.worst > kRel) {
      if (!o.violations) o.note = "comparison solution above envelope by " + format_double(o.worst);
      ++o.violations;
    }
    return o;
  });
  SuiteRow row = fold(analytic ? "growth_envelope_analytic" : "growth_envelope_quasi_analytic",
                      analytic ? "Y = F0 exp(exp(beta1 t)) is a supersolution and y <= Y"
                               : "Y = F0 exp(exp(exp(beta2 t))) is a supersolution and y <= Y",
                      draws, out);
  if (row.violations == 0) row.detail = "max relative log excess of y over Y " + format_double(row.worst);
  return row;
}

SuiteRow suite_local_existence(std::uint64_t seed, std::size_t cases, double tol) {
  constexpr double kSlack = 1e-3, kT = 20.0;
  const std::vector<double> grid = uniform_grid(0.0, kT, kGrid);
  const auto out = detail::parallel_map(cases, [&](std::size_t i) {
    Draw d(case_seed(seed, kLocalExistence, i));
    const Spectrum spec = Spectrum::linear(4);
    const Nonlinearity nl = random_affine(d, 0.05, 0.5);
    const State init{0.0, ModeVector(d.vector(4, 0.2, 1.0)), ModeVector(d.vector(4, 0.2, 1.0))};
    const ModeVector d0(d.vector(4, 1.0)), d1(d.vector(4, 1.0));
    const Trajectory base = evolve_kirchhoff(spec, nl, init, kT, tol, grid);
    const ConstantsBundle cb = build_constants(spec, nl, base);
    const GammaSet gs = gammas(cb, GammaCase::Regular);
    CaseOutcome o;

    // shrink eps until the hypotheses hold
    double eps = d.uniform(1e-3, 1e-2);
    double T = -1.0;
    State v;
    for (int tries = 0; tries < 6 && T < 0.0; ++tries, eps *= 0.1) {
      v = State{0.0, init.u + eps * d0, init.v + eps * d1};
      if (hamiltonian(spec, nl, v.u, v.v) > 2.0 * cb.H0) continue;
      try {
        T = std::min(0.999 * guaranteed_time(gs, sobolev_energy(spec, v.u - init.u, v.v - init.v), cb.R1,
                                             GammaCase::Regular),
                     kT);
      } catch (const Error& e) {
        if (e.code() != Errc::GapTooLarge) throw;
      }
    }
    if (T < 0.0) {
      o.violations = 1;
      o.note = "no admissible epsilon found";
      return o;
    }
    const Trajectory pert = evolve_kirchhoff(spec, nl, v, kT, tol, grid);
    const auto gb = grid_samples(base), gp = grid_samples(pert);
    const auto g = gaps(spec, gb, gp);
    for (std::size_t j = 0; j < g.size() && gb[j].t <= T; ++j) {
      const double norm = std::sqrt(std::max(power_norm_sq(spec, gp[j].v, 0.25), power_norm_sq(spec, gp[j].u, 0.75)));
      const double ratio = g[j] / (g.front() * *gs.gamma1 * std::exp(*gs.gamma2 * gb[j].t));
      o.worst = std::max(o.worst, ratio);
      if (ratio > 1.0 + kSlack || norm > 2.0 * cb.R1) {
        if (!o.violations)
          o.note = (norm > 2.0 * cb.R1 ? "left 2 R1 at t " : "energy bound fails at t ") + format_double(gb[j].t);
        ++o.violations;
      }
    }
    return o;
  });
  return fold("local_existence_regular",
              "under the regular hypotheses: |v| <= 2 R1 and E_w(t) <= E_w(0) Gamma1 exp(Gamma2 t) on [0, T]",
              cases, out);
}

SuiteRow suite_guaranteed_time_tightness(std::uint64_t seed, std::size_t cases) {
  std::vector<CaseOutcome> out(cases);
  for (std::size_t i = 0; i < cases; ++i) {
    Draw d(case_seed(seed, kTightness, i));
    GammaSet gs;
    gs.gamma1 = d.uniform(1.0, 5.0);
    gs.gamma2 = d.uniform(0.01, 5.0);
    const double R1 = d.uniform(0.1, 3.0);
    const double E0 = R1 * R1 / *gs.gamma1 * d.uniform(0.001, 0.99);
    const double T = guaranteed_time(gs, E0, R1, GammaCase::Regular);
    const double below = smallness_lhs(gs, E0, 0.999 * T, GammaCase::Regular);
    const double above = smallness_lhs(gs, E0, 1.001 * T, GammaCase::Regular);
    out[i].worst = below / (R1 * R1);
    if (!(below < R1 * R1) || !(above >= R1 * R1)) {
      out[i].violations = 1;
      out[i].note = "T " + format_double(T) + " is not tight";
    }
  }
  return fold("guaranteed_time_tightness", "E0 Gamma1 exp(Gamma2 T) < R1^2 at 0.999 T, >= R1^2 at 1.001 T",
              cases, out);
}

std::vector<SuiteRow> run_suites(const VerifyConfig& vc, std::uint64_t seed, double tol, double c2_range) {
  return {suite_linear_energy(seed, vc.linear_energy_cases, tol),
          suite_regular_wellposedness(seed, vc.regular_cases, tol, vc.gamma2_scale),
          suite_minimal_wellposedness(seed, vc.minimal_cases, tol),
          suite_interpolation(seed, vc.interpolation_cases),
          suite_envelope(seed, vc.envelope_draws, EnvelopeFamily::Analytic, c2_range),
          suite_envelope(seed, vc.envelope_draws, EnvelopeFamily::QuasiAnalytic, c2_range),
          suite_local_existence(seed, vc.local_existence_cases, tol),
          suite_guaranteed_time_tightness(seed, vc.tightness_cases)};
}

ExperimentResult run_verify(const ScenarioConfig& cfg) {
  ExperimentResult r;
  r.experiment = Experiment::Verify;
  r.rows.columns = {"suite", "statement", "cases", "violations", "worst", "pass", "detail"};
  for (const SuiteRow& s : run_suites(cfg.verify, cfg.seed, cfg.solver.tol, cfg.growth.c2_range)) {
    r.rows.add_row({s.name, s.statement, static_cast<std::int64_t>(s.cases),
                    static_cast<std::int64_t>(s.violations), s.worst, s.pass(), s.detail});
    r.verdicts.push_back({s.name, s.pass(), s.detail});
  }
  r.summary = {{"seed", cfg.seed}, {"tol", cfg.solver.tol}, {"gamma2_scale", cfg.verify.gamma2_scale}};
  return r;
}

}  // namespace kirchhoff
