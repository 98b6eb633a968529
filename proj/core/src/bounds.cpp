#include "kirchhoff/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SampledMaxima {
  double r1 = 0.0;  // max{|A^{1/4}v|, |A^{3/4}u|}
  double r2 = 0.0;  // |A^{5/4}u|
  double r2_low = 0.0;
};

SampledMaxima sample_maxima(const Spectrum& spec, const Trajectory& traj,
                            std::optional<double> lambda) {
  SampledMaxima out;
  for (const auto& s : traj.samples) {
    const double q = std::max(power_norm_sq(spec, s.v, 0.25), power_norm_sq(spec, s.u, 0.75));
    out.r1 = std::max(out.r1, std::sqrt(q));
    out.r2 = std::max(out.r2, std::sqrt(power_norm_sq(spec, s.u, 1.25)));
    if (lambda) {
      const FrequencySplit parts = split(spec, s.u, *lambda);
      out.r2_low = std::max(out.r2_low, std::sqrt(power_norm_sq(spec, parts.low, 1.25)));
    }
  }
  return out;
}

void check_trajectory(const Trajectory& traj) {
  if (traj.samples.empty()) throw Error(Errc::EmptyTrajectory, "trajectory has no samples");
  if (traj.info.hamiltonian_drift && traj.info.tol > 0.0 &&
      *traj.info.hamiltonian_drift > 1e3 * traj.info.tol)
    throw Error(Errc::DriftExceeded, "reference trajectory drifts by " +
                                         std::to_string(*traj.info.hamiltonian_drift));
}

ConstantsBundle finish(const Nonlinearity& nl, double H0, const SampledMaxima& mx,
                       std::optional<double> lambda) {
  if (lambda && !(*lambda > 0.0)) throw Error(Errc::NonpositiveCutoff, "cutoff must be positive");
  ConstantsBundle cb;
  cb.nu0 = nl.nu0();
  cb.H0 = H0;
  cb.R0 = std::sqrt(2.0 * H0 / cb.nu0);
  cb.C0 = max_coefficient(nl, cb.R0 * cb.R0);
  cb.L0 = max_slope(nl, cb.R0 * cb.R0);
  cb.R1 = kSampleInflation * mx.r1;
  cb.R2 = kSampleInflation * mx.r2;
  if (lambda) {
    cb.lambda = lambda;
    cb.R2_lambda = kSampleInflation * mx.r2_low;
  }
  return cb;
}

double need(const std::optional<double>& x, const char* name) {
  if (!x) throw Error(Errc::MissingField, std::string(name) + " is required for this case");
  return *x;
}

}  // namespace

ConstantsBundle build_constants(const Spectrum& spec, const Nonlinearity& nl,
                                const Trajectory& base, std::optional<double> lambda) {
  check_trajectory(base);
  const auto& s0 = base.front();
  const double H0 = hamiltonian(spec, nl, s0.u, s0.v);
  return finish(nl, H0, sample_maxima(spec, base, lambda), lambda);
}

ConstantsBundle build_pair_constants(const Spectrum& spec, const Nonlinearity& nl,
                                     const Trajectory& u, const Trajectory& v,
                                     std::optional<double> lambda) {
  check_trajectory(u);
  check_trajectory(v);
  const double Hu = hamiltonian(spec, nl, u.front().u, u.front().v);
  const double Hv = hamiltonian(spec, nl, v.front().u, v.front().v);
  SampledMaxima mx = sample_maxima(spec, u, lambda);
  const SampledMaxima mv = sample_maxima(spec, v, std::nullopt);
  mx.r1 = std::max(mx.r1, 0.5 * mv.r1);
  return finish(nl, std::max(Hu, 0.5 * Hv), mx, lambda);
}

ConstantsBundle null_solution_constants(const Nonlinearity& nl, double amplitude) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude))
    throw Error(Errc::InvalidArgument, "amplitude must be positive");
  ConstantsBundle cb;
  cb.nu0 = nl.nu0();
  cb.H0 = 0.0;
  cb.R0 = amplitude;
  cb.C0 = max_coefficient(nl, amplitude * amplitude);
  cb.L0 = max_slope(nl, amplitude * amplitude);
  cb.R1 = amplitude;
  cb.R2 = amplitude;
  return cb;
}

std::string_view to_string(GammaCase c) noexcept {
  return c == GammaCase::Regular ? "regular" : "minimal";
}

GammaSet gammas(const ConstantsBundle& cb, std::optional<GammaCase> required) {
  if (!(cb.nu0 > 0.0)) throw Error(Errc::InvalidArgument, "nu0 must be positive");
  GammaSet gs;
  const double g1 = std::max(1.0, cb.C0) / std::min(1.0, cb.nu0);
  const double g4 = 8.0 * cb.L0 * cb.R1 * cb.R1 / cb.nu0;
  const double sq = std::sqrt(cb.nu0);
  gs.gamma1 = g1;
  gs.gamma3 = 2.0 * g1;
  gs.gamma4 = g4;
  if (cb.R2) gs.gamma2 = g4 + 4.0 * cb.L0 * cb.R0 * (cb.R1 + *cb.R2) / sq;
  if (cb.lambda) {
    const double l = *cb.lambda;
    gs.gamma1_lambda = g1 * std::max(1.0, 1.0 / (l * l));
    if (cb.R2_lambda)
      gs.gamma2_lambda =
          g4 + 2.0 * cb.L0 * (2.0 * cb.R0 + 3.0 * cb.R1) * (2.0 * cb.R1 + *cb.R2_lambda) / sq;
  }
  if (required == GammaCase::Regular) {
    need(cb.R2, "R2");
  } else if (required == GammaCase::Minimal) {
    need(cb.lambda, "lambda");
    need(cb.R2_lambda, "R2_lambda");
  }
  return gs;
}

double smallness_lhs(const GammaSet& gs, double E0, double T, GammaCase c) {
  if (c == GammaCase::Regular)
    return E0 * need(gs.gamma1, "gamma1") * std::exp(need(gs.gamma2, "gamma2") * T);
  return E0 * (need(gs.gamma1_lambda, "gamma1_lambda") *
                   std::exp(need(gs.gamma2_lambda, "gamma2_lambda") * T) +
               2.0 * need(gs.gamma3, "gamma3") * std::exp(need(gs.gamma4, "gamma4") * T));
}

double high_frequency_lhs(const GammaSet& gs, double Eu_high, double T) {
  return Eu_high * need(gs.gamma3, "gamma3") * std::exp(need(gs.gamma4, "gamma4") * T);
}

double guaranteed_time(const GammaSet& gs, double E0, double R1, GammaCase c,
                       std::optional<double> Eu_high) {
  if (!(E0 > 0.0) || !std::isfinite(E0)) throw Error(Errc::InvalidArgument, "E0 must be positive");
  if (!(R1 > 0.0)) throw Error(Errc::InvalidArgument, "R1 must be positive");
  const double r1_sq = R1 * R1;

  if (c == GammaCase::Regular) {
    const double g1 = need(gs.gamma1, "gamma1");
    const double g2 = need(gs.gamma2, "gamma2");
    if (!(g1 * E0 < r1_sq))
      throw Error(Errc::GapTooLarge, "initial gap violates the regular smallness condition at T = 0");
    if (g2 == 0.0) return kInf;
    return std::log(r1_sq / (g1 * E0)) / g2;
  }

  const double eu = need(Eu_high, "high-frequency energy of u");
  const double g3 = need(gs.gamma3, "gamma3");
  const double g4 = need(gs.gamma4, "gamma4");
  if (!(high_frequency_lhs(gs, eu, 0.0) < r1_sq / 6.0))
    throw Error(Errc::LambdaConditionFails, "high-frequency tail of u is too large for this cutoff");
  if (!(smallness_lhs(gs, E0, 0.0, c) < r1_sq / 2.0))
    throw Error(Errc::GapTooLarge, "initial gap violates the minimal smallness condition at T = 0");

  double t_lambda = kInf;
  if (eu > 0.0 && g4 > 0.0) t_lambda = std::log(r1_sq / (6.0 * g3 * eu)) / g4;

  const auto admissible = [&](double T) { return smallness_lhs(gs, E0, T, c) < r1_sq / 2.0; };
  double lo = 0.0;
  double hi = 1.0;
  while (admissible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return t_lambda;
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (admissible(mid) ? lo : hi) = mid;
  }
  return std::min(lo, t_lambda);
}

std::string_view to_string(LifespanCase c) noexcept {
  switch (c) {
    case LifespanCase::FiniteDimensional: return "finite_dimensional";
    case LifespanCase::Analytic: return "analytic";
    case LifespanCase::QuasiAnalytic: return "quasi_analytic";
    case LifespanCase::NullSolution: return "null_solution";
  }
  return "unknown";
}

double natural_epsilon_limit(LifespanCase c) noexcept {
  switch (c) {
    case LifespanCase::Analytic: return std::exp(-1.0);
    case LifespanCase::QuasiAnalytic: return std::exp(-std::exp(1.0));
    default: return 1.0;
  }
}

LifespanEstimate lifespan_lower_bound(LifespanCase c, double epsilon, double rate,
                                      std::optional<double> threshold) {
  const double limit = std::min(threshold.value_or(1.0), natural_epsilon_limit(c));
  if (!(epsilon > 0.0) || !(epsilon < limit))
    throw Error(Errc::EpsilonTooLarge,
                "epsilon " + std::to_string(epsilon) + " is outside (0, " + std::to_string(limit) + ")");
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw Error(Errc::InvalidArgument, "rate constant must be positive and finite");
  const double l = std::abs(std::log(epsilon));
  LifespanEstimate out{c, epsilon, 0.0, rate};
  switch (c) {
    case LifespanCase::FiniteDimensional: out.lower_bound = l / rate; break;
    case LifespanCase::Analytic: out.lower_bound = std::log(l) / rate; break;
    case LifespanCase::QuasiAnalytic: out.lower_bound = std::log(std::log(l)) / rate; break;
    case LifespanCase::NullSolution: out.lower_bound = rate / (epsilon * epsilon); break;
  }
  return out;
}

namespace {

double compute_kb(const Weight& w, double b) {
  const auto log_g = [&](double s) { return b * std::log(s) - 0.5 * w(s); };
  constexpr int kNodes = 4000;
  constexpr int kTail = 100;
  const double log_tail_drop = std::log(1e3);

  for (double top = 8.0; top <= 1e8; top *= 2.0) {
    const double h = top / kNodes;
    std::vector<double> vals(kNodes);
    int best = 0;
    for (int i = 0; i < kNodes; ++i) {
      vals[i] = log_g(h * (i + 1));
      if (vals[i] > vals[best]) best = i;
    }
    bool tail_ok = best < kNodes - kTail;
    for (int i = kNodes - kTail; tail_ok && i < kNodes; ++i)
      tail_ok = vals[i] < vals[i - 1] && vals[i] < vals[best] - log_tail_drop;
    if (!tail_ok) continue;

    // golden section on the two cells around the best node
    double lo = best == 0 ? h * 1e-9 : h * best;
    double hi = h * (best + 2);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = log_g(x1);
    double f2 = log_g(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = log_g(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = log_g(x1);
      }
    }
    return std::exp(std::max({vals[best], f1, f2}));
  }
  throw Error(Errc::InfiniteKb, "s^b exp(-phi(s)/2) is not certified bounded on [0, 1e8]");
}

}  // namespace

double interpolation_constant(const Weight& w, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw Error(Errc::InvalidArgument, "b must be positive");
  if (w.family() == WeightFamily::Zero)
    throw Error(Errc::InfiniteKb, "the zero weight gives an unbounded supremum");
  if (w.family() == WeightFamily::Custom) return compute_kb(w, b);

  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, double> cache;
  const auto key = std::make_tuple(static_cast<int>(w.family()), w.r0(), b);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double kb = compute_kb(w, b);
  std::lock_guard lock(mu);
  cache.emplace(key, kb);
  return kb;
}

InterpolationResult interpolate(std::span<const double> a, std::span<const double> lambdas,
                                double b, const Weight& w) {
  if (a.size() != lambdas.size())
    throw Error(Errc::LengthMismatch, "coefficient and frequency lists differ in length");
  InterpolationResult r;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] >= 0.0) || !(lambdas[k] >= 0.0))
      throw Error(Errc::InvalidArgument, "coefficients and frequencies must be nonnegative");
    r.E += a[k];
    r.F += a[k] * std::max(1.0, lambdas[k]) * std::exp(w(lambdas[k]));
    r.lhs += a[k] * (lambdas[k] == 0.0 ? 0.0 : std::pow(lambdas[k], b));
  }
  if (!(r.E > 0.0)) throw Error(Errc::ZeroE, "sum of coefficients vanishes");
  if (!std::isfinite(r.F)) throw Error(Errc::InvalidArgument, "weighted sum F is not finite");
  r.K_b = interpolation_constant(w, b);
  double log_ratio = std::log(r.F / r.E);
  if (log_ratio < 0.0) {
    r.clamped = true;
    log_ratio = 0.0;
  }
  r.bound = (r.K_b + std::pow(phi_inverse(w, 2.0 * log_ratio), b)) * r.E;
  return r;
}

}  // namespace kirchhoff
