#include "kirchhoff/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

namespace {

// Programmatic JSON stores small literals as signed integers.
bool nonnegative_integer(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::ConfigError, msg); }

/// Walks one JSON object, remembering which keys were read so leftovers can
/// be reported as unknown.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(where() + " must be an object");
  }
  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const Json* v = find(key)) out = as_number(*v, key);
  }
  void number(const std::string& key, std::optional<double>& out) {
    if (const Json* v = find(key)) out = as_number(*v, key);
  }
  void count(const std::string& key, std::size_t& out) {
    if (const Json* v = find(key)) {
      if (!nonnegative_integer(*v)) fail(where(key) + " must be a nonnegative integer");
      out = v->get<std::size_t>();
    }
  }
  void text(const std::string& key, std::optional<std::string>& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) fail(where(key) + " must be a string");
      out = v->get<std::string>();
    }
  }
  void list(const std::string& key, std::vector<double>& out) {
    if (const Json* v = find(key)) {
      if (!v->is_array()) fail(where(key) + " must be an array of numbers");
      out.clear();
      for (const Json& x : *v) out.push_back(as_number(x, key));
    }
  }

  [[nodiscard]] std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  /// Raises ConfigError naming the first key that was never read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail("unknown key '" + where(it.key()) + "'");
  }

 private:
  double as_number(const Json& v, const std::string& key) const {
    if (!v.is_number()) fail(where(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where(key) + " must be finite");
    return x;
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Enum, std::size_t N>
Enum pick(const std::string& what, const std::string& value,
          const std::pair<const char*, Enum> (&table)[N]) {
  std::string choices;
  for (const auto& [name, e] : table) {
    if (value == name) return e;
    choices += (choices.empty() ? "" : "|") + std::string(name);
  }
  fail(what + " must be one of " + choices + ", got '" + value + "'");
}

template <typename Enum, std::size_t N>
const char* name_of(Enum e, const std::pair<const char*, Enum> (&table)[N]) {
  for (const auto& [name, v] : table)
    if (v == e) return name;
  return "?";
}

constexpr std::pair<const char*, Experiment> kExperiments[] = {
    {"lsc", Experiment::Lsc},       {"age", Experiment::Age},
    {"growth", Experiment::Growth}, {"verify", Experiment::Verify},
    {"simulate", Experiment::Simulate}};
constexpr std::pair<const char*, SpectrumKind> kSpectra[] = {
    {"linear", SpectrumKind::Linear},
    {"square_root", SpectrumKind::SquareRoot},
    {"lacunary", SpectrumKind::Lacunary},
    {"explicit", SpectrumKind::Explicit}};
constexpr std::pair<const char*, NonlinearityFamily> kNonlinearities[] = {
    {"constant", NonlinearityFamily::Constant}, {"affine", NonlinearityFamily::Affine}};
constexpr std::pair<const char*, WeightFamily> kWeights[] = {
    {"zero", WeightFamily::Zero},
    {"linear", WeightFamily::Linear},
    {"quasi_analytic", WeightFamily::QuasiAnalytic}};
constexpr std::pair<const char*, LifespanCase> kCases[] = {
    {"finite_dimensional", LifespanCase::FiniteDimensional},
    {"analytic", LifespanCase::Analytic},
    {"quasi_analytic", LifespanCase::QuasiAnalytic},
    {"null_solution", LifespanCase::NullSolution}};
constexpr std::pair<const char*, OutputFormat> kFormats[] = {{"csv", OutputFormat::Csv},
                                                              {"json", OutputFormat::Json}};

template <typename Enum, std::size_t N>
void choice(Section& s, const std::string& key, Enum& out,
            const std::pair<const char*, Enum> (&table)[N]) {
  std::optional<std::string> v;
  s.text(key, v);
  if (v) out = pick(s.where(key), *v, table);
}

void parse_epsilons(Section& s, std::vector<double>& eps) {
  const bool listed = s.has("epsilons"), powered = s.has("epsilon_powers");
  if (listed && powered) fail("perturbation: give either epsilons or epsilon_powers, not both");
  s.list("epsilons", eps);
  if (const Json* p = s.find("epsilon_powers")) {
    Section ps(*p, s.where("epsilon_powers"));
    double base = 2.0;
    std::size_t from = 1, to = 10;
    ps.number("base", base);
    ps.count("from", from);
    ps.count("to", to);
    ps.finish();
    if (!(base > 1.0)) fail(ps.where("base") + " must exceed 1");
    if (to < from) fail(ps.where() + ": 'to' must be at least 'from'");
    eps.clear();
    for (std::size_t k = from; k <= to; ++k) eps.push_back(std::pow(base, -static_cast<double>(k)));
  }
}

void validate(const ScenarioConfig& c) {
  const auto& e = c.perturbation.epsilons;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(e[i] > 0.0 && e[i] < 1.0)) fail("perturbation epsilons must lie in (0, 1)");
    if (i > 0 && !(e[i] < e[i - 1])) fail("perturbation epsilons must be strictly decreasing");
  }
  if (!(c.solver.tol >= 1e-14 && c.solver.tol <= 1e-3)) fail("solver.tol must lie in [1e-14, 1e-3]");
  if (!(c.solver.t_end > 0.0)) fail("solver.t_end must be positive");
  if (c.solver.samples == 0) fail("solver.samples must be positive");
  if (!(c.nonlinearity.nu0 > 0.0)) fail("nonlinearity.nu0 must be positive");
  if (c.nonlinearity.slope < 0.0) fail("nonlinearity.slope must be nonnegative");
  if (c.weight.kind == WeightFamily::Linear && !(c.weight.r0 > 0.0))
    fail("weight.r0 must be positive");
  if (c.spectrum.kind == SpectrumKind::Explicit) {
    if (c.spectrum.values.empty()) fail("spectrum.values is required for an explicit spectrum");
  } else if (c.spectrum.modes == 0) {
    fail("spectrum.modes must be positive");
  }
  if (c.age.cutoff && !(*c.age.cutoff > 0.0)) fail("age.cutoff must be positive");
  if (c.age.amplitude && !(*c.age.amplitude > 0.0)) fail("age.amplitude must be positive");
  if (!(c.age.max_simulation_time > 0.0)) fail("age.max_simulation_time must be positive");
  if (c.age.horizon_iterations == 0) fail("age.horizon_iterations must be positive");
  if (c.growth.c0 && !(*c.growth.c0 > 0.0)) fail("growth.c0 must be positive");
  if (c.growth.c1 && !(*c.growth.c1 > 0.0)) fail("growth.c1 must be positive");
  if (c.growth.grid < 100) fail("growth.grid must be at least 100");
  if (!(c.verify.gamma2_scale >= 0.0)) fail("verify.gamma2_scale must be nonnegative");
  if (!(c.lsc.bound_slack >= 0.0 && c.lsc.monotone_slack >= 0.0 && c.lsc.zero_threshold > 0.0))
    fail("lsc thresholds must be nonnegative");
}

}  // namespace

std::string_view to_string(Experiment e) noexcept { return name_of(e, kExperiments); }

Experiment parse_experiment(std::string_view s) {
  return pick("experiment", std::string(s), kExperiments);
}

ScenarioConfig parse_config(const Json& j) {
  ScenarioConfig c;
  Section top(j, "");
  choice(top, "experiment", c.experiment, kExperiments);
  if (const Json* v = top.find("seed")) {
    if (!nonnegative_integer(*v)) fail("seed must be a nonnegative integer");
    c.seed = v->get<std::uint64_t>();
  }
  if (const Json* v = top.find("spectrum")) {
    Section s(*v, "spectrum");
    choice(s, "kind", c.spectrum.kind, kSpectra);
    s.count("modes", c.spectrum.modes);
    s.list("values", c.spectrum.values);
    s.finish();
    if (c.spectrum.kind != SpectrumKind::Explicit && s.has("values"))
      fail("spectrum.values is only allowed with kind explicit");
  }
  if (const Json* v = top.find("nonlinearity")) {
    Section s(*v, "nonlinearity");
    choice(s, "kind", c.nonlinearity.kind, kNonlinearities);
    s.number("nu0", c.nonlinearity.nu0);
    s.number("slope", c.nonlinearity.slope);
    s.finish();
  }
  if (const Json* v = top.find("weight")) {
    Section s(*v, "weight");
    choice(s, "kind", c.weight.kind, kWeights);
    s.number("r0", c.weight.r0);
    s.finish();
  }
  if (const Json* v = top.find("initial")) {
    Section s(*v, "initial");
    s.list("u0", c.u0);
    s.list("u1", c.u1);
    s.finish();
  }
  if (const Json* v = top.find("perturbation")) {
    Section s(*v, "perturbation");
    s.list("d0", c.perturbation.d0);
    s.list("d1", c.perturbation.d1);
    parse_epsilons(s, c.perturbation.epsilons);
    s.finish();
  }
  if (const Json* v = top.find("solver")) {
    Section s(*v, "solver");
    s.number("tol", c.solver.tol);
    s.number("t_end", c.solver.t_end);
    s.count("samples", c.solver.samples);
    s.finish();
  }
  if (const Json* v = top.find("lsc")) {
    Section s(*v, "lsc");
    s.number("zero_threshold", c.lsc.zero_threshold);
    s.number("bound_slack", c.lsc.bound_slack);
    s.number("monotone_slack", c.lsc.monotone_slack);
    s.finish();
  }
  if (const Json* v = top.find("age")) {
    Section s(*v, "age");
    std::optional<std::string> kind;
    s.text("case", kind);
    if (kind) c.age.lifespan_case = pick(s.where("case"), *kind, kCases);
    s.number("cutoff", c.age.cutoff);
    s.number("amplitude", c.age.amplitude);
    s.number("max_simulation_time", c.age.max_simulation_time);
    s.count("horizon_iterations", c.age.horizon_iterations);
    s.finish();
  }
  if (const Json* v = top.find("growth")) {
    Section s(*v, "growth");
    s.number("c0", c.growth.c0);
    s.number("c1", c.growth.c1);
    s.number("c2_range", c.growth.c2_range);
    s.count("grid", c.growth.grid);
    s.finish();
  }
  if (const Json* v = top.find("verify")) {
    Section s(*v, "verify");
    s.count("linear_energy_cases", c.verify.linear_energy_cases);
    s.count("regular_cases", c.verify.regular_cases);
    s.count("minimal_cases", c.verify.minimal_cases);
    s.count("interpolation_cases", c.verify.interpolation_cases);
    s.count("envelope_draws", c.verify.envelope_draws);
    s.count("local_existence_cases", c.verify.local_existence_cases);
    s.count("tightness_cases", c.verify.tightness_cases);
    s.number("gamma2_scale", c.verify.gamma2_scale);
    s.finish();
  }
  if (const Json* v = top.find("output")) {
    Section s(*v, "output");
    std::optional<std::string> dir;
    s.text("dir", dir);
    if (dir) c.output.dir = *dir;
    choice(s, "format", c.output.format, kFormats);
    s.finish();
  }
  top.finish();
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

Json to_json(const ScenarioConfig& c) {
  Json spectrum = {{"kind", name_of(c.spectrum.kind, kSpectra)}};
  if (c.spectrum.kind == SpectrumKind::Explicit) spectrum["values"] = c.spectrum.values;
  else spectrum["modes"] = c.spectrum.modes;

  Json age = {{"max_simulation_time", c.age.max_simulation_time},
              {"horizon_iterations", c.age.horizon_iterations}};
  if (c.age.lifespan_case) age["case"] = name_of(*c.age.lifespan_case, kCases);
  if (c.age.cutoff) age["cutoff"] = *c.age.cutoff;
  if (c.age.amplitude) age["amplitude"] = *c.age.amplitude;

  Json growth = {{"c2_range", c.growth.c2_range}, {"grid", c.growth.grid}};
  if (c.growth.c0) growth["c0"] = *c.growth.c0;
  if (c.growth.c1) growth["c1"] = *c.growth.c1;

  const VerifyConfig& v = c.verify;
  return {
      {"experiment", name_of(c.experiment, kExperiments)},
      {"seed", c.seed},
      {"spectrum", spectrum},
      {"nonlinearity",
       {{"kind", name_of(c.nonlinearity.kind, kNonlinearities)},
        {"nu0", c.nonlinearity.nu0},
        {"slope", c.nonlinearity.slope}}},
      {"weight", {{"kind", name_of(c.weight.kind, kWeights)}, {"r0", c.weight.r0}}},
      {"initial", {{"u0", c.u0}, {"u1", c.u1}}},
      {"perturbation",
       {{"d0", c.perturbation.d0}, {"d1", c.perturbation.d1}, {"epsilons", c.perturbation.epsilons}}},
      {"solver", {{"tol", c.solver.tol}, {"t_end", c.solver.t_end}, {"samples", c.solver.samples}}},
      {"lsc",
       {{"zero_threshold", c.lsc.zero_threshold},
        {"bound_slack", c.lsc.bound_slack},
        {"monotone_slack", c.lsc.monotone_slack}}},
      {"age", age},
      {"growth", growth},
      {"verify",
       {{"linear_energy_cases", v.linear_energy_cases},
        {"regular_cases", v.regular_cases},
        {"minimal_cases", v.minimal_cases},
        {"interpolation_cases", v.interpolation_cases},
        {"envelope_draws", v.envelope_draws},
        {"local_existence_cases", v.local_existence_cases},
        {"tightness_cases", v.tightness_cases},
        {"gamma2_scale", v.gamma2_scale}}},
      {"output", {{"dir", c.output.dir}, {"format", name_of(c.output.format, kFormats)}}},
  };
}

std::string config_hash(const ScenarioConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  Json j = to_json(c);
  j.erase("output");
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

Spectrum make_spectrum(const SpectrumConfig& c) {
  switch (c.kind) {
    case SpectrumKind::Linear: return Spectrum::linear(c.modes);
    case SpectrumKind::SquareRoot: return Spectrum::square_root(c.modes);
    case SpectrumKind::Lacunary: return Spectrum::lacunary(c.modes);
    case SpectrumKind::Explicit: break;
  }
  return Spectrum(c.values);
}

Nonlinearity make_nonlinearity(const NonlinearityConfig& c) {
  if (c.kind == NonlinearityFamily::Constant) return Nonlinearity::constant(c.nu0);
  return Nonlinearity::affine(c.nu0, c.slope);
}

Weight make_weight(const WeightConfig& c) {
  switch (c.kind) {
    case WeightFamily::Linear: return Weight::linear(c.r0);
    case WeightFamily::QuasiAnalytic: return Weight::quasi_analytic();
    default: return Weight::zero();
  }
}

namespace {

ModeVector coords(const std::vector<double>& x, std::size_t n, const char* name) {
  if (x.empty()) return ModeVector(n);
  if (x.size() != n)
    fail(std::string(name) + " has " + std::to_string(x.size()) + " entries, the spectrum has " +
         std::to_string(n) + " modes");
  return ModeVector(x);
}

std::size_t mode_count(const SpectrumConfig& c) {
  return c.kind == SpectrumKind::Explicit ? c.values.size() : c.modes;
}

}  // namespace

State initial_state(const ScenarioConfig& c) {
  const std::size_t n = mode_count(c.spectrum);
  return {0.0, coords(c.u0, n, "initial.u0"), coords(c.u1, n, "initial.u1")};
}

State perturbed_state(const ScenarioConfig& c, double eps) {
  const std::size_t n = mode_count(c.spectrum);
  State s = initial_state(c);
  s.u += eps * coords(c.perturbation.d0, n, "perturbation.d0");
  s.v += eps * coords(c.perturbation.d1, n, "perturbation.d1");
  return s;
}

}  // namespace kirchhoff
