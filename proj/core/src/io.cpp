#include "kirchhoff/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw Error(Errc::LengthMismatch, "row has " + std::to_string(row.size()) + " cells, table has " +
                                          std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

namespace {

std::string cell_text(const Table::Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
          }
          return q + "\"";
        }
      },
      c);
}

Json cell_json(const Table::Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(v)) return v;
          return format_double(v);
        } else {
          return v;
        }
      },
      c);
}

Json optional_json(const std::optional<double>& x) {
  if (!x) return nullptr;
  if (!std::isfinite(*x)) return format_double(*x);
  return *x;
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

Json table_to_json(const Table& t) {
  Json arr = Json::array();
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw Error(Errc::ConfigError, "unknown output format '" + s + "' (expected csv or json)");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(Errc::IoError, "write to " + path.string() + " failed");
}

Json trajectory_to_json(const Trajectory& traj) {
  Json j;
  j["spectrum"] = traj.spectrum.values();
  j["info"] = {{"tol", traj.info.tol},
               {"accepted_steps", traj.info.accepted_steps},
               {"rejected_steps", traj.info.rejected_steps},
               {"rhs_evals", traj.info.rhs_evals},
               {"hamiltonian_drift", optional_json(traj.info.hamiltonian_drift)}};
  Json samples = Json::array();
  for (const auto& s : traj.samples) {
    samples.push_back({{"t", s.t},
                       {"u", s.u.values()},
                       {"v", s.v.values()},
                       {"a", s.a.values()},
                       {"on_grid", s.on_grid}});
  }
  j["samples"] = std::move(samples);
  return j;
}

Trajectory trajectory_from_json(const Json& j) {
  try {
    Trajectory traj{Spectrum(j.at("spectrum").get<std::vector<double>>()), {}, {}};
    const Json& info = j.at("info");
    traj.info.tol = info.at("tol").get<double>();
    traj.info.accepted_steps = info.at("accepted_steps").get<std::size_t>();
    traj.info.rejected_steps = info.at("rejected_steps").get<std::size_t>();
    traj.info.rhs_evals = info.at("rhs_evals").get<std::size_t>();
    if (!info.at("hamiltonian_drift").is_null())
      traj.info.hamiltonian_drift = info.at("hamiltonian_drift").get<double>();
    for (const Json& s : j.at("samples")) {
      TrajectorySample ts;
      ts.t = s.at("t").get<double>();
      ts.u = ModeVector(s.at("u").get<std::vector<double>>());
      ts.v = ModeVector(s.at("v").get<std::vector<double>>());
      ts.a = ModeVector(s.at("a").get<std::vector<double>>());
      ts.on_grid = s.at("on_grid").get<bool>();
      require_same_length(traj.spectrum, ts.u);
      require_same_length(traj.spectrum, ts.v);
      require_same_length(traj.spectrum, ts.a);
      traj.samples.push_back(std::move(ts));
    }
    return traj;
  } catch (const Json::exception& e) {
    throw Error(Errc::IoError, std::string("malformed trajectory JSON: ") + e.what());
  }
}

Table trajectory_table(const Trajectory& traj, const Nonlinearity& nl,
                       const std::optional<Weight>& weight, bool grid_only) {
  const Spectrum& spec = traj.spectrum;
  const std::size_t n = spec.size();
  Table t;
  t.columns.push_back("t");
  for (std::size_t k = 1; k <= n; ++k) t.columns.push_back("u_" + std::to_string(k));
  for (std::size_t k = 1; k <= n; ++k) t.columns.push_back("v_" + std::to_string(k));
  t.columns.push_back("H");
  t.columns.push_back("E");
  if (weight) t.columns.push_back("F_phi");
  for (const auto& s : traj.samples) {
    if (grid_only && !s.on_grid && &s != &traj.samples.front()) continue;
    std::vector<Table::Cell> row;
    row.reserve(t.columns.size());
    row.emplace_back(s.t);
    for (double x : s.u) row.emplace_back(x);
    for (double x : s.v) row.emplace_back(x);
    row.emplace_back(hamiltonian(spec, nl, s.u, s.v));
    row.emplace_back(sobolev_energy(spec, s.u, s.v));
    if (weight) row.emplace_back(corrected_phi_energy(spec, nl, s.u, s.v, *weight));
    t.add_row(std::move(row));
  }
  return t;
}

Json to_json(const ConstantsBundle& cb) {
  return {{"nu0", cb.nu0},
          {"H0", cb.H0},
          {"R0", cb.R0},
          {"C0", cb.C0},
          {"L0", cb.L0},
          {"R1", cb.R1},
          {"R2", optional_json(cb.R2)},
          {"R2_lambda", optional_json(cb.R2_lambda)},
          {"lambda", optional_json(cb.lambda)}};
}

Json to_json(const GammaSet& gs) {
  return {{"gamma1", optional_json(gs.gamma1)},
          {"gamma2", optional_json(gs.gamma2)},
          {"gamma1_lambda", optional_json(gs.gamma1_lambda)},
          {"gamma2_lambda", optional_json(gs.gamma2_lambda)},
          {"gamma3", optional_json(gs.gamma3)},
          {"gamma4", optional_json(gs.gamma4)}};
}

Json to_json(const LifespanEstimate& le) {
  return {{"case", std::string(to_string(le.kind))},
          {"epsilon", le.epsilon},
          {"lower_bound", optional_json(le.lower_bound)},
          {"rate", le.rate}};
}

Json to_json(const GrowthEnvelope& env) {
  return {{"family", std::string(to_string(env.family))},
          {"c0", env.c0},
          {"c1", env.c1},
          {env.family == EnvelopeFamily::Analytic ? "r0" : "c2", env.param},
          {"beta", env.beta},
          {"F0", env.F0}};
}

Table envelope_check_table(const EnvelopeCheck& chk) {
  Table t;
  t.columns = {"t", "envelope_rate", "required_rate", "margin"};
  for (std::size_t i = 0; i < chk.grid.size(); ++i)
    t.add_row({chk.grid[i], chk.envelope_rate[i], chk.required_rate[i],
               chk.envelope_rate[i] - chk.required_rate[i]});
  return t;
}

}  // namespace kirchhoff
