#include <gtest/gtest.h>

#include <cmath>

#include "expect_errc.hpp"
#include "kirchhoff/config.hpp"

using namespace kirchhoff;

namespace {

Json sample() {
  return Json::parse(R"({
    "experiment": "lsc",
    "seed": 7,
    "spectrum": {"kind": "linear", "modes": 4},
    "nonlinearity": {"kind": "affine", "nu0": 1.0, "slope": 1.0},
    "weight": {"kind": "linear", "r0": 0.5},
    "initial": {"u0": [0.3, 0.2, 0.1, 0.05], "u1": [0, 0, 0, 0]},
    "perturbation": {"d0": [1, 0, 0, 0], "d1": [0, 1, 0, 0],
                     "epsilon_powers": {"base": 2, "from": 1, "to": 10}},
    "solver": {"tol": 1e-9, "t_end": 20, "samples": 100}
  })");
}

}  // namespace

TEST(Config, ParsesSampleAndExpandsEpsilons) {
  const ScenarioConfig c = parse_config(sample());
  EXPECT_EQ(c.experiment, Experiment::Lsc);
  EXPECT_EQ(c.seed, 7u);
  ASSERT_EQ(c.perturbation.epsilons.size(), 10u);
  EXPECT_EQ(c.perturbation.epsilons.front(), 0.5);
  EXPECT_EQ(c.perturbation.epsilons.back(), std::ldexp(1.0, -10));
  EXPECT_EQ(make_spectrum(c.spectrum), Spectrum::linear(4));
  EXPECT_EQ(make_weight(c.weight).r0(), 0.5);
  const State p = perturbed_state(c, 0.5);
  EXPECT_EQ(p.u[0], 0.8);
  EXPECT_EQ(p.v[1], 0.5);
}

TEST(Config, DefaultsAndCanonicalRoundTrip) {
  const ScenarioConfig d = parse_config(Json::object());
  EXPECT_EQ(d.experiment, Experiment::Verify);
  EXPECT_EQ(initial_state(d).u, ModeVector(4));
  for (const Json& j : {Json::object(), sample()}) {
    const ScenarioConfig c = parse_config(j);
    const Json canon = to_json(c);
    EXPECT_EQ(to_json(parse_config(canon)), canon);
    EXPECT_EQ(config_hash(parse_config(canon)), config_hash(c));
  }
  EXPECT_NE(config_hash(d), config_hash(parse_config(sample())));
  ScenarioConfig moved = d;
  moved.output.dir = "elsewhere";
  EXPECT_EQ(config_hash(moved), config_hash(d));
  EXPECT_EQ(config_hash(d).size(), 16u);
}

TEST(Config, RejectsUnknownKeysAtEveryLevel) {
  for (const char* path : {"/bogus", "/solver/bogus", "/perturbation/epsilon_powers/bogus"}) {
    Json j = sample();
    j[Json::json_pointer(path)] = 1;
    EXPECT_EQ(code_of([&] { (void)parse_config(j); }), Errc::ConfigError) << path;
  }
}

TEST(Config, RejectsBadValues) {
  auto bad = [](const char* path, Json value) {
    Json j = sample();
    j[Json::json_pointer(path)] = std::move(value);
    return code_of([&] { (void)parse_config(j); });
  };
  EXPECT_EQ(bad("/experiment", "fly"), Errc::ConfigError);
  EXPECT_EQ(bad("/seed", -1), Errc::ConfigError);
  EXPECT_EQ(bad("/solver/tol", "1e-9"), Errc::ConfigError);
  EXPECT_EQ(bad("/solver/samples", 2.5), Errc::ConfigError);
  EXPECT_EQ(bad("/weight/kind", "gevrey"), Errc::ConfigError);
  EXPECT_EQ(bad("/output", Json{{"format", "xml"}}), Errc::ConfigError);
  EXPECT_EQ(bad("/spectrum", Json{{"kind", "linear"}, {"values", {1, 2}}}), Errc::ConfigError);

  Json j = sample();
  j["perturbation"].erase("epsilon_powers");
  j["perturbation"]["epsilons"] = {0.1, 0.1};
  EXPECT_EQ(code_of([&] { (void)parse_config(j); }), Errc::ConfigError);
  j["perturbation"]["epsilons"] = {1.0, 0.5};
  EXPECT_EQ(code_of([&] { (void)parse_config(j); }), Errc::ConfigError);
  j["perturbation"]["epsilons"] = {0.5, 0.25};
  j["perturbation"]["epsilon_powers"] = {{"base", 2}};
  EXPECT_EQ(code_of([&] { (void)parse_config(j); }), Errc::ConfigError);

  Json short_u0 = sample();
  short_u0["initial"]["u0"] = {0.1};
  const ScenarioConfig c = parse_config(short_u0);
  EXPECT_EQ(code_of([&] { (void)initial_state(c); }), Errc::ConfigError);
}

TEST(Config, PerturbationDistanceMatchesEpsilon) {
  // E-distance^2 of the perturbed data equals eps^2 E(d0, d1)
  const ScenarioConfig c = parse_config(sample());
  const Spectrum spec = make_spectrum(c.spectrum);
  const ModeVector d0(c.perturbation.d0), d1(c.perturbation.d1);
  const double Ed = sobolev_energy(spec, d0, d1);
  for (double eps : c.perturbation.epsilons) {
    const State a = initial_state(c), b = perturbed_state(c, eps);
    const double dist = sobolev_energy(spec, b.u - a.u, b.v - a.v);
    EXPECT_NEAR(dist, eps * eps * Ed, 1e-12 * eps * eps * Ed + 1e-30);
  }
}

TEST(Config, LoadMissingFile) {
  EXPECT_EQ(code_of([] { (void)load_config("/nonexistent/x.json"); }), Errc::IoError);
}

TEST(Config, SignedIntegerLiteralsAreAcceptedWhenNonnegative) {
  Json j = sample();
  j["seed"] = 9;
  j["perturbation"]["epsilon_powers"]["from"] = 2;
  const ScenarioConfig c = parse_config(j);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.perturbation.epsilons.size(), 9u);
  j["seed"] = -1;
  EXPECT_EQ(code_of([&] { (void)parse_config(j); }), Errc::ConfigError);
}
