#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "expect_errc.hpp"
#include "kirchhoff/io.hpp"

using namespace kirchhoff;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(-1.5e-300), "-1.5e-300");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  EXPECT_EQ(format_double(NAN), "nan");

  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t bits = rng();
    double x;
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    const std::string s = format_double(x);
    double y = 0;
    std::from_chars(s.data(), s.data() + s.size(), y);
    EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0) << s;
  }
}

TEST(Table, CsvAndJson) {
  Table t;
  t.columns = {"name", "x", "n", "ok"};
  t.add_row({std::string("a,b"), 0.25, std::int64_t{3}, true});
  t.add_row({std::string("plain"), INFINITY, std::int64_t{-1}, false});
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "name,x,n,ok\n\"a,b\",0.25,3,true\nplain,inf,-1,false\n");

  const Json j = table_to_json(t);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["x"].get<double>(), 0.25);
  EXPECT_EQ(j[0]["n"].get<int>(), 3);
  EXPECT_EQ(j[1]["x"].get<std::string>(), "inf");
  EXPECT_EQ(j[1]["ok"].get<bool>(), false);

  EXPECT_EQ(code_of([&] { t.add_row({1.0}); }), Errc::LengthMismatch);
}

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("csv"), OutputFormat::Csv);
  EXPECT_EQ(parse_format("json"), OutputFormat::Json);
  EXPECT_EQ(code_of([] { (void)parse_format("xml"); }), Errc::ConfigError);
}

TEST(WriteFile, CreatesDirectories) {
  const auto dir = std::filesystem::temp_directory_path() / "kirchhoff_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_file(dir / "out.txt", "hello\n");
  std::ifstream in(dir / "out.txt");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "hello");
  std::filesystem::remove_all(dir.parent_path());
}

TEST(TrajectoryJson, BitExactRoundTrip) {
  const Spectrum spec = Spectrum::square_root(5);
  const Nonlinearity nl = Nonlinearity::affine(1.0, 0.5);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  ModeVector u(5), v(5);
  for (std::size_t k = 0; k < 5; ++k) u[k] = d(rng), v[k] = d(rng);
  const std::vector<double> grid = uniform_grid(0.0, 7.0, 13);
  const Trajectory tr = evolve_kirchhoff(spec, nl, {0.0, u, v}, 7.0, 1e-9, grid);

  const std::string text = trajectory_to_json(tr).dump();
  const Trajectory back = trajectory_from_json(Json::parse(text));
  EXPECT_TRUE(back == tr);
  EXPECT_EQ(trajectory_to_json(back).dump(), text);

  EXPECT_EQ(code_of([] { (void)trajectory_from_json(Json::parse("{\"spectrum\":[1]}")); }),
            Errc::IoError);
}

TEST(TrajectoryTable, ColumnsAndGridFilter) {
  const Spectrum spec({1.0, 2.0});
  const Nonlinearity nl = Nonlinearity::constant(1.0);
  const std::vector<double> grid = uniform_grid(0.0, 2.0, 4);
  const Trajectory tr =
      evolve_kirchhoff(spec, nl, {0.0, ModeVector({1.0, 0.0}), ModeVector({0.0, 0.0})}, 2.0, 1e-10,
                       grid);
  const Table all = trajectory_table(tr, nl, Weight::linear(1.0));
  EXPECT_EQ(all.columns, (std::vector<std::string>{"t", "u_1", "u_2", "v_1", "v_2", "H", "E", "F_phi"}));
  EXPECT_EQ(all.rows.size(), tr.samples.size());
  const Table g = trajectory_table(tr, nl, std::nullopt, true);
  ASSERT_EQ(g.rows.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(std::get<double>(g.rows[i][0]), grid[i]);
  // u_1 = cos t and H = v^2 + lambda^2 u^2 = 1
  EXPECT_NEAR(std::get<double>(g.rows[2][1]), std::cos(1.0), 1e-8);
  EXPECT_NEAR(std::get<double>(g.rows[2][5]), 1.0, 1e-8);
}
