#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "helium/errors.hpp"
#include "helium/harness/config.hpp"
#include "helium/harness/csv.hpp"
#include "helium/harness/runner.hpp"

using namespace helium;
using namespace helium::harness;

namespace {

const char* kDevice = R"(# reference geometry
[device]
a_nm = 10
d_nm = 60
h_nm = 110    # film height
lambda_nm = 600
)";

int error_line(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.line;
  }
  return -1;
}

std::size_t column_index(const ResultSet& rs, const std::string& name) {
  for (std::size_t i = 0; i < rs.columns.size(); ++i)
    if (rs.columns[i].name == name) return i;
  FAIL("missing column " << name);
  return 0;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("parse a device block") {
  const auto spec = parse_config(kDevice);
  REQUIRE(spec.device.has_value());
  CHECK(spec.device->a_nm == 10.0);
  CHECK(spec.device->h_nm == 110.0);
  CHECK(spec.device->eps_r == 1.06);
  CHECK(spec.seed == kDefaultSeed);
  CHECK(kDefaultSeed == 24301);
  CHECK_FALSE(spec.chain.has_value());
}

TEST_CASE("config errors name their line") {
  CHECK(error_line("[device]\na_nm = 10\n[bogus]\n") == 3);
  CHECK(error_line("[device]\na_nm = 10\nwidth = 3\n") == 3);
  CHECK(error_line("[device]\na_nm = 10\na_nm = 11\n") == 3);
  CHECK(error_line("[device]\na_nm = ten\n") == 2);
  CHECK(error_line("[device]\na_nm = -1\n") == 2);
  CHECK(error_line("key = 1\n") == 1);
  CHECK(error_line("[device\n") == 1);
  CHECK(error_line("[chain]\nn = 4\nboundary = twisted\n") == 3);
  CHECK(error_line(std::string(kDevice) + "[device]\n") == 7);
  // Missing required keys point at their section header.
  CHECK(error_line("[device]\na_nm = 10\n") == 1);
  CHECK(error_line("\n[schedule]\nGamma_end_K = 0\n") == 2);
  try {
    (void)parse_config("[device]\na_nm = 10\nwidth = 3\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("line 3:", 0) == 0);
  }
}

TEST_CASE("render and parse round trip") {
  ExperimentSpec s;
  s.kind = ExperimentKind::Sweep;
  s.sweep_base = ExperimentKind::Quench;
  s.seed = 99;
  s.device = DeviceSpec{9.5, 60.0, 50.0, 600.0, 1.057, 0.05, 40};
  s.chain = ChainSpec{};
  s.chain->n = 16;
  s.chain->boundary = ising::Boundary::Periodic;
  s.chain->Gamma_K = 0.1 + 0.2;
  s.chain->J_K = 1.0 / 3.0;
  s.schedule = ScheduleSpec{};
  s.schedule->tauQ = 12.5;
  s.schedule->method = QuenchMethod::Quadratic;
  s.electrodes = ElectrodeSpec{50.0, 2.0, 3.0};
  s.disorder = DisorderSpec{0.01, 0.02, 0.0, 4};
  s.sweep_axes = {{"schedule.tauQ", {"1", "2", "4"}}, {"chain.n", {"8", "16"}}};
  const auto text = render_config(s);
  const auto back = parse_config(text);
  CHECK(back == s);
  CHECK(render_config(back) == text);
}

TEST_CASE("overrides and validation") {
  auto s = parse_config(kDevice);
  set_value(s, "chain.n", "12");
  set_value(s, "chain.Gamma_K", "0.5");
  REQUIRE(s.chain.has_value());
  CHECK(s.chain->n == 12);
  CHECK(*s.chain->Gamma_K == 0.5);
  CHECK_THROWS_AS(set_value(s, "chain.colour", "red"), ConfigError);
  CHECK_THROWS_AS(set_value(s, "nosection", "1"), ConfigError);
  CHECK_THROWS_AS(set_value(s, "chain.n", "0"), ConfigError);

  s.kind = ExperimentKind::Quench;
  CHECK_THROWS_AS(validate(s), ConfigError);
  set_value(s, "schedule.tauQ", "2");
  CHECK_NOTHROW(validate(s));

  ExperimentSpec bare;
  bare.kind = ExperimentKind::Spectrum;
  set_value(bare, "chain.n", "6");
  CHECK_THROWS_AS(validate(bare), ConfigError);  // no couplings and no device
  set_value(bare, "chain.Gamma_K", "1");
  set_value(bare, "chain.J_K", "1");
  CHECK_NOTHROW(validate(bare));
  set_value(bare, "chain.boundary", "periodic");
  set_value(bare, "chain.n", "2");
  CHECK_THROWS_AS(validate(bare), ConfigError);
}

TEST_CASE("number formatting round-trips exactly") {
  for (double x : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, std::nextafter(1.0, 2.0)}) {
    CHECK(parse_number(format_number(x)) == x);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(std::isnan(parse_number(format_number(std::nan("")))));
  CHECK_THROWS_AS(parse_number("1.0x"), InvalidArgument);
  CHECK_THROWS_AS(parse_number(""), InvalidArgument);
  CHECK(parse_integer("+42") == 42);
  CHECK_THROWS_AS(parse_integer("4.2"), InvalidArgument);
}

TEST_CASE("csv quoting and typed round trip") {
  const auto recs = parse_csv("a,b\n\"x,y\",\"say \"\"hi\"\"\"\n1,\"multi\nline\"");
  REQUIRE(recs.size() == 3);
  CHECK(recs[1][0] == "x,y");
  CHECK(recs[1][1] == "say \"hi\"");
  CHECK(recs[2][1] == "multi\nline");
  CHECK_THROWS_AS(parse_csv("\"open"), InvalidArgument);

  ResultSet rs;
  rs.columns = {{"i", ColumnType::Integer}, {"x", ColumnType::Real}, {"note", ColumnType::Text}};
  rs.rows = {{std::int64_t{1}, 0.1, std::string("plain")},
             {std::int64_t{-7}, std::monostate{}, std::string("a, \"b\"")},
             {std::int64_t{3}, 1e-20, std::string()}};
  const auto text = to_csv(rs);
  CHECK(rows_from_csv(text, rs.columns) == rs.rows);
  CHECK_THROWS_AS(rows_from_csv("i,y,note\n", rs.columns), InvalidArgument);
}

TEST_CASE("device run reports the derived parameters") {
  auto s = parse_config(kDevice);
  s.kind = ExperimentKind::Device;
  const auto rs = run_experiment(s);
  CHECK(rs.columns.size() == columns_for(ExperimentKind::Device).size());
  REQUIRE(rs.rows.size() == 1);
  const auto& row = rs.rows[0];
  CHECK(std::get<std::int64_t>(row[column_index(rs, "is_double_well")]) == 0);
  CHECK(std::get<double>(row[column_index(rs, "E0_K")]) == doctest::Approx(1.3914265824927534).epsilon(1e-8));
  CHECK(std::get<double>(row[column_index(rs, "J_K")]) == doctest::Approx(0.1558959270297863).epsilon(1e-9));
  CHECK(std::holds_alternative<std::monostate>(row[column_index(rs, "Gamma_K")]));
  CHECK(std::get<std::int64_t>(row[column_index(rs, "oracle_two_level")]) == 0);
  CHECK(failed_rows(rs) == 0);
}

TEST_CASE("rows that cannot be computed carry an error") {
  auto s = parse_config(std::string(kDevice) + "[chain]\nn = 8\n");
  s.kind = ExperimentKind::Spectrum;
  const auto rs = run_experiment(s);
  REQUIRE(rs.rows.size() == 1);
  CHECK(failed_rows(rs) == 1);
  CHECK_FALSE(std::get<std::string>(rs.rows[0][column_index(rs, "error")]).empty());
}

TEST_CASE("sweep order, seeds and worker independence") {
  const std::string text = R"([run]
kind = sweep
seed = 7

[chain]
n = 6
Gamma_K = 1
J_K = 1

[disorder]
W_Gamma_K = 0.2
W_J_K = 0.1
samples = 2

[sweep]
base = disorder
axis1 = chain.n: 4, 6, 8
axis2 = chain.Gamma_K: 0.5, 1.5
)";
  auto s = parse_config(text);
  CHECK(s.kind == ExperimentKind::Sweep);
  const auto one = run_experiment(s, 1);
  const auto eight = run_experiment(s, 8);
  CHECK(to_csv(one) == to_csv(eight));
  CHECK(to_csv(one) == to_csv(run_experiment(s, 1)));
  REQUIRE(one.rows.size() == 12);
  CHECK(one.columns[1].name == "chain.n");
  CHECK(one.columns[2].name == "chain.Gamma_K");
  const std::string ns[] = {"4", "4", "4", "4", "6", "6", "6", "6", "8", "8", "8", "8"};
  const std::string gs[] = {"0.5", "0.5", "1.5", "1.5"};
  for (std::size_t r = 0; r < 12; ++r) {
    CAPTURE(r);
    CHECK(std::get<std::int64_t>(one.rows[r][0]) == static_cast<std::int64_t>(r / 2));
    CHECK(std::get<std::string>(one.rows[r][1]) == ns[r]);
    CHECK(std::get<std::string>(one.rows[r][2]) == gs[r % 4]);
    CHECK(std::get<std::int64_t>(one.rows[r][column_index(one, "n")]) == std::stoi(ns[r]));
  }
  CHECK(failed_rows(one) == 0);

  auto reseeded = s;
  reseeded.seed = 8;
  CHECK(to_csv(run_experiment(reseeded, 2)) != to_csv(one));
}

TEST_CASE("outputs on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "helium_harness_test";
  std::filesystem::remove_all(dir);
  auto s = parse_config(kDevice);
  s.kind = ExperimentKind::Device;
  const auto rs = run_experiment(s);
  write_outputs(s, rs, dir.string(), 0.5, 1);
  const auto csv = slurp(dir / "results.csv");
  CHECK(csv == to_csv(rs));
  const auto j = nlohmann::json::parse(slurp(dir / "run.json"));
  CHECK(j["seed"] == kDefaultSeed);
  CHECK(j["kind"] == "device");
  CHECK(j["version"] == tool_version());
  CHECK(j["rows"] == 1);
  CHECK(j["columns"].size() == rs.columns.size());
  CHECK(parse_config(j["spec"].get<std::string>()).device == s.device);
  std::filesystem::remove_all(dir);
}

TEST_CASE("device defaults and error messages") {
  const auto spec = parse_config(kDevice);
  CHECK(spec.device->temperature_K == 0.1);
  CHECK(spec.device->n_sites == 100);
  CHECK(spec.device->lambda_nm == 600.0);
  try {
    (void)parse_config("[device]\na_nm = 10\nunknown_key = 3\n");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("unknown_key") != std::string::npos);
  }
}

TEST_CASE("critical spectrum sweep gives a gap of order J/n") {
  const std::string text = R"([run]
kind = sweep

[chain]
n = 64
Gamma_K = 1
J_K = 1

[sweep]
base = spectrum
axis1 = chain.n: 64, 128, 256, 512, 1024
)";
  const auto rs = run_experiment(parse_config(text), 2);
  REQUIRE(rs.rows.size() == 5);
  CHECK(failed_rows(rs) == 0);
  const auto n_col = column_index(rs, "n"), gap_col = column_index(rs, "gap_K");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : rs.rows) {
    const double x = std::log(static_cast<double>(std::get<std::int64_t>(row[n_col])));
    const double y = std::log(std::get<double>(row[gap_col]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (5 * sxy - sx * sy) / (5 * sxx - sx * sx);
  CHECK(std::abs(slope + 1.0) < 0.03);
}

TEST_CASE("film-height sweep: Gamma moves, J does not") {
  const std::string text = R"([run]
kind = sweep

[device]
a_nm = 10
d_nm = 60
h_nm = 50
lambda_nm = 600

[sweep]
base = device
axis1 = device.h_nm: 20, 30, 40, 50, 60, 70, 80, 90, 100, 110
)";
  const auto rs = run_experiment(parse_config(text), 4);
  REQUIRE(rs.rows.size() == 10);
  CHECK(failed_rows(rs) == 0);
  const auto g_col = column_index(rs, "Gamma_K"), j_col = column_index(rs, "J_K");
  const double j0 = std::get<double>(rs.rows[0][j_col]);
  double g_min = std::numeric_limits<double>::infinity(), g_max = 0.0;
  for (const auto& row : rs.rows) {
    CHECK(std::get<double>(row[j_col]) == j0);
    if (const auto* g = std::get_if<double>(&row[g_col])) {
      g_min = std::min(g_min, *g);
      g_max = std::max(g_max, *g);
    }
  }
  // Single-well heights leave Gamma empty; the double-well ones span decades.
  CHECK(std::holds_alternative<std::monostate>(rs.rows.back()[g_col]));
  CHECK(g_max / g_min > 100.0);
}

TEST_CASE("outputs re-parse and the manifest reproduces the run") {
  const std::string text = R"([run]
kind = sweep
seed = 11

[chain]
n = 6
Gamma_K = 0.8
J_K = 1

[disorder]
W_Gamma_K = 0.2
samples = 3

[sweep]
base = disorder
axis1 = chain.n: 5, 7
)";
  const auto spec = parse_config(text);
  const auto before = render_config(spec);
  const auto rs = run_experiment(spec, 2);
  CHECK(render_config(spec) == before);
  CHECK(rows_from_csv(to_csv(rs), rs.columns) == rs.rows);

  const auto dir = std::filesystem::temp_directory_path() / "helium_harness_manifest";
  std::filesystem::remove_all(dir);
  write_outputs(spec, rs, dir.string(), 0.1, 2);
  const auto j = nlohmann::json::parse(slurp(dir / "run.json"));
  const auto echoed = parse_config(j["spec"].get<std::string>());
  CHECK(echoed == spec);
  CHECK(to_csv(run_experiment(echoed, 1)) == slurp(dir / "results.csv"));
  std::filesystem::remove_all(dir);
}
