#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdecay/io/format.hpp"
#include "qdecay/io/json_input.hpp"
#include "qdecay/io/sweep.hpp"
#include "qdecay/io/tables.hpp"

namespace io = qdecay::io;
using qdecay::complex;

namespace {

std::string render(const io::SweepTable& table, io::OutputFormat format) {
  std::ostringstream out;
  io::write_table(table, format, out);
  return out.str();
}

std::size_t column(const io::SweepTable& table, const std::string& name) {
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    if (table.columns[i] == name) return i;
  throw std::runtime_error("no column " + name);
}

const char* kTwoPole = R"({
  "poles": [{"re": 1.0, "im": -0.05}, {"re": 1.6, "im": -0.3}],
  "coefficients": [{"re": 0.6, "im": 0.02}, {"re": 0.4, "im": -0.15760598503740647}],
  "range_R": 1.5
})";

}  // namespace

TEST(Format, ShortestRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::pow(10.0, u(rng)) * (i % 2 ? -1 : 1);
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(12.25), "12.25");
  EXPECT_EQ(io::format_double(std::nan("")), "nan");
  EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(ExpansionFile, Parses) {
  const auto f = io::parse_expansion(kTwoPole);
  ASSERT_EQ(f.expansion.size(), 2u);
  EXPECT_EQ(f.range_R, 1.5);
  EXPECT_EQ(f.expansion.poles[1].value(), complex(1.6, -0.3));
  EXPECT_EQ(f.expansion.coefficients[0], complex(0.6, 0.02));
  // round trip through the writer
  const auto back = io::parse_expansion(io::expansion_to_json(f.expansion, f.range_R).dump());
  EXPECT_EQ(back.expansion.poles, f.expansion.poles);
  EXPECT_EQ(back.expansion.coefficients, f.expansion.coefficients);
}

TEST(ExpansionFile, ErrorsNameTheField) {
  auto message = [](const std::string& text) {
    try {
      io::parse_expansion(text, "f.json");
    } catch (const qdecay::parse_error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"poles": []})").find("coefficients"), std::string::npos);
  EXPECT_NE(message(R"({"poles": [{"re": 1, "im": -1}], "coefficients": [{"re": 1}]})")
                .find("coefficients[0]"),
            std::string::npos);
  EXPECT_NE(message(R"({"poles": [{"re": -1, "im": -1}], "coefficients": [{"re": 1, "im": 0}]})")
                .find("poles[0]"),
            std::string::npos);
  EXPECT_NE(message(R"({"poles": [{"re": 1, "im": -1}], "coefficients": []})").find("1 poles but 0"),
            std::string::npos);
  EXPECT_NE(message(R"({"poles": [{"re": "x", "im": -1}], "coefficients": [{"re": 1, "im": 0}]})")
                .find("poles[0].re"),
            std::string::npos);
  EXPECT_NE(message("{\n\"poles\": [,]\n}").find("line 2"), std::string::npos);
}

TEST(Catalog, BundledCatalogLoads) {
  const auto entries = io::load_catalog(QDECAY_CATALOG_PATH);
  ASSERT_EQ(entries.size(), 4u);
  EXPECT_EQ(entries[0].x_r, 1.2e-26);
  EXPECT_EQ(entries[1].half_lives_measured.size(), 2u);
  EXPECT_EQ(entries[1].lifetime_unit, io::LifetimeUnit::Days);
  const auto rows = io::table2_rows(entries);
  const double want[] = {316, 339, 204, 201};
  for (int i = 0; i < 4; ++i) EXPECT_EQ(std::floor(rows[i].tau_c), want[i]);
}

TEST(Catalog, InvariantChecked) {
  const std::string good = R"([{"name": "a", "process": "p", "lifetime_value": 1,
    "lifetime_unit": "seconds", "x_r": 0.1, "half_lives_measured": 3, "tau_c_expected": 21.1}])";
  EXPECT_EQ(io::parse_catalog(good).size(), 1u);
  std::string off = good;
  off.replace(off.find("21.1"), 4, "23.0");
  EXPECT_THROW(io::parse_catalog(off), qdecay::parse_error);
  std::string unit = good;
  unit.replace(unit.find("seconds"), 7, "years");
  EXPECT_THROW(io::parse_catalog(unit), qdecay::parse_error);
  std::string neg = good;
  neg.replace(neg.find("0.1"), 3, "-0.1");
  EXPECT_THROW(io::parse_catalog(neg), qdecay::parse_error);
  try {
    io::parse_catalog(R"([{"name": "b"}])", "cat.json");
    FAIL();
  } catch (const qdecay::parse_error& e) {
    EXPECT_NE(std::string(e.what()).find("cat.json[0] (b)"), std::string::npos);
  }
}

TEST(Tables, TableOneRows) {
  const auto rows = io::table1_rows();
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[1].x_r, 0.2);
  EXPECT_NEAR(rows[1].tau_c, 17.1, 0.05);
  EXPECT_NEAR(rows[1].tau_fit, 17.2, 0.05);
  EXPECT_NEAR(*rows[1].tau_bw, 12.4, 0.05);
  EXPECT_NEAR(rows[8].tau_c, 9.1, 0.05);
  EXPECT_NEAR(rows[8].tau_fit, 9.1, 0.05);
  EXPECT_NEAR(*rows[8].tau_bw, 4.2, 0.05);
  EXPECT_EQ(rows[4].tau_fit, 12.25);
}

TEST(Sweep, SurvivalColumnsFactorize) {
  io::SweepConfig config;
  config.mode = io::SweepMode::Survival;
  config.source = qdecay::make_isolated_xr(0.1);
  config.grid = {0.01, 200.0, 400, qdecay::Spacing::Log};
  const auto table = io::run_sweep(config);
  ASSERT_EQ(table.rows.size(), 400u);
  const auto p = column(table, "P"), pe = column(table, "P_e"), pp = column(table, "P_p"),
             ie = column(table, "I_exact"), rel = column(table, "approx_reliable");
  for (const auto& row : table.rows) {
    EXPECT_NEAR(row[p], row[ie] * (row[pe] + row[pp]), 1e-10 * row[p]);
    EXPECT_EQ(row[rel], row[0] >= 1.0 ? 1.0 : 0.0);
  }
}

TEST(Sweep, DensityNormalizationAtEmissionResolution) {
  const auto spec = qdecay::make_isolated_xr(0.1);
  io::SweepConfig config;
  config.mode = io::SweepMode::Density;
  config.source = spec;
  const double e_max = 1e4;
  config.grid = {1e-8, e_max, 20000, qdecay::Spacing::Log};
  const auto table = io::run_sweep(config);
  double sum = 0;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    sum += 0.5 * (table.rows[i][1] + table.rows[i - 1][1]) * (table.rows[i][0] - table.rows[i - 1][0]);
  // tail: rho ~ -(1/pi) Im(gamma k) E^{-3/2}
  const complex k = spec.k_r.value();
  sum += -(spec.gamma_coef * k).imag() / std::numbers::pi * 2.0 / std::sqrt(e_max);
  EXPECT_NEAR(sum, 1.0, 1e-3);
  for (const auto& row : table.rows) EXPECT_NEAR(row[1], row[2] + row[3], 4e-12 * (std::abs(row[2]) + std::abs(row[3])));
}

TEST(Sweep, CriticalScanOverRatio) {
  io::SweepConfig config;
  config.mode = io::SweepMode::CriticalScan;
  config.scan = io::ScanVariable::Ratio;
  config.grid = {0.05, 10.0, 200, qdecay::Spacing::Log};
  const auto table = io::run_sweep(config);
  const auto tc = column(table, "tau_c"), fit = column(table, "tau_fit"),
             floor = column(table, "below_ratio_floor"), r = column(table, "R");
  bool fit_below = false;
  for (const auto& row : table.rows) {
    EXPECT_GT(row[tc], 5.6426375 - 1e-7);
    EXPECT_EQ(row[floor], row[r] < 0.3 ? 1.0 : 0.0);
    if (row[fit] < row[tc]) fit_below = true;
  }
  EXPECT_TRUE(fit_below);
  // broad resonances have no Breit-Wigner crossing: NaN cells become JSON null
  EXPECT_TRUE(std::isnan(table.rows.front()[column(table, "tau_bw")]));
  EXPECT_NE(render(table, io::OutputFormat::Json).find("null"), std::string::npos);
}

TEST(Sweep, DeterministicAndRoundTrips) {
  io::SweepConfig config;
  config.mode = io::SweepMode::Modulation;
  config.source = qdecay::make_isolated_xr(0.1);
  config.grid = {0.5, 40.0, 150, qdecay::Spacing::Linear};
  const auto a = io::run_sweep(config), b = io::run_sweep(config);
  EXPECT_EQ(render(a, io::OutputFormat::Csv), render(b, io::OutputFormat::Csv));
  EXPECT_EQ(render(a, io::OutputFormat::Json), render(b, io::OutputFormat::Json));

  const auto back = io::parse_sweep_json(render(a, io::OutputFormat::Json));
  EXPECT_EQ(back.columns, a.columns);
  ASSERT_EQ(back.rows.size(), a.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (std::size_t j = 0; j < a.rows[i].size(); ++j) {
      if (std::isnan(a.rows[i][j])) EXPECT_TRUE(std::isnan(back.rows[i][j]));
      else EXPECT_EQ(back.rows[i][j], a.rows[i][j]);
    }
}

TEST(Sweep, CsvLayout) {
  io::SweepConfig config;
  config.mode = io::SweepMode::Density;
  config.source = qdecay::make_isolated_xr(0.3, 2.0);
  config.grid = {0.0, 4.0, 5};
  const std::string csv = render(io::run_sweep(config), io::OutputFormat::Csv);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> header, body;
  while (std::getline(in, line)) (line.rfind("#", 0) == 0 ? header : body).push_back(line);
  EXPECT_EQ(header.front(), std::string("# qdecay: ") + io::kArtifactVersion);
  EXPECT_NE(csv.find("# mode: density"), std::string::npos);
  EXPECT_NE(csv.find("# grid: E in [0, 4], 5 points, linear"), std::string::npos);
  ASSERT_EQ(body.size(), 6u);
  EXPECT_EQ(body[0], "E,rho,rho_bu,correction");
  EXPECT_EQ(body[1], "0,0,0,0");
  // CSV cells parse back exactly
  const auto table = io::run_sweep(config);
  std::istringstream row(body[3]);
  std::string cell;
  for (std::size_t j = 0; std::getline(row, cell, ','); ++j) EXPECT_EQ(std::stod(cell), table.rows[2][j]);
}

TEST(Sweep, ExpansionSource) {
  io::SweepConfig config;
  config.mode = io::SweepMode::Survival;
  config.source = io::parse_expansion(kTwoPole).expansion;
  config.grid = {0.0, 5.0, 6};
  const auto table = io::run_sweep(config);
  EXPECT_EQ(table.columns, (std::vector<std::string>{"t", "re_A", "im_A", "P"}));
  EXPECT_EQ(table.rows.size(), 6u);

  config.mode = io::SweepMode::Modulation;
  EXPECT_THROW(io::run_sweep(config), qdecay::domain_error);
}

TEST(Sweep, ReportsFailingGridPoint) {
  // t = 0 is outside the modulation domain; the error names the index
  io::SweepConfig config;
  config.mode = io::SweepMode::Modulation;
  config.source = qdecay::make_isolated_xr(0.1);
  config.grid = {0.0, 1.0, 3};
  try {
    io::run_sweep(config);
    FAIL();
  } catch (const qdecay::grid_error& e) {
    EXPECT_EQ(e.index(), 0u);
  }
}

TEST(Sweep, ParsesNames) {
  EXPECT_EQ(io::parse_sweep_mode("critical-scan"), io::SweepMode::CriticalScan);
  EXPECT_THROW(io::parse_sweep_mode("bogus"), qdecay::parse_error);
  EXPECT_EQ(io::parse_output_format("json"), io::OutputFormat::Json);
  EXPECT_THROW(io::parse_output_format("xml"), qdecay::parse_error);
}
