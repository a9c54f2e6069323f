// qdecay: tables, sweeps and checks for resonance survival amplitudes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qdecay/io/format.hpp"
#include "qdecay/io/json_input.hpp"
#include "qdecay/io/sweep.hpp"
#include "qdecay/io/tables.hpp"
#include "qdecay/qdecay.hpp"

#ifndef QDECAY_CATALOG_PATH
#define QDECAY_CATALOG_PATH "data/catalog.json"
#endif

namespace {

using qdecay::io::format_double;

struct ResonanceFlags {
  std::optional<double> xr;
  std::optional<double> epsilon;
  std::optional<double> gamma;

  void add(CLI::App* app) {
    app->add_option("--xr", xr, "x_r = Gamma/(2 eps)");
    app->add_option("--epsilon", epsilon, "resonance energy eps_r (default 1 with --xr)");
    app->add_option("--gamma", gamma, "resonance width Gamma_r");
  }

  bool given() const { return xr || gamma; }

  qdecay::ResonanceSpec spec() const {
    if (xr && gamma) throw CLI::ValidationError("--xr and --gamma are mutually exclusive");
    if (xr) return qdecay::make_isolated_xr(*xr, epsilon.value_or(1.0));
    if (gamma) return qdecay::make_isolated(epsilon.value_or(1.0), *gamma);
    throw CLI::ValidationError("give --xr, or --gamma (with optional --epsilon)");
  }
};

// Writes to --out when given, else to stdout.
template <class Fn>
void emit(const std::string& path, Fn write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
}

std::string optional_text(const std::optional<double>& v) {
  return v ? format_double(*v) : "nan";
}

void table1(const std::string& format, const std::string& out_path) {
  const auto rows = qdecay::io::table1_rows();
  qdecay::io::SweepTable table;
  table.metadata = {{"qdecay", qdecay::io::kArtifactVersion}, {"table", "critical times vs x_r"}};
  table.columns = {"x_r", "tau_c", "tau_fit", "tau_bw"};
  for (const auto& r : rows)
    table.rows.push_back({r.x_r, r.tau_c, r.tau_fit,
                          r.tau_bw.value_or(std::numeric_limits<double>::quiet_NaN())});
  emit(out_path, [&](std::ostream& os) {
    if (format == "text") {
      char line[128];
      std::snprintf(line, sizeof line, "%6s %12s %12s %12s\n", "x_r", "tau_c", "tau_fit", "tau_bw");
      os << line;
      for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%6.1f %12.6f %12.6f %12.6f\n", r.x_r, r.tau_c,
                      r.tau_fit, r.tau_bw.value_or(std::numeric_limits<double>::quiet_NaN()));
        os << line;
      }
    } else {
      qdecay::io::write_table(table, qdecay::io::parse_output_format(format), os);
    }
  });
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void table2(const std::string& catalog_path, const std::string& format,
            const std::string& out_path) {
  const auto rows = qdecay::io::table2_rows(qdecay::io::load_catalog(catalog_path));
  emit(out_path, [&](std::ostream& os) {
    if (format == "json") {
      nlohmann::json doc = nlohmann::json::array();
      for (const auto& r : rows)
        doc.push_back({{"name", r.entry.name},
                       {"process", r.entry.process},
                       {"lifetime_value", r.entry.lifetime_value},
                       {"lifetime_unit", qdecay::io::to_string(r.entry.lifetime_unit)},
                       {"x_r", r.entry.x_r},
                       {"tau_c", r.tau_c},
                       {"half_lives_measured", r.entry.half_lives_measured}});
      os << doc.dump(1) << '\n';
      return;
    }
    if (format == "csv") {
      os << "# qdecay: " << qdecay::io::kArtifactVersion << "\n# catalog: " << catalog_path << '\n';
      os << "name,process,lifetime,x_r,tau_c,half_lives_measured\n";
      for (const auto& r : rows) {
        std::string halves;
        for (double h : r.entry.half_lives_measured) halves += (halves.empty() ? "" : ";") + format_double(h);
        os << csv_quote(r.entry.name) << ',' << csv_quote(r.entry.process) << ','
           << format_double(r.entry.lifetime_value) << ' '
           << qdecay::io::unit_symbol(r.entry.lifetime_unit) << ',' << format_double(r.entry.x_r)
           << ',' << format_double(r.tau_c) << ',' << halves << '\n';
      }
      return;
    }
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-40s %-14s %-10s %10s  %s\n", "name", "process",
                  "lifetime", "x_r", "tau_c", "half-lives measured");
    os << line;
    for (const auto& r : rows) {
      std::string halves;
      for (double h : r.entry.half_lives_measured) halves += (halves.empty() ? "" : ", ") + format_double(h);
      const std::string lifetime =
          format_double(r.entry.lifetime_value) + " " + qdecay::io::unit_symbol(r.entry.lifetime_unit);
      std::snprintf(line, sizeof line, "%-12s %-40s %-14s %-10.2g %10.4f  %s\n", r.entry.name.c_str(),
                    r.entry.process.c_str(), lifetime.c_str(), r.entry.x_r, r.tau_c, halves.c_str());
      os << line;
    }
  });
}

void critical(const ResonanceFlags& flags, std::optional<double> c) {
  if (c) {
    if (flags.given()) throw CLI::ValidationError("--c cannot be combined with resonance flags");
    const qdecay::CrossingRoots roots = qdecay::crossing_roots(*c);
    std::cout << "C        " << format_double(*c) << '\n'
              << "crossing " << qdecay::to_string(roots.crossing) << '\n'
              << "tau_c1   " << optional_text(roots.tau_c1) << '\n'
              << "tau_c2   " << optional_text(roots.tau_c2) << '\n';
    return;
  }
  const qdecay::ResonanceSpec spec = flags.spec();
  const qdecay::CriticalTimeReport r = qdecay::critical_roots(spec);
  std::cout << "x_r      " << format_double(spec.x_r) << '\n'
            << "R        " << format_double(r.ratio_R) << '\n'
            << "C        " << format_double(r.C) << '\n'
            << "crossing " << qdecay::to_string(r.crossing) << '\n'
            << "tau_c1   " << optional_text(r.tau_c1) << '\n'
            << "tau_c2   " << optional_text(r.tau_c2) << '\n'
            << "tau_c    " << format_double(r.tau_lambert) << "  (Lambert W_-1)\n"
            << "tau_fit  " << format_double(r.tau_fit) << '\n'
            << "tau_bw   " << optional_text(r.tau_bw) << '\n';
  if (r.below_ratio_floor)
    std::cout << "note     R < 0.3: no transition time is expected; tau_c is formal\n";
}

int validate(const std::string& path, double tolerance) {
  const qdecay::io::ExpansionFile file = qdecay::io::load_expansion(path);
  const qdecay::ValidationReport report = qdecay::validate_expansion(file.expansion, tolerance);
  std::cout << "poles                 " << file.expansion.size() << '\n'
            << "|Re sum gamma - 1|    " << format_double(report.re_sum_residual) << '\n'
            << "|Im sum gamma/k|      " << format_double(report.im_ratio_residual) << '\n'
            << "tolerance             " << format_double(report.tolerance) << '\n';
  const qdecay::SMatrixModel model = file.model();
  for (std::size_t n = 0; n < file.expansion.size(); ++n) {
    try {
      const qdecay::complex ratio = qdecay::approximation_ratio(model, n);
      std::cout << "residue ratio " << n << "       " << format_double(ratio.real()) << " "
                << format_double(ratio.imag()) << "i\n";
    } catch (const std::exception& e) {
      std::cout << "residue ratio " << n << "       unavailable: " << e.what() << '\n';
    }
  }
  std::cout << (report.passed ? "valid\n" : "INVALID\n");
  return report.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Survival amplitudes, critical times and modulation of decaying states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qdecay::io::kArtifactVersion));

  std::string format = "text";
  std::string out_path;
  auto* t1 = app.add_subcommand("table1", "critical times for x_r = 0.1 ... 1.0");
  t1->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  t1->add_option("--out", out_path, "output file (default stdout)");

  std::string catalog_path = QDECAY_CATALOG_PATH;
  auto* t2 = app.add_subcommand("table2", "critical times of measured decays");
  t2->add_option("--catalog", catalog_path, "catalog JSON file");
  t2->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  t2->add_option("--out", out_path, "output file (default stdout)");

  ResonanceFlags sweep_flags;
  std::string mode = "survival";
  std::string expansion_path;
  std::string sweep_format = "csv";
  double grid_min = 0.01, grid_max = 100.0;
  std::size_t grid_count = 200;
  bool grid_log = false;
  bool scan_ratio = false;
  auto* sweep = app.add_subcommand("sweep", "sample a quantity on a grid");
  sweep->add_option("--mode", mode, "density, survival, modulation or critical-scan")
      ->check(CLI::IsMember({"density", "survival", "modulation", "critical-scan"}));
  sweep_flags.add(sweep);
  sweep->add_option("--expansion", expansion_path, "pole-expansion JSON instead of one resonance");
  sweep->add_option("--grid-min", grid_min, "first grid point");
  sweep->add_option("--grid-max", grid_max, "last grid point");
  sweep->add_option("--grid-count", grid_count, "number of grid points");
  sweep->add_flag("--log", grid_log, "logarithmic spacing");
  sweep->add_flag("--scan-ratio", scan_ratio, "critical-scan over R = eps/Gamma instead of x_r");
  sweep->add_option("--out", out_path, "output file (default stdout)");
  sweep->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  ResonanceFlags critical_flags;
  std::optional<double> c_value;
  auto* crit = app.add_subcommand("critical", "crossing times of e^-tau and C tau^-3");
  critical_flags.add(crit);
  crit->add_option("--c", c_value, "use this constant C directly");

  double tolerance = qdecay::kDefaultValidationTolerance;
  auto* check = app.add_subcommand("validate", "check a pole-expansion file");
  check->add_option("--expansion", expansion_path, "pole-expansion JSON")->required();
  check->add_option("--tol", tolerance, "constraint tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*t1) {
      table1(format, out_path);
    } else if (*t2) {
      table2(catalog_path, format, out_path);
    } else if (*sweep) {
      qdecay::io::SweepConfig config;
      config.mode = qdecay::io::parse_sweep_mode(mode);
      if (config.mode != qdecay::io::SweepMode::CriticalScan) {
        if (!expansion_path.empty()) {
          if (sweep_flags.given())
            throw CLI::ValidationError("--expansion cannot be combined with resonance flags");
          config.source = qdecay::io::load_expansion(expansion_path).expansion;
        } else {
          config.source = sweep_flags.spec();
        }
      }
      config.grid = {grid_min, grid_max, grid_count,
                     grid_log ? qdecay::Spacing::Log : qdecay::Spacing::Linear};
      config.scan = scan_ratio ? qdecay::io::ScanVariable::Ratio : qdecay::io::ScanVariable::XR;
      config.output_path = out_path;
      config.format = qdecay::io::parse_output_format(sweep_format);
      qdecay::io::write_sweep(config, qdecay::io::run_sweep(config), std::cout);
    } else if (*crit) {
      critical(critical_flags, c_value);
    } else if (*check) {
      return validate(expansion_path, tolerance);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "qdecay: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
