#ifndef QDECAY_IO_SWEEP_HPP
#define QDECAY_IO_SWEEP_HPP

// Grid sweeps of the library quantities and their CSV / JSON serialization.

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qdecay/critical.hpp"
#include "qdecay/density.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/grid.hpp"
#include "qdecay/io/format.hpp"
#include "qdecay/modulation.hpp"
#include "qdecay/poles.hpp"
#include "qdecay/survival.hpp"

namespace qdecay::io {

enum class SweepMode { Density, Survival, Modulation, CriticalScan };
enum class OutputFormat { Csv, Json };
/// Abscissa of a critical-scan: x_r = Gamma/(2 eps) or R = eps/Gamma.
enum class ScanVariable { XR, Ratio };

inline const char* to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::Density: return "density";
    case SweepMode::Survival: return "survival";
    case SweepMode::Modulation: return "modulation";
    case SweepMode::CriticalScan: return "critical-scan";
  }
  return "?";
}

inline SweepMode parse_sweep_mode(const std::string& name) {
  if (name == "density") return SweepMode::Density;
  if (name == "survival") return SweepMode::Survival;
  if (name == "modulation") return SweepMode::Modulation;
  if (name == "critical-scan") return SweepMode::CriticalScan;
  throw qdecay::parse_error("unknown sweep mode '" + name + "'");
}

inline OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw qdecay::parse_error("unknown output format '" + name + "' (expected csv or json)");
}

struct SweepConfig {
  SweepMode mode = SweepMode::Survival;
  std::variant<ResonanceSpec, PoleExpansion> source = make_isolated_xr(0.1);
  Grid grid;
  ScanVariable scan = ScanVariable::XR;
  std::string output_path;  ///< empty: standard output
  OutputFormat format = OutputFormat::Csv;
};

struct SweepTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

namespace detail {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline void describe_source(SweepTable& table, const SweepConfig& config) {
  if (config.mode == SweepMode::CriticalScan) return;
  if (const auto* spec = std::get_if<ResonanceSpec>(&config.source)) {
    table.metadata.emplace_back("source", "isolated");
    table.metadata.emplace_back("epsilon_r", format_double(spec->epsilon_r));
    table.metadata.emplace_back("gamma_r", format_double(spec->gamma_r));
    table.metadata.emplace_back("x_r", format_double(spec->x_r));
  } else {
    const auto& expansion = std::get<PoleExpansion>(config.source);
    table.metadata.emplace_back("source", "expansion");
    for (std::size_t p = 0; p < expansion.size(); ++p) {
      const complex k = expansion.poles[p].value();
      const complex g = expansion.coefficients[p];
      table.metadata.emplace_back("pole_" + std::to_string(p),
                                  "k=" + format_double(k.real()) + "," + format_double(k.imag()) +
                                      " gamma=" + format_double(g.real()) + "," +
                                      format_double(g.imag()));
    }
  }
}

inline const ResonanceSpec& require_isolated(const SweepConfig& config) {
  const auto* spec = std::get_if<ResonanceSpec>(&config.source);
  if (!spec)
    throw qdecay::domain_error(std::string(to_string(config.mode)) +
                               " sweep needs an isolated resonance");
  return *spec;
}

template <class RowFn>
void fill_rows(SweepTable& table, const std::vector<double>& points, RowFn row) {
  table.rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      table.rows.push_back(row(points[i]));
    } catch (const qdecay::grid_error&) {
      throw;
    } catch (const std::exception& e) {
      throw qdecay::grid_error(i, e.what());
    }
  }
}

inline void density_rows(SweepTable& table, const SweepConfig& config,
                         const std::vector<double>& energies) {
  if (const auto* spec = std::get_if<ResonanceSpec>(&config.source)) {
    const PoleExpansion expansion = single_pole(*spec);
    table.columns = {"E", "rho", "rho_bu", "correction"};
    fill_rows(table, energies, [&](double e) {
      return std::vector<double>{e, rho(expansion, e), rho_bu(*spec, e), rho_correction(*spec, e)};
    });
  } else {
    const auto& expansion = std::get<PoleExpansion>(config.source);
    table.columns = {"E", "rho"};
    fill_rows(table, energies,
              [&](double e) { return std::vector<double>{e, rho(expansion, e)}; });
  }
}

inline void survival_rows(SweepTable& table, const SweepConfig& config) {
  if (const auto* spec = std::get_if<ResonanceSpec>(&config.source)) {
    table.columns = {"tau", "re_A",    "im_A",   "P",       "P_e",           "P_p",
                     "I_exact", "I_approx", "P_plus", "P_minus", "approx_reliable"};
    table.metadata.emplace_back(
        "note", "I_approx, P_plus, P_minus are unreliable where approx_reliable = 0 (tau < 1 or x_r > 0.3)");
    const SurvivalSeries series = survival_series(*spec, config.grid);
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
      const SurvivalSample& s = series.samples[i];
      const double p_e = std::norm(s.parts->exponential);
      const double p_p = std::norm(s.parts->power_law);
      double i_exact = kNaN, i_approx = kNaN, plus = kNaN, minus = kNaN;
      try {
        if (s.tau > 0.0) {
          i_exact = qdecay::detail::modulation_ratio(s.parts->exponential, s.parts->power_law);
          i_approx = modulating_approx(*spec, s.tau);
          const EnvelopePair pair = envelopes(*spec, s.tau);
          plus = pair.P_plus;
          minus = pair.P_minus;
        }
      } catch (const std::exception& e) {
        throw qdecay::grid_error(i, e.what());
      }
      table.rows.push_back({s.tau, s.amplitude.real(), s.amplitude.imag(), s.probability, p_e, p_p,
                            i_exact, i_approx, plus, minus,
                            modulation_approx_reliable(*spec, s.tau) ? 1.0 : 0.0});
    }
  } else {
    table.columns = {"t", "re_A", "im_A", "P"};
    const SurvivalSeries series = survival_series(std::get<PoleExpansion>(config.source), config.grid);
    for (const SurvivalSample& s : series.samples)
      table.rows.push_back({s.tau, s.amplitude.real(), s.amplitude.imag(), s.probability});
  }
}

inline void modulation_rows(SweepTable& table, const SweepConfig& config,
                            const std::vector<double>& taus) {
  const ResonanceSpec& spec = require_isolated(config);
  table.columns = {"tau", "I_exact", "I_approx", "I_series", "m",
                   "m_series", "P_plus", "P_minus", "approx_reliable"};
  table.metadata.emplace_back("tau_c", format_double(critical_time_lambert(spec)));
  table.metadata.emplace_back("D", format_double(modulation_d(spec)));
  fill_rows(table, taus, [&](double tau) {
    const ModulationSample s = modulation_sample(spec, tau);
    return std::vector<double>{tau,
                               s.I_exact,
                               s.I_approx,
                               modulating_series(spec, tau),
                               s.m,
                               m_series_envelope(spec, tau),
                               s.envelope_plus,
                               s.envelope_minus,
                               modulation_approx_reliable(spec, tau) ? 1.0 : 0.0};
  });
}

inline void critical_rows(SweepTable& table, const SweepConfig& config,
                          const std::vector<double>& points) {
  table.columns = {"x_r", "R", "tau_c", "tau_fit", "tau_bw", "tau_c1", "below_ratio_floor"};
  fill_rows(table, points, [&](double v) {
    const double x = config.scan == ScanVariable::XR ? v : 1.0 / (2.0 * v);
    const CriticalTimeReport r = critical_roots(make_isolated_xr(x));
    return std::vector<double>{x,
                               r.ratio_R,
                               r.tau_lambert,
                               r.tau_fit,
                               r.tau_bw.value_or(kNaN),
                               r.tau_c1.value_or(kNaN),
                               r.below_ratio_floor ? 1.0 : 0.0};
  });
}

}  // namespace detail

inline SweepTable run_sweep(const SweepConfig& config) {
  const std::vector<double> points = grid_points(config.grid);
  SweepTable table;
  table.metadata.emplace_back("qdecay", kArtifactVersion);
  table.metadata.emplace_back("mode", to_string(config.mode));
  detail::describe_source(table, config);

  std::string variable = "tau";
  if (config.mode == SweepMode::Density) variable = "E";
  if (config.mode == SweepMode::Survival && std::holds_alternative<PoleExpansion>(config.source))
    variable = "t";
  if (config.mode == SweepMode::CriticalScan)
    variable = config.scan == ScanVariable::XR ? "x_r" : "R";
  table.metadata.emplace_back("grid", variable + " in [" + format_double(config.grid.min) + ", " +
                                          format_double(config.grid.max) + "], " +
                                          std::to_string(config.grid.count) + " points, " +
                                          to_string(config.grid.spacing));

  switch (config.mode) {
    case SweepMode::Density: detail::density_rows(table, config, points); break;
    case SweepMode::Survival: detail::survival_rows(table, config); break;
    case SweepMode::Modulation: detail::modulation_rows(table, config, points); break;
    case SweepMode::CriticalScan: detail::critical_rows(table, config, points); break;
  }
  return table;
}

// ---------------------------------------------------------------------------
// Serialization.

inline void write_csv(const SweepTable& table, std::ostream& out) {
  for (const auto& [key, value] : table.metadata) out << "# " << key << ": " << value << '\n';
  out << "# columns:";
  for (const std::string& c : table.columns) out << ' ' << c;
  out << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

inline nlohmann::json sweep_to_json(const SweepTable& table) {
  nlohmann::json doc;
  doc["metadata"] = nlohmann::json::object();
  for (const auto& [key, value] : table.metadata) doc["metadata"][key] = value;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json line = nlohmann::json::array();
    for (double v : row) {
      if (std::isfinite(v)) line.push_back(v);
      else line.push_back(nullptr);
    }
    doc["rows"].push_back(std::move(line));
  }
  return doc;
}

inline void write_json(const SweepTable& table, std::ostream& out) {
  out << sweep_to_json(table).dump(1) << '\n';
}

/// Inverse of write_json; null cells become NaN. Metadata order follows the JSON keys.
inline SweepTable parse_sweep_json(const std::string& content) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw qdecay::parse_error(std::string("sweep: ") + e.what());
  }
  SweepTable table;
  try {
    for (const auto& [key, value] : doc.at("metadata").items())
      table.metadata.emplace_back(key, value.get<std::string>());
    table.columns = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& line : doc.at("rows")) {
      std::vector<double> row;
      for (const auto& v : line) row.push_back(v.is_null() ? detail::kNaN : v.get<double>());
      table.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw qdecay::parse_error(std::string("sweep: ") + e.what());
  }
  return table;
}

inline void write_table(const SweepTable& table, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) write_csv(table, out);
  else write_json(table, out);
}

inline void write_sweep(const SweepConfig& config, const SweepTable& table, std::ostream& fallback) {
  if (config.output_path.empty()) {
    write_table(table, config.format, fallback);
    return;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + config.output_path);
  write_table(table, config.format, out);
  if (!out) throw std::runtime_error("write failed for " + config.output_path);
}

}  // namespace qdecay::io

#endif  // QDECAY_IO_SWEEP_HPP
