#ifndef QDECAY_IO_JSON_INPUT_HPP
#define QDECAY_IO_JSON_INPUT_HPP

// Readers for pole-expansion files and the decay catalog.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdecay/critical.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/poles.hpp"

namespace qdecay::io {

using json = nlohmann::json;

namespace detail {

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw qdecay::parse_error(source + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline const json& field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object()) throw qdecay::parse_error(where + ": expected an object");
  const auto it = object.find(key);
  if (it == object.end())
    throw qdecay::parse_error(where + ": missing field '" + key + "'");
  return *it;
}

inline double number(const json& value, const std::string& where) {
  if (!value.is_number()) throw qdecay::parse_error(where + ": expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw qdecay::parse_error(where + ": not finite");
  return x;
}

inline std::string text(const json& value, const std::string& where) {
  if (!value.is_string()) throw qdecay::parse_error(where + ": expected a string");
  return value.get<std::string>();
}

inline complex complex_number(const json& value, const std::string& where) {
  return {number(field(value, "re", where), where + ".re"),
          number(field(value, "im", where), where + ".im")};
}

inline const json& array(const json& value, const std::string& where) {
  if (!value.is_array()) throw qdecay::parse_error(where + ": expected an array");
  return value;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pole expansions: { "poles": [{"re", "im"}], "coefficients": [{"re", "im"}], "range_R": R }

struct ExpansionFile {
  PoleExpansion expansion;
  double range_R = 0.0;

  SMatrixModel model() const { return {range_R, expansion.poles}; }
};

inline ExpansionFile parse_expansion(const std::string& content,
                                     const std::string& source = "expansion") {
  const json doc = detail::parse_text(content, source);
  const json& poles = detail::array(detail::field(doc, "poles", source), source + ".poles");
  const json& coefs =
      detail::array(detail::field(doc, "coefficients", source), source + ".coefficients");
  if (poles.size() != coefs.size())
    throw qdecay::parse_error(source + ": " + std::to_string(poles.size()) + " poles but " +
                              std::to_string(coefs.size()) + " coefficients");
  if (poles.empty()) throw qdecay::parse_error(source + ": no poles");

  std::vector<MomentumPole> ks;
  std::vector<complex> gs;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const std::string where = source + ".poles[" + std::to_string(i) + "]";
    const complex k = detail::complex_number(poles[i], where);
    try {
      ks.emplace_back(k);
    } catch (const std::exception& e) {
      throw qdecay::parse_error(where + ": " + e.what());
    }
    gs.push_back(detail::complex_number(coefs[i], source + ".coefficients[" + std::to_string(i) + "]"));
  }
  ExpansionFile file{make_expansion(std::move(ks), std::move(gs)), 0.0};
  if (doc.contains("range_R")) file.range_R = detail::number(doc["range_R"], source + ".range_R");
  return file;
}

inline ExpansionFile load_expansion(const std::string& path) {
  return parse_expansion(detail::read_file(path), path);
}

inline json expansion_to_json(const PoleExpansion& expansion, double range_R = 0.0) {
  json doc;
  doc["poles"] = json::array();
  doc["coefficients"] = json::array();
  for (std::size_t p = 0; p < expansion.size(); ++p) {
    const complex k = expansion.poles[p].value();
    const complex g = expansion.coefficients[p];
    doc["poles"].push_back({{"re", k.real()}, {"im", k.imag()}});
    doc["coefficients"].push_back({{"re", g.real()}, {"im", g.imag()}});
  }
  doc["range_R"] = range_R;
  return doc;
}

// ---------------------------------------------------------------------------
// Catalog of measured decays.

enum class LifetimeUnit { Hours, Days, Nanoseconds, Seconds };

inline const char* to_string(LifetimeUnit unit) {
  switch (unit) {
    case LifetimeUnit::Hours: return "hours";
    case LifetimeUnit::Days: return "days";
    case LifetimeUnit::Nanoseconds: return "nanoseconds";
    case LifetimeUnit::Seconds: return "seconds";
  }
  return "?";
}

inline const char* unit_symbol(LifetimeUnit unit) {
  switch (unit) {
    case LifetimeUnit::Hours: return "h";
    case LifetimeUnit::Days: return "d";
    case LifetimeUnit::Nanoseconds: return "ns";
    case LifetimeUnit::Seconds: return "s";
  }
  return "?";
}

struct CatalogEntry {
  std::string name;
  std::string process;
  double lifetime_value;
  LifetimeUnit lifetime_unit;
  double x_r;
  std::vector<double> half_lives_measured;  ///< one value or a pair
  double tau_c_expected;
};

/// Relative agreement required between tau_c_expected and the Lambert-W value.
constexpr double kCatalogTolerance = 0.01;

inline std::vector<CatalogEntry> parse_catalog(const std::string& content,
                                               const std::string& source = "catalog") {
  const json doc = detail::array(detail::parse_text(content, source), source);
  std::vector<CatalogEntry> entries;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& row = doc[i];
    const std::string where = source + "[" + std::to_string(i) + "]";
    CatalogEntry entry;
    entry.name = detail::text(detail::field(row, "name", where), where + ".name");
    const std::string at = where + " (" + entry.name + ")";
    entry.process = detail::text(detail::field(row, "process", at), at + ".process");
    entry.lifetime_value =
        detail::number(detail::field(row, "lifetime_value", at), at + ".lifetime_value");

    const std::string unit =
        detail::text(detail::field(row, "lifetime_unit", at), at + ".lifetime_unit");
    if (unit == "hours") entry.lifetime_unit = LifetimeUnit::Hours;
    else if (unit == "days") entry.lifetime_unit = LifetimeUnit::Days;
    else if (unit == "nanoseconds") entry.lifetime_unit = LifetimeUnit::Nanoseconds;
    else if (unit == "seconds") entry.lifetime_unit = LifetimeUnit::Seconds;
    else throw qdecay::parse_error(at + ".lifetime_unit: unknown unit '" + unit + "'");

    entry.x_r = detail::number(detail::field(row, "x_r", at), at + ".x_r");
    if (!(entry.x_r > 0.0)) throw qdecay::parse_error(at + ".x_r: must be > 0");

    const json& halves = detail::field(row, "half_lives_measured", at);
    if (halves.is_array()) {
      if (halves.empty() || halves.size() > 2)
        throw qdecay::parse_error(at + ".half_lives_measured: expected one or two values");
      for (std::size_t j = 0; j < halves.size(); ++j)
        entry.half_lives_measured.push_back(
            detail::number(halves[j], at + ".half_lives_measured[" + std::to_string(j) + "]"));
    } else {
      entry.half_lives_measured.push_back(detail::number(halves, at + ".half_lives_measured"));
    }

    entry.tau_c_expected =
        detail::number(detail::field(row, "tau_c_expected", at), at + ".tau_c_expected");
    const double computed = critical_time_lambert(make_isolated_xr(entry.x_r));
    if (std::abs(entry.tau_c_expected - computed) > kCatalogTolerance * computed)
      throw qdecay::parse_error(at + ".tau_c_expected: " + std::to_string(entry.tau_c_expected) +
                                " differs from the computed " + std::to_string(computed) +
                                " by more than 1%");
    entries.push_back(std::move(entry));
  }
  return entries;
}

inline std::vector<CatalogEntry> load_catalog(const std::string& path) {
  return parse_catalog(detail::read_file(path), path);
}

}  // namespace qdecay::io

#endif  // QDECAY_IO_JSON_INPUT_HPP
