#ifndef QDECAY_IO_TABLES_HPP
#define QDECAY_IO_TABLES_HPP

#include <optional>
#include <vector>

#include "qdecay/critical.hpp"
#include "qdecay/io/json_input.hpp"

namespace qdecay::io {

struct Table1Row {
  double x_r;
  double tau_c;
  double tau_fit;
  std::optional<double> tau_bw;
};

/// Critical times for x_r = 0.1, 0.2, ..., 1.0.
inline std::vector<Table1Row> table1_rows() {
  std::vector<Table1Row> rows;
  for (int i = 1; i <= 10; ++i) {
    const ResonanceSpec spec = make_isolated_xr(i / 10.0);
    const CriticalTimeReport r = critical_roots(spec);
    rows.push_back({spec.x_r, r.tau_lambert, r.tau_fit, r.tau_bw});
  }
  return rows;
}

struct Table2Row {
  CatalogEntry entry;
  double tau_c;
};

inline std::vector<Table2Row> table2_rows(const std::vector<CatalogEntry>& catalog) {
  std::vector<Table2Row> rows;
  for (const CatalogEntry& e : catalog)
    rows.push_back({e, critical_time_lambert(make_isolated_xr(e.x_r))});
  return rows;
}

}  // namespace qdecay::io

#endif  // QDECAY_IO_TABLES_HPP
