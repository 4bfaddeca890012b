#pragma once

#include <array>
#include <vector>

#include "gscat/graph.hpp"

namespace gscat::testing {

// Every graph family of the examples appendix with size parameter N <= 12
// (the bridge Line(0) included).
inline std::vector<FamilySpec> small_families() {
  std::vector<FamilySpec> out;
  for (int n = 0; n <= 12; ++n) out.push_back({Family::Line, n, 0});
  for (int n = 2; n <= 12; ++n) out.push_back({Family::AL, n, 0});
  for (int n = 3; n <= 12; ++n) out.push_back({Family::AC, n, 0});
  for (int n = 3; n <= 12; ++n) out.push_back({Family::AC2, n, 0});
  for (int n = 4; n <= 12; ++n)
    for (int l = 2; l <= n / 2; ++l) out.push_back({Family::Cycle, n, l});
  return out;
}

struct TableRow {
  FamilySpec spec;
  std::array<int, 3> counts;  // n_ev, n_c, n_h
};

inline int ceil_half(int k) { return (k + 1) / 2; }

inline std::vector<TableRow> table_one() {
  std::vector<TableRow> rows;
  for (int n = 0; n <= 12; ++n) rows.push_back({{Family::Line, n, 0}, {0, 0, 2}});
  for (int n = 2; n <= 12; ++n) rows.push_back({{Family::AL, n, 0}, {2, 0, 0}});
  for (int n = 3; n <= 12; ++n) rows.push_back({{Family::AC, n, 0}, {2, ceil_half(n - 2), 0}});
  for (int n = 3; n <= 12; ++n) rows.push_back({{Family::AC2, n, 0}, {2, ceil_half(n - 2), 0}});
  rows.push_back({{Family::Cycle, 4, 2}, {2, 1, 0}});
  rows.push_back({{Family::Cycle, 6, 3}, {2, 2, 2}});
  for (int n = 4; n <= 8; ++n) rows.push_back({{Family::Cycle, 2 * n, n}, {4, n - 1, 0}});
  return rows;
}

// rows whose published counts disagree with a hand calculation at E=+-2
inline bool table_row_disputed(const FamilySpec& s) {
  return s.family == Family::Cycle && ((s.n == 6 && s.l == 3) || (s.n == 8 && s.l == 4));
}

}  // namespace gscat::testing
