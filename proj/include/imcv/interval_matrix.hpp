#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imcv/geometry.hpp"

namespace imcv {

struct IntervalEntry {
  std::uint32_t col;
  double lo;
  double hi;

  bool operator==(const IntervalEntry&) const = default;
};

/// Square sparse matrix of probability intervals. An absent entry means
/// lo = hi = 0 (structurally impossible transition); entries with hi = 0 are
/// suppressed on insertion.
class IntervalMatrix {
 public:
  IntervalMatrix() = default;
  explicit IntervalMatrix(std::size_t n) : rows_(n) {}

  std::size_t size() const { return rows_.size(); }
  std::span<const IntervalEntry> row(std::size_t j) const { return rows_[j]; }

  /// Insert or replace an entry; keeps the row sorted by column.
  void set(std::size_t j, std::size_t col, double lo, double hi);
  void clear_row(std::size_t j) { rows_[j].clear(); }
  /// (lo, hi) of an entry, (0, 0) if absent.
  std::pair<double, double> at(std::size_t j, std::size_t col) const;

  double row_lo_sum(std::size_t j) const;
  double row_hi_sum(std::size_t j) const;

  /// Row feasibility: 0 <= lo <= hi <= 1 per entry and
  /// sum lo <= 1 <= sum hi per row, within `tol`. Throws ModelError.
  void validate_feasibility(double tol = 1e-9) const;

  bool operator==(const IntervalMatrix&) const = default;

 private:
  std::vector<std::vector<IntervalEntry>> rows_;
};

/// Interval-valued Markov chain: interval transition matrix plus one
/// proposition set per state.
struct Imc {
  IntervalMatrix trans;
  std::vector<PropSet> props;

  std::size_t n_states() const { return trans.size(); }
  bool operator==(const Imc&) const = default;
};

}  // namespace imcv
