#include "imcv/interval_matrix.hpp"

#include <algorithm>
#include <string>

#include "imcv/errors.hpp"

namespace imcv {

void IntervalMatrix::set(std::size_t j, std::size_t col, double lo, double hi) {
  auto& row = rows_[j];
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const IntervalEntry& e, std::size_t c) { return e.col < c; });
  if (hi <= 0.0) {
    if (it != row.end() && it->col == col) row.erase(it);
    return;
  }
  IntervalEntry e{static_cast<std::uint32_t>(col), lo, hi};
  if (it != row.end() && it->col == col)
    *it = e;
  else
    row.insert(it, e);
}

std::pair<double, double> IntervalMatrix::at(std::size_t j, std::size_t col) const {
  const auto& row = rows_[j];
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const IntervalEntry& e, std::size_t c) { return e.col < c; });
  if (it != row.end() && it->col == col) return {it->lo, it->hi};
  return {0.0, 0.0};
}

double IntervalMatrix::row_lo_sum(std::size_t j) const {
  double s = 0.0;
  for (const auto& e : rows_[j]) s += e.lo;
  return s;
}

double IntervalMatrix::row_hi_sum(std::size_t j) const {
  double s = 0.0;
  for (const auto& e : rows_[j]) s += e.hi;
  return s;
}

void IntervalMatrix::validate_feasibility(double tol) const {
  for (std::size_t j = 0; j < size(); ++j) {
    for (const auto& e : rows_[j]) {
      if (e.lo < -tol || e.hi > 1.0 + tol || e.lo > e.hi + tol)
        throw ModelError("imc: entry bounds outside [0,1] or lo > hi in row " +
                         std::to_string(j));
      if (e.col >= size()) throw ModelError("imc: column index out of range");
    }
    double lo_sum = row_lo_sum(j), hi_sum = row_hi_sum(j);
    if (lo_sum > 1.0 + tol || hi_sum < 1.0 - tol)
      throw ModelError("imc: infeasible row " + std::to_string(j) +
                       " (sum lo = " + std::to_string(lo_sum) +
                       ", sum hi = " + std::to_string(hi_sum) + ")");
  }
}

}  // namespace imcv
