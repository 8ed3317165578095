#include "imcv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "imcv/errors.hpp"

namespace imcv {

namespace {
constexpr double kCoverRelTol = 1e-9;
}

PropSet make_props(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

double Rect::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= width(i);
  return v;
}

Vec Rect::center() const {
  Vec c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = lower[i] + width(i) / 2.0;
  return c;
}

bool Rect::contains(const Vec& x, double tol) const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  return true;
}

bool Rect::contains_rect(const Rect& r, double tol) const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (r.lower[i] < lower[i] - tol || r.upper[i] > upper[i] + tol) return false;
  return true;
}

double Rect::overlap_volume(const Rect& r) const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    double w = std::min(upper[i], r.upper[i]) - std::max(lower[i], r.lower[i]);
    if (w <= 0) return 0.0;
    v *= w;
  }
  return v;
}

Rect make_rect(Vec lower, Vec upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw ModelError("rect: dimension mismatch or empty");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i]))
      throw ModelError("rect: lower > upper in dimension " + std::to_string(i));
  return Rect{std::move(lower), std::move(upper)};
}

const char* to_string(StateClass c) {
  switch (c) {
    case StateClass::yes: return "yes";
    case StateClass::no: return "no";
    default: return "undecided";
  }
}

std::pair<Rect, Rect> split_rect(const Rect& rect) {
  if (rect.volume() <= 0.0) throw ModelError("split_rect: zero-volume rect");
  std::size_t k = 0;
  for (std::size_t i = 1; i < rect.dim(); ++i)
    if (rect.width(i) > rect.width(k)) k = i;
  double mid = rect.lower[k] + rect.width(k) / 2.0;
  Rect a = rect, b = rect;
  a.upper[k] = mid;
  b.lower[k] = mid;
  return {a, b};
}

namespace {

std::vector<double> merge_cuts(double lo, double hi, int n_grid,
                               const std::vector<double>& extra) {
  std::vector<double> cuts;
  cuts.push_back(lo);
  for (int k = 1; k < n_grid; ++k)
    cuts.push_back(lo + (hi - lo) * static_cast<double>(k) / n_grid);
  cuts.push_back(hi);
  for (double c : extra)
    if (c > lo && c < hi) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  // Dedupe within a relative tolerance so a region boundary that coincides
  // with a grid line is not inserted twice.
  double scale = std::max(std::abs(lo), std::abs(hi)) + 1.0;
  std::vector<double> out;
  for (double c : cuts)
    if (out.empty() || c - out.back() > kCoverRelTol * scale) out.push_back(c);
  out.back() = hi;
  return out;
}

}  // namespace

Partition align_partition_to_labels(const Rect& domain,
                                    const std::vector<LabeledRegion>& regions,
                                    const std::vector<int>& grid) {
  const std::size_t n = domain.dim();
  if (grid.size() != n) throw ModelError("partition grid dimension mismatch");
  for (int g : grid)
    if (g < 1) throw ModelError("partition grid counts must be >= 1");
  for (const auto& r : regions) {
    if (r.rect.dim() != n) throw ModelError("label region dimension mismatch");
    if (!domain.contains_rect(r.rect, kCoverRelTol * (domain.volume() + 1.0)))
      throw ModelError("label region does not lie inside the domain");
  }
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      double ov = regions[i].rect.overlap_volume(regions[j].rect);
      if (ov > kCoverRelTol * domain.volume())
        throw ModelError("label regions overlap with positive volume");
    }

  std::vector<std::vector<double>> cuts(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> extra;
    for (const auto& r : regions) {
      extra.push_back(r.rect.lower[i]);
      extra.push_back(r.rect.upper[i]);
    }
    cuts[i] = merge_cuts(domain.lower[i], domain.upper[i], grid[i], extra);
  }

  Partition p;
  p.domain = domain;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Rect cell;
    cell.lower.resize(n);
    cell.upper.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      cell.lower[i] = cuts[i][idx[i]];
      cell.upper[i] = cuts[i][idx[i] + 1];
    }
    Vec c = cell.center();
    PropSet props;
    for (const auto& r : regions)
      if (r.rect.contains(c)) {
        props = r.props;
        break;
      }
    p.cells.push_back(std::move(cell));
    p.cell_props.push_back(std::move(props));

    std::size_t d = 0;
    while (d < n && ++idx[d] == cuts[d].size() - 1) idx[d++] = 0;
    if (d == n) break;
  }
  validate_partition(p);
  return p;
}

double uncertain_volume(const Partition& partition,
                        const std::vector<StateClass>& classes) {
  if (classes.size() != partition.size())
    throw ModelError("uncertain_volume: one class per cell required");
  double v = 0.0;
  for (std::size_t j = 0; j < partition.size(); ++j)
    if (classes[j] == StateClass::undecided) v += partition.cells[j].volume();
  return v / partition.domain.volume();
}

void validate_partition(const Partition& partition) {
  double total = 0.0;
  for (const auto& c : partition.cells) {
    if (!partition.domain.contains_rect(c, kCoverRelTol))
      throw ModelError("partition cell outside domain");
    total += c.volume();
  }
  double dv = partition.domain.volume();
  if (std::abs(total - dv) > kCoverRelTol * dv)
    throw ModelError("partition cells do not cover the domain");
  for (std::size_t i = 0; i < partition.size(); ++i)
    for (std::size_t j = i + 1; j < partition.size(); ++j)
      if (partition.cells[i].overlap_volume(partition.cells[j]) > kCoverRelTol * dv)
        throw ModelError("partition cells overlap with positive volume");
}

}  // namespace imcv
