#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace imcv {

using Vec = std::vector<double>;

/// Sorted, duplicate-free set of atomic proposition names.
using PropSet = std::vector<std::string>;

PropSet make_props(std::vector<std::string> names);

/// Axis-aligned compact box [lower, upper], lower <= upper elementwise.
struct Rect {
  Vec lower;
  Vec upper;

  std::size_t dim() const { return lower.size(); }
  double volume() const;
  double width(std::size_t i) const { return upper[i] - lower[i]; }
  Vec center() const;
  bool contains(const Vec& x, double tol = 0.0) const;
  bool contains_rect(const Rect& r, double tol = 0.0) const;
  /// Volume of the intersection (0 if disjoint).
  double overlap_volume(const Rect& r) const;

  bool operator==(const Rect&) const = default;
};

/// Validating constructor; throws ModelError on lower > upper or empty dims.
Rect make_rect(Vec lower, Vec upper);

struct LabeledRegion {
  Rect rect;
  PropSet props;
};

/// Interior-disjoint rectangular cover of a domain, each cell carrying one
/// proposition set.
struct Partition {
  Rect domain;
  std::vector<Rect> cells;
  std::vector<PropSet> cell_props;

  std::size_t size() const { return cells.size(); }
};

enum class StateClass { yes, no, undecided };

const char* to_string(StateClass c);

/// Halve a box along its largest dimension (lowest index on ties).
/// Throws ModelError for zero-volume boxes.
std::pair<Rect, Rect> split_rect(const Rect& rect);

/// Uniform grid over `domain` refined by every label-region boundary, so each
/// cell lies in exactly one region's proposition class. Cells not covered by
/// any region get an empty proposition set. Throws ModelError if regions
/// overlap with positive volume or stick out of the domain.
Partition align_partition_to_labels(const Rect& domain,
                                    const std::vector<LabeledRegion>& regions,
                                    const std::vector<int>& grid);

/// Total volume of undecided cells divided by the domain volume.
double uncertain_volume(const Partition& partition,
                        const std::vector<StateClass>& classes);

/// Checks cover (relative 1e-9) and pairwise interior disjointness.
/// Throws ModelError on violation.
void validate_partition(const Partition& partition);

}  // namespace imcv
