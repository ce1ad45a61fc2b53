/**
 * @file point_set.hpp
 * @brief Objective-space point sets, dominance predicates and the pair
 *        preprocessing shared by every DoM backend.
 *
 * All objectives are minimized. Weak dominance is component-wise `<=`.
 */

#ifndef DOM_POINT_SET_HPP
#define DOM_POINT_SET_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dom {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// true iff a_m <= b_m for every objective m. Throws InvalidInput on
/// dimension mismatch.
bool weakly_leq(PointView a, PointView b);

/// Pareto dominance: weakly_leq(a, b) and a_m < b_m for at least one m.
bool dominates(PointView a, PointView b);

/**
 * @brief An ordered, duplicate-free collection of objective vectors.
 *
 * Coordinates are stored row-major. Construction rejects empty input, ragged
 * rows and non-finite values, and drops exact duplicates (first occurrence
 * kept). An empty set can only be obtained through PointSet::empty(), which
 * is what the preprocessing steps return when everything was filtered out.
 */
class PointSet {
 public:
  explicit PointSet(const std::vector<Point>& rows,
                    std::vector<std::string> labels = {});

  static PointSet empty(std::size_t dim);

  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] bool is_empty() const noexcept { return count_ == 0; }

  [[nodiscard]] PointView operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] double at(std::size_t i, std::size_t m) const {
    return coords_[i * dim_ + m];
  }

  /// Per-point labels; empty when none were supplied.
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept {
    return labels_;
  }

  [[nodiscard]] std::vector<Point> rows() const;

  /// Subset in the given index order (indices must be valid and distinct).
  [[nodiscard]] PointSet select(std::span<const std::size_t> indices) const;

  /// Every point shifted by `offset`. Point count and order are kept even
  /// if rounding makes two shifted points coincide.
  [[nodiscard]] PointSet shifted(PointView offset) const;

  /// Concatenation; duplicates across the two sets are dropped.
  [[nodiscard]] PointSet merged_with(const PointSet& other) const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  struct EmptyTag {};
  PointSet(EmptyTag, std::size_t dim) : dim_(dim) {}

  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::vector<double> coords_;
  std::vector<std::string> labels_;
};

/// Indices of the points not dominated by any other point, in input order.
std::vector<std::size_t> nondominated_indices(const PointSet& s);

/// Maximal mutually non-dominated subset, survivor order preserved.
PointSet nondominated_filter(const PointSet& s);

/// A dropped Q point together with the original index of what accounts for it.
struct Cover {
  std::size_t q_index;
  std::size_t by_index;
  friend bool operator==(const Cover&, const Cover&) = default;
};

/**
 * @brief Result of reducing a (P, Q) pair before solving.
 *
 * `zero_cost_covers` holds Q points weakly dominated by some point of the
 * reduced P (by_index is the original P index). `absorbed` holds Q points
 * that survive the P check but are dominated by another reduced Q point
 * (by_index is that point's original Q index); whichever moved point covers
 * the dominator covers them as well.
 */
struct PrefilterOutcome {
  PointSet p_reduced;
  PointSet q_reduced;
  std::vector<Cover> zero_cost_covers;
  std::vector<Cover> absorbed;
  std::vector<std::size_t> p_original;  // reduced index -> original P index
  std::vector<std::size_t> q_original;  // reduced index -> original Q index
};

PrefilterOutcome prefilter_pair(const PointSet& p, const PointSet& q);

/// Common per-objective shift that makes a pair nonnegative.
struct Translation {
  Point offset;

  [[nodiscard]] bool is_identity() const;
  [[nodiscard]] Point apply(PointView x) const;
  [[nodiscard]] Point revert(PointView x) const;
  [[nodiscard]] PointSet apply(const PointSet& s) const;
};

struct TranslatedPair {
  PointSet p;
  PointSet q;
  Translation translation;
};

/// offset_m = max(0, -min over both sets of coordinate m).
TranslatedPair translate_nonnegative(const PointSet& p, const PointSet& q);

/// Affine map onto [0, 1]; a constant list maps to zeros. Needs >= 2 values.
std::vector<double> minmax_normalize(std::span<const double> values);

}  // namespace dom

#endif  // DOM_POINT_SET_HPP
