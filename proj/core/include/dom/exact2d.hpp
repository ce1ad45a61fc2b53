/**
 * @file exact2d.hpp
 * @brief Exact DoM for two objectives by inward-neighbour clustering.
 *
 * After removing dominated points, every Q point starts as its own cluster.
 * Each cluster looks up its inward neighbour among P and the other clusters'
 * representatives. Two clusters that are each other's inward neighbour form
 * a loop and collapse into one cluster represented by their ideal point; the
 * lookup repeats until no loop remains. A cluster whose neighbour is a P
 * point is owned by it; a cluster pointing at another cluster shares that
 * cluster's owner. Each P point then moves just enough to cover the union of
 * the clusters it owns.
 */

#ifndef DOM_EXACT2D_HPP
#define DOM_EXACT2D_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "dom/point_set.hpp"
#include "dom/solution.hpp"

namespace dom {

/// Manhattan move that makes b weakly dominate a: sum_m max(0, b_m - a_m).
double move_distance(PointView b, PointView a);

/// Index in r of the point with the smallest move_distance to a; ties go to
/// the lowest index. Throws InvalidInput for an empty r.
std::size_t inward_neighbor(PointView a, const PointSet& r);

struct Cluster {
  std::vector<std::size_t> q_members;  // indices into the reduced Q
  std::optional<std::size_t> owner;    // index into the reduced P, once known
  Point representative;                // ideal point of the Q members
};

struct Dom2dTrace {
  std::size_t iterations = 0;  // inward-neighbour passes, the last one loop-free
  std::size_t collapses = 0;
  std::vector<Cluster> clusters;
};

/// Throws BackendError unless both sets have exactly two objectives.
DomSolution dom_2d(const PointSet& p, const PointSet& q, Dom2dTrace* trace = nullptr);

}  // namespace dom

#endif  // DOM_EXACT2D_HPP
