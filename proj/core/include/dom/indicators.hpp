#ifndef DOM_INDICATORS_HPP
#define DOM_INDICATORS_HPP

#include <cstddef>
#include <span>

#include "dom/point_set.hpp"

namespace dom {

/// Additive epsilon: max over q of min over p of max over m of (p_m - q_m).
double additive_epsilon(const PointSet& p, const PointSet& q);

/// IGD+: mean over reference points r of min over a of
/// sqrt(sum_m max(a_m - r_m, 0)^2).
double igd_plus(const PointSet& a, const PointSet& reference);

inline constexpr std::size_t kMaxExactHvObjectives = 10;
inline constexpr std::size_t kMaxExactHvPoints = 100;

/**
 * Exact hypervolume of the region dominated by `s` and bounded by
 * `ref_point`, using WFG-style exclusive-volume recursion. Points that are
 * not componentwise <= ref_point are discarded first. Refuses (InvalidInput)
 * more than kMaxExactHvObjectives objectives or kMaxExactHvPoints points.
 */
double hypervolume(const PointSet& s, PointView ref_point);

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool significant = false;  // p_value <= 0.05
};

inline constexpr double kSignificanceLevel = 0.05;

/**
 * Sample Pearson correlation with a two-sided t test on n - 2 degrees of
 * freedom. Throws InvalidInput for unequal lengths, n < 3, or a list with
 * zero variance.
 */
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Two-sided tail probability P(|T| >= |t|) of Student's t with `dof` degrees.
double student_t_two_sided(double t, double dof);

}  // namespace dom

#endif  // DOM_INDICATORS_HPP
