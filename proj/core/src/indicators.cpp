#include "dom/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "dom/error.hpp"

namespace dom {

namespace {

void require_same_dim(const PointSet& a, const PointSet& b) {
  if (a.dim() != b.dim()) throw InvalidInput("indicator inputs have different dimensions");
  if (a.is_empty() || b.is_empty()) throw InvalidInput("indicator inputs must be non-empty");
}

using Pts = std::vector<Point>;

bool weakly_dominates(const Point& a, const Point& b) {
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] > b[m]) return false;
  }
  return true;
}

Pts nondominated(Pts pts) {
  Pts out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool drop = false;
    for (std::size_t k = 0; k < pts.size() && !drop; ++k) {
      if (k == i) continue;
      // Keep the first of exact duplicates.
      drop = weakly_dominates(pts[k], pts[i]) && (pts[k] != pts[i] || k < i);
    }
    if (!drop) out.push_back(pts[i]);
  }
  return out;
}

double box_volume(const Point& p, const Point& ref) {
  double v = 1.0;
  for (std::size_t m = 0; m < p.size(); ++m) v *= ref[m] - p[m];
  return v;
}

double hv_2d(Pts pts, const Point& ref) {
  std::sort(pts.begin(), pts.end());
  double volume = 0.0;
  double ceiling = ref[1];
  for (const auto& x : pts) {
    if (x[1] < ceiling) {
      volume += (ref[0] - x[0]) * (ceiling - x[1]);
      ceiling = x[1];
    }
  }
  return volume;
}

double hv_recursive(Pts pts, const Point& ref) {
  if (pts.empty()) return 0.0;
  if (pts.size() == 1) return box_volume(pts.front(), ref);
  if (ref.size() == 2) return hv_2d(std::move(pts), ref);
  // Processing in decreasing order of the last objective keeps limit sets small.
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.back() > b.back(); });
  double volume = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Pts limited;
    limited.reserve(pts.size() - k - 1);
    for (std::size_t j = k + 1; j < pts.size(); ++j) {
      Point w(pts[k].size());
      for (std::size_t m = 0; m < w.size(); ++m) w[m] = std::max(pts[k][m], pts[j][m]);
      limited.push_back(std::move(w));
    }
    volume += box_volume(pts[k], ref) - hv_recursive(nondominated(std::move(limited)), ref);
  }
  return volume;
}

}  // namespace

double additive_epsilon(const PointSet& p, const PointSet& q) {
  require_same_dim(p, q);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < q.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
      double shift = -std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < p.dim(); ++m) shift = std::max(shift, p.at(i, m) - q.at(j, m));
      best = std::min(best, shift);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

double igd_plus(const PointSet& a, const PointSet& reference) {
  require_same_dim(a, reference);
  double total = 0.0;
  for (std::size_t r = 0; r < reference.size(); ++r) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
      double sq = 0.0;
      for (std::size_t m = 0; m < a.dim(); ++m) {
        const double d = std::max(a.at(i, m) - reference.at(r, m), 0.0);
        sq += d * d;
      }
      best = std::min(best, std::sqrt(sq));
    }
    total += best;
  }
  return total / static_cast<double>(reference.size());
}

double hypervolume(const PointSet& s, PointView ref_point) {
  if (ref_point.size() != s.dim()) throw InvalidInput("reference point dimension mismatch");
  if (s.dim() > kMaxExactHvObjectives) {
    throw InvalidInput("exact hypervolume is limited to " + std::to_string(kMaxExactHvObjectives) +
                       " objectives");
  }
  if (s.size() > kMaxExactHvPoints) {
    throw InvalidInput("exact hypervolume is limited to " + std::to_string(kMaxExactHvPoints) + " points");
  }
  const Point ref(ref_point.begin(), ref_point.end());
  Pts inside;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Point x(s[i].begin(), s[i].end());
    if (weakly_dominates(x, ref)) inside.push_back(std::move(x));
  }
  if (s.dim() == 1) {
    double best = ref[0];
    for (const auto& x : inside) best = std::min(best, x[0]);
    return ref[0] - best;
  }
  return hv_recursive(nondominated(std::move(inside)), ref);
}

double student_t_two_sided(double t, double dof) {
  if (!(dof > 0.0)) throw InvalidInput("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  const double x = dof / (dof + t * t);
  return boost::math::ibeta(dof / 2.0, 0.5, x);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("correlation inputs differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw InvalidInput("correlation needs at least 3 samples");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidInput("correlation undefined: zero variance");

  CorrelationResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);
  const double one_minus = 1.0 - res.r * res.r;
  if (one_minus <= 0.0) {
    res.p_value = 0.0;
  } else {
    const double t = res.r * std::sqrt(dof / one_minus);
    res.p_value = std::clamp(student_t_two_sided(t, dof), 0.0, 1.0);
  }
  res.significant = res.p_value <= kSignificanceLevel;
  return res;
}

}  // namespace dom
