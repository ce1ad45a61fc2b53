#include "dom/solution.hpp"

#include <algorithm>
#include <cmath>

#include "dom/error.hpp"

namespace dom {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::Auto: return "auto";
    case Backend::ExactDp: return "exact-dp";
    case Backend::Exact2d: return "exact-2d";
    case Backend::External: return "external";
  }
  return "auto";
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::WithinGap: return "within-gap";
    case SolveStatus::TimeLimit: return "time-limit";
    case SolveStatus::InfeasibleError: return "infeasible-error";
  }
  return "optimal";
}

Backend parse_backend(std::string_view text) {
  for (Backend b : {Backend::Auto, Backend::ExactDp, Backend::Exact2d, Backend::External}) {
    if (text == to_string(b)) return b;
  }
  throw InvalidInput("unknown backend '" + std::string(text) +
                     "' (expected auto, exact-dp, exact-2d or external)");
}

void SolveOptions::validate() const {
  if (!std::isfinite(relative_gap_target) || relative_gap_target < 0.0) {
    throw InvalidInput("relative gap target must be a finite value >= 0");
  }
  if (time_limit && !(*time_limit > 0.0)) throw InvalidInput("time limit must be positive");
  if (backend == Backend::External && (!external_command || external_command->empty())) {
    throw InvalidInput("the external backend needs an external command template");
  }
  if (dp_size_limit > 30) throw InvalidInput("dp size limit cannot exceed 30");
}

double relative_gap(double incumbent, double bound) {
  return (incumbent - bound) / std::max(incumbent, 1e-12);
}

double MoveDecomposition::zpq_at(std::size_t i, std::size_t j, std::size_t m) const {
  for (const auto& e : zpq) {
    if (e.i == i && e.j == j && e.m == m) return e.value;
  }
  return 0.0;
}

double MoveDecomposition::total() const {
  double sum = 0.0;
  for (double v : zp) sum += v;
  for (const auto& e : zpq) sum += e.value;
  return sum;
}

std::size_t DomSolution::changed_points(const PointSet& p) const {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < moved_points.size() && i < p.size(); ++i) {
    const auto orig = p[i];
    if (!std::equal(orig.begin(), orig.end(), moved_points[i].begin())) ++changed;
  }
  return changed;
}

}  // namespace dom
