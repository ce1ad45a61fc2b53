#ifndef DOM_SOLUTION_HPP
#define DOM_SOLUTION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dom/point_set.hpp"

namespace dom {

/// Auto picks exact-2d for two objectives, exact-dp while the reduced Q fits
/// the DP limit, and the external MIP solver otherwise.
enum class Backend { Auto, ExactDp, Exact2d, External };

enum class SolveStatus { Optimal, WithinGap, TimeLimit, InfeasibleError };

std::string_view to_string(Backend b);
std::string_view to_string(SolveStatus s);
/// Accepts "auto", "exact-dp", "exact-2d", "external"; throws InvalidInput.
Backend parse_backend(std::string_view text);

struct SolveOptions {
  Backend backend = Backend::Auto;
  double relative_gap_target = 1e-8;
  std::optional<double> time_limit;  // seconds
  std::optional<std::string> external_command;
  std::size_t dp_size_limit = 20;

  /// Throws InvalidInput when the options are inconsistent.
  void validate() const;
};

/// Relative gap below which a solve counts as proven optimal.
inline constexpr double kOptimalGap = 1e-6;

/// (incumbent - bound) / max(incumbent, 1e-12).
double relative_gap(double incumbent, double bound);

struct ZpqEntry {
  std::size_t i;
  std::size_t j;
  std::size_t m;
  double value;
};

/// How the total move splits into the two MIP terms. Combinatorial backends
/// put the whole move into zp.
struct MoveDecomposition {
  std::size_t dim = 0;
  std::vector<double> zp;       // |P| x M, row-major
  std::vector<ZpqEntry> zpq;    // nonzero entries only

  [[nodiscard]] double zp_at(std::size_t i, std::size_t m) const { return zp[i * dim + m]; }
  [[nodiscard]] double zpq_at(std::size_t i, std::size_t j, std::size_t m) const;
  [[nodiscard]] double total() const;
};

struct DomSolution {
  double value = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  Backend backend = Backend::Auto;
  /// Objective reported by an external solver, before recomputation.
  std::optional<double> solver_objective;
  /// assignment[j] is the P index whose moved point covers q_j.
  std::vector<std::size_t> assignment;
  /// P', in the same frame and order as P.
  std::vector<Point> moved_points;
  MoveDecomposition decomposition;
  double seconds = 0.0;

  /// Number of P points whose moved position differs from the original.
  [[nodiscard]] std::size_t changed_points(const PointSet& p) const;
};

}  // namespace dom

#endif  // DOM_SOLUTION_HPP
