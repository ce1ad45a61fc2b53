/**
 * @file solver.hpp
 * @brief DoM backends: the exact subset DP, the external MIP route through
 *        LP/solution files, and the `dom` pipeline that ties them together.
 */

#ifndef DOM_SOLVER_HPP
#define DOM_SOLVER_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dom/mip_model.hpp"
#include "dom/point_set.hpp"
#include "dom/solution.hpp"

namespace dom {

struct CoverResult {
  double cost;
  Point moved;
};

/// Cheapest move of p that weakly dominates every point of s:
/// p'_m = min(p_m, min_{q in s} q_m), cost = sum_m (p_m - p'_m).
CoverResult cover_cost(PointView p, const PointSet& s);

/**
 * Builds a DomSolution from an explicit assignment (q index -> p index):
 * every p moves to the cheapest point covering the Q points assigned to it.
 * Status optimal, bound = value; callers adjust those when they know better.
 */
DomSolution assemble_solution(const PointSet& p, const PointSet& q,
                              std::vector<std::size_t> assignment);

/**
 * Exact DoM by dynamic programming over subsets of Q.
 *
 * cover_cost is subadditive in the covered set for a fixed p, so the optimum
 * equals the cheapest partition of Q into blocks, each priced at its best
 * single p. The DP runs in O(3^|Q| + 2^|Q| |P| M) time and O(2^|Q|) space.
 * Throws BackendError if |Q| exceeds `size_limit`.
 */
DomSolution solve_dp_exact(const PointSet& p, const PointSet& q, std::size_t size_limit = 20);

/// What came back from an external solver run.
struct ExternalResult {
  double objective = 0.0;
  std::optional<double> bound;
  std::optional<std::string> status;  // e.g. "optimal", "time-limit"
  std::vector<double> valuation;      // indexed by VarId
  std::string diagnostics;            // captured solver output
};

/**
 * Parses a solution file: `#` comment lines, one `objective <real>` line,
 * optional `bound <real>` and `status <word>` lines, then whitespace
 * separated `name value` pairs. Unknown names are an error; missing
 * variables default to 0.
 */
ExternalResult parse_solution(std::istream& in, const DomMipModel& model,
                              std::string_view source_name = "solution");

/// Replaces {lp_file}, {sol_file}, {gap} and {time_limit} in the template.
std::string expand_command(std::string_view command_template, std::string_view lp_file,
                           std::string_view sol_file, double gap,
                           std::optional<double> time_limit);

/**
 * Writes the model to a private temporary directory, runs the configured
 * command and parses the solution file it leaves behind. Throws BackendError
 * on a nonzero exit status, a missing or malformed solution file, or an
 * infeasible/error status line.
 */
ExternalResult solve_external(const DomMipModel& model, const SolveOptions& opts);

/**
 * Turns a solver valuation into a verified DomSolution.
 *
 * `p` and `q` are the (translated) sets the model was built from; moved
 * points are reported after reverting `translation`. Binaries must lie within
 * 1e-4 of {0,1}. Used points move to p'_m = phat_m - sum_j zpq_{i,j,m}[xpq_{i,j}]
 * clamped to [lp, phat]; unused points stay put. The value is recomputed from
 * P' and must agree with the model objective to 1e-5 (1 + value).
 * Throws VerificationError on any violated check.
 */
DomSolution reconstruct_solution(const DomMipModel& model, std::span<const double> valuation,
                                 const PointSet& p, const PointSet& q,
                                 const Translation& translation);

/// Backend that `dom` would run for a reduced pair of the given shape.
Backend resolve_backend(const SolveOptions& opts, std::size_t reduced_q, std::size_t dim);

/**
 * DoM(P, Q): prefilter, optional translation to nonnegative coordinates for
 * the MIP route, backend dispatch, then zero-cost covers merged back.
 * Indices in the result refer to the input sets.
 */
DomSolution dom(const PointSet& p, const PointSet& q, const SolveOptions& opts = {});

}  // namespace dom

#endif  // DOM_SOLVER_HPP
