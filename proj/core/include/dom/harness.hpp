/**
 * @file harness.hpp
 * @brief Experiment plumbing behind the command-line tool: ranked indicator
 *        reports, correlation tables, running DoM matrices, and the JSON and
 *        text renderings of each.
 */

#ifndef DOM_HARNESS_HPP
#define DOM_HARNESS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dom/indicators.hpp"
#include "dom/point_set.hpp"
#include "dom/solution.hpp"

namespace dom {

struct LabeledSet {
  std::string label;
  PointSet points;
};

struct IndicatorRow {
  std::string label;
  std::size_t size = 0;
  double dom = 0.0;
  double dom_bound = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  Backend backend = Backend::Auto;
  std::optional<double> hv;  // empty when the exact HV limits are exceeded
  double igd_plus = 0.0;
  double epsilon = 0.0;
  double seconds = 0.0;
};

struct ReportDocument {
  std::string problem;
  std::vector<IndicatorRow> rows;  // ascending by dom, ties by label
  std::size_t reference_size = 0;
  Point hv_reference;
  double gap_target = 0.0;
  Backend backend = Backend::Auto;
  double seconds = 0.0;
};

struct ReportOptions {
  SolveOptions solve;
  std::optional<Point> hv_reference;  // default: componentwise max of the union
};

/// The non-dominated filter of the union of all sets.
PointSet joint_reference(std::span<const LabeledSet> sets);

/**
 * Scores every set against the joint reference with DoM, HV, IGD+ and
 * additive epsilon. Throws InvalidInput for fewer than two sets, duplicate
 * labels or mixed dimensions.
 */
ReportDocument build_report(std::string problem, std::span<const LabeledSet> sets,
                            const ReportOptions& opts = {});

/// Reads every *.csv in `dir` (sorted by name), labelled by file stem.
std::vector<LabeledSet> load_directory(const std::filesystem::path& dir);

std::string report_to_json(const ReportDocument& doc, bool deterministic);
ReportDocument report_from_json(std::string_view text, std::string_view source_name = "report");
std::string report_to_text(const ReportDocument& doc);

inline constexpr std::string_view kNegHvColumn = "-HV";
inline constexpr std::string_view kIgdPlusColumn = "IGD+";
inline constexpr std::string_view kEpsilonColumn = "eps+";

struct CorrelationCell {
  std::string indicator;
  std::optional<CorrelationResult> result;
  std::string error;  // set when result is empty
};

struct CorrelationTable {
  std::string scope;  // problem label, or "combined"
  std::size_t rows = 0;
  std::vector<CorrelationCell> cells;  // -HV, IGD+, eps+ in that order
};

/**
 * DoM against -HV, IGD+ and additive epsilon. Every column is min-max
 * normalised within its own problem; HV is negated first. One table per
 * document, then a combined table over all normalised rows. Cells that cannot
 * be computed carry an error message instead of a result. Throws InvalidInput
 * when there are fewer than three rows in total.
 */
std::vector<CorrelationTable> correlate(std::span<const ReportDocument> docs);

std::string correlation_to_json(std::span<const CorrelationTable> tables);
std::string correlation_to_text(std::span<const CorrelationTable> tables);

struct RunSeries {
  std::vector<std::pair<long, PointSet>> generations;  // strictly increasing
  std::vector<long> pivots;
  std::optional<PointSet> terminal_reference;

  /// Throws InvalidInput on unordered generations or unknown pivots.
  void validate() const;
};

inline constexpr std::string_view kTerminalPivot = "terminal";

struct RunningCell {
  long generation = 0;
  std::string pivot;  // generation number, or "terminal"
  double dom = 0.0;
};

/// DoM(P_t, ND(pivot)) for every generation t and pivot, generation-major.
std::vector<RunningCell> running_matrix(const RunSeries& series, const SolveOptions& opts = {});

/// Long format with the header `generation,pivot,dom`.
void write_running_csv(std::ostream& out, std::span<const RunningCell> cells);

/**
 * Builds a series from generation files. The generation number is the
 * trailing run of digits in each file stem, so `nsga2_gen050.csv` is
 * generation 50.
 */
RunSeries load_series(std::span<const std::filesystem::path> files, std::vector<long> pivots,
                      const std::optional<std::filesystem::path>& terminal);

std::string solution_to_json(const DomSolution& sol, const PointSet& p, bool deterministic);
std::string solution_to_text(const DomSolution& sol, const PointSet& p);

}  // namespace dom

#endif  // DOM_HARNESS_HPP
