#include "dom/solver.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "dom/csv.hpp"
#include "dom/error.hpp"
#include "dom/exact2d.hpp"

namespace dom {

namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dominance_tolerance(double coordinate) { return 1e-6 * (1.0 + std::abs(coordinate)); }

void require_pair(const PointSet& p, const PointSet& q) {
  if (p.is_empty() || q.is_empty()) throw InvalidInput("P and Q must be non-empty");
  if (p.dim() != q.dim()) {
    throw InvalidInput("P has " + std::to_string(p.dim()) + " objectives but Q has " +
                       std::to_string(q.dim()));
  }
}

// Owns a mkdtemp directory for the lifetime of one external solve.
class ScratchDir {
 public:
  ScratchDir() {
    std::string pattern = (fs::temp_directory_path() / "dom-solve-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) throw BackendError("cannot create temporary directory");
    path_ = pattern;
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  [[nodiscard]] const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string read_tail(const fs::path& path, std::size_t max_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.size() > max_bytes) text = "..." + text.substr(text.size() - max_bytes);
  return text;
}

bool parse_real(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

CoverResult cover_cost(PointView p, const PointSet& s) {
  if (s.is_empty()) throw InvalidInput("cover_cost needs a non-empty subset");
  if (p.size() != s.dim()) throw InvalidInput("cover_cost dimension mismatch");
  CoverResult r{0.0, Point(p.begin(), p.end())};
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (std::size_t m = 0; m < p.size(); ++m) r.moved[m] = std::min(r.moved[m], s.at(j, m));
  }
  for (std::size_t m = 0; m < p.size(); ++m) r.cost += p[m] - r.moved[m];
  return r;
}

DomSolution assemble_solution(const PointSet& p, const PointSet& q,
                              std::vector<std::size_t> assignment) {
  require_pair(p, q);
  if (assignment.size() != q.size()) throw InvalidInput("assignment must cover every Q point");
  const std::size_t dim = p.dim();

  DomSolution sol;
  sol.moved_points = p.rows();
  for (std::size_t j = 0; j < q.size(); ++j) {
    const std::size_t i = assignment[j];
    if (i >= p.size()) throw InvalidInput("assignment refers to a missing P point");
    for (std::size_t m = 0; m < dim; ++m) {
      sol.moved_points[i][m] = std::min(sol.moved_points[i][m], q.at(j, m));
    }
  }
  sol.decomposition.dim = dim;
  sol.decomposition.zp.assign(p.size() * dim, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t m = 0; m < dim; ++m) {
      const double move = p.at(i, m) - sol.moved_points[i][m];
      sol.decomposition.zp[i * dim + m] = move;
      sol.value += move;
    }
  }
  sol.assignment = std::move(assignment);
  sol.best_bound = sol.value;
  return sol;
}

DomSolution solve_dp_exact(const PointSet& p, const PointSet& q, std::size_t size_limit) {
  require_pair(p, q);
  const std::size_t n = q.size();
  if (n > size_limit || n > 30) {
    throw BackendError("exact-dp is limited to |Q| <= " + std::to_string(std::min<std::size_t>(size_limit, 30)) +
                       " but |Q| = " + std::to_string(n) + "; use the external MIP backend");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t dim = p.dim();
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);

  // block_cost[T] = min_i cover_cost(p_i, T), enumerated depth-first so that
  // each subset's componentwise minimum is derived from its parent's.
  std::vector<double> block_cost(std::size_t{1} << n, 0.0);
  std::vector<std::uint32_t> block_owner(std::size_t{1} << n, 0);
  std::vector<double> mins((n + 1) * dim, kInf);
  std::function<void(std::uint32_t, std::size_t, std::size_t)> visit =
      [&](std::uint32_t mask, std::size_t next, std::size_t depth) {
        for (std::size_t k = next; k < n; ++k) {
          const std::uint32_t child = mask | (1u << k);
          double* cur = &mins[(depth + 1) * dim];
          const double* parent = &mins[depth * dim];
          for (std::size_t m = 0; m < dim; ++m) cur[m] = std::min(parent[m], q.at(k, m));
          double best = kInf;
          std::uint32_t owner = 0;
          for (std::size_t i = 0; i < p.size(); ++i) {
            double cost = 0.0;
            for (std::size_t m = 0; m < dim; ++m) cost += std::max(0.0, p.at(i, m) - cur[m]);
            if (cost < best) {
              best = cost;
              owner = static_cast<std::uint32_t>(i);
            }
          }
          block_cost[child] = best;
          block_owner[child] = owner;
          visit(child, k + 1, depth + 1);
        }
      };
  visit(0, 0, 0);

  // Partition DP; the block holding the lowest remaining Q point is chosen
  // at each step, so every partition is enumerated once.
  std::vector<double> best(std::size_t{1} << n, 0.0);
  std::vector<std::uint32_t> choice(std::size_t{1} << n, 0);
  for (std::uint32_t s = 1; s <= full && s != 0; ++s) {
    const std::uint32_t low = s & (~s + 1u);
    const std::uint32_t rest = s ^ low;
    double b = kInf;
    std::uint32_t pick = 0;
    std::uint32_t sub = rest;
    while (true) {
      const std::uint32_t block = sub | low;
      const double c = block_cost[block] + best[s ^ block];
      if (c < b) {
        b = c;
        pick = block;
      }
      if (sub == 0) break;
      sub = (sub - 1u) & rest;
    }
    best[s] = b;
    choice[s] = pick;
  }

  std::vector<std::size_t> assignment(n, 0);
  for (std::uint32_t s = full; s != 0;) {
    const std::uint32_t block = choice[s];
    for (std::size_t j = 0; j < n; ++j) {
      if (block & (1u << j)) assignment[j] = block_owner[block];
    }
    s ^= block;
  }

  DomSolution sol = assemble_solution(p, q, std::move(assignment));
  sol.backend = Backend::ExactDp;
  sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

ExternalResult parse_solution(std::istream& in, const DomMipModel& model,
                              std::string_view source_name) {
  ExternalResult r;
  r.valuation.assign(model.variables().size(), 0.0);
  std::vector<bool> seen(model.variables().size(), false);
  bool have_objective = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw BackendError(std::string(source_name) + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key) || key.front() == '#') continue;
    std::string value_text;
    if (!(fields >> value_text)) fail("missing value after '" + key + "'");
    std::string extra;
    if (fields >> extra) fail("unexpected token '" + extra + "'");

    if (key == "status") {
      r.status = value_text;
      continue;
    }
    double value = 0.0;
    if (!parse_real(value_text, value) || !std::isfinite(value)) {
      fail("cannot parse value '" + value_text + "' for '" + key + "'");
    }
    if (key == "objective") {
      if (have_objective) fail("duplicate objective line");
      r.objective = value;
      have_objective = true;
    } else if (key == "bound") {
      r.bound = value;
    } else {
      const auto id = model.find(key);
      if (!id) fail("unknown variable '" + key + "'");
      if (seen[id->value]) fail("duplicate value for '" + key + "'");
      seen[id->value] = true;
      r.valuation[id->value] = value;
    }
  }
  if (r.status && (*r.status == "infeasible" || *r.status == "error" || *r.status == "unbounded")) {
    throw BackendError(std::string(source_name) + ": solver reported status '" + *r.status + "'");
  }
  if (!have_objective) {
    line_no = 0;
    fail("no objective line");
  }
  return r;
}

std::string expand_command(std::string_view command_template, std::string_view lp_file,
                           std::string_view sol_file, double gap,
                           std::optional<double> time_limit) {
  const std::pair<std::string_view, std::string> subst[] = {
      {"{lp_file}", std::string(lp_file)},
      {"{sol_file}", std::string(sol_file)},
      {"{gap}", format_real(gap)},
      {"{time_limit}", time_limit ? format_real(*time_limit) : std::string("none")},
  };
  std::string out;
  for (std::size_t k = 0; k < command_template.size();) {
    bool replaced = false;
    for (const auto& [key, value] : subst) {
      if (command_template.substr(k, key.size()) == key) {
        out += value;
        k += key.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out += command_template[k++];
  }
  return out;
}

ExternalResult solve_external(const DomMipModel& model, const SolveOptions& opts) {
  if (!opts.external_command || opts.external_command->empty()) {
    throw BackendError("no external solver command configured");
  }
  ScratchDir scratch;
  const fs::path lp_file = scratch.path() / "model.lp";
  const fs::path sol_file = scratch.path() / "model.sol";
  const fs::path log_file = scratch.path() / "solver.log";
  {
    std::ofstream lp(lp_file);
    if (!lp) throw BackendError("cannot write " + lp_file.string());
    emit_lp(model, lp);
  }

  const std::string command = expand_command(*opts.external_command, lp_file.string(), sol_file.string(),
                                             opts.relative_gap_target, opts.time_limit) +
                              " > '" + log_file.string() + "' 2>&1";
  const int raw = std::system(command.c_str());
  std::string diagnostics = read_tail(log_file, 4000);
  if (raw == -1 || !WIFEXITED(raw) || WEXITSTATUS(raw) != 0) {
    const int code = (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    throw BackendError("external solver failed (exit status " + std::to_string(code) + "): " + diagnostics);
  }
  std::ifstream sol(sol_file);
  if (!sol) throw BackendError("external solver left no solution file; output: " + diagnostics);
  ExternalResult result;
  try {
    result = parse_solution(sol, model, sol_file.filename().string());
  } catch (const BackendError& e) {
    throw BackendError(std::string(e.what()) + (diagnostics.empty() ? "" : "; solver output: " + diagnostics));
  }
  result.diagnostics = std::move(diagnostics);
  return result;
}

DomSolution reconstruct_solution(const DomMipModel& model, std::span<const double> valuation,
                                 const PointSet& p, const PointSet& q,
                                 const Translation& translation) {
  const std::size_t np = model.num_p();
  const std::size_t nq = model.num_q();
  const std::size_t dim = model.num_objectives();
  if (valuation.size() != model.variables().size()) throw InvalidInput("valuation does not match model");
  if (p.size() != np || q.size() != nq || p.dim() != dim || q.dim() != dim) {
    throw InvalidInput("point sets do not match the model");
  }

  const auto& vars = model.variables();
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k].kind != VarKind::Binary) continue;
    const double v = valuation[k];
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-4 || (r != 0.0 && r != 1.0)) {
      throw VerificationError("binary " + vars[k].name() + " = " + format_real(v) + " is not integral");
    }
  }
  auto on = [&](VarId id) { return valuation[id.value] > 0.5; };

  double coord_scale = 0.0;
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t m = 0; m < dim; ++m) coord_scale = std::max(coord_scale, std::abs(p.at(i, m)));
  for (std::size_t j = 0; j < nq; ++j)
    for (std::size_t m = 0; m < dim; ++m) coord_scale = std::max(coord_scale, std::abs(q.at(j, m)));
  const double violation = model.max_violation(valuation);
  if (violation > 1e-5 * (1.0 + coord_scale)) {
    throw VerificationError("solver valuation violates the model by " + format_real(violation));
  }

  DomSolution sol;
  sol.backend = Backend::External;
  sol.assignment.assign(nq, 0);
  std::vector<bool> used(np, false);
  for (std::size_t j = 0; j < nq; ++j) {
    std::size_t owners = 0;
    for (std::size_t i = 0; i < np; ++i) {
      if (on(model.xpq(i, j))) {
        sol.assignment[j] = i;
        used[i] = true;
        ++owners;
      }
    }
    if (owners != 1) {
      throw VerificationError("q_" + std::to_string(j + 1) + " is assigned to " + std::to_string(owners) +
                              " points of P");
    }
  }

  std::vector<Point> moved = p.rows();
  for (std::size_t i = 0; i < np; ++i) {
    if (!used[i]) continue;
    for (std::size_t m = 0; m < dim; ++m) {
      const double phat = valuation[model.phat(i, m).value];
      double shrink = 0.0;
      for (std::size_t j = 0; j < nq; ++j) {
        if (sol.assignment[j] == i) shrink += valuation[model.zpq(i, j, m).value];
      }
      const double v = std::clamp(phat - shrink, model.lower_p(i, m), std::max(phat, model.lower_p(i, m)));
      moved[i][m] = std::min(v, p.at(i, m));
    }
  }

  for (std::size_t j = 0; j < nq; ++j) {
    const std::size_t i = sol.assignment[j];
    for (std::size_t m = 0; m < dim; ++m) {
      if (moved[i][m] > q.at(j, m) + dominance_tolerance(q.at(j, m))) {
        throw VerificationError("moved p_" + std::to_string(i + 1) + " does not weakly dominate q_" +
                                std::to_string(j + 1) + " in objective " + std::to_string(m + 1));
      }
    }
  }

  double solver_total = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t m = 0; m < dim; ++m) solver_total += p.at(i, m) - moved[i][m];
  }
  const double objective = model.objective_value(valuation);
  sol.solver_objective = objective;
  if (std::abs(objective - solver_total) > 1e-5 * (1.0 + solver_total)) {
    throw VerificationError("solver objective " + format_real(objective) + " disagrees with the move total " +
                            format_real(solver_total) + " recomputed from P'");
  }

  // Polish: the verified assignment fixes the cheapest P' exactly, which removes
  // the solver's feasibility slack from both the coordinates and the value.
  std::vector<Point> exact = p.rows();
  for (std::size_t j = 0; j < nq; ++j) {
    auto& x = exact[sol.assignment[j]];
    for (std::size_t m = 0; m < dim; ++m) x[m] = std::min(x[m], q.at(j, m));
  }

  // The solver's zp/zpq split is kept, rescaled so each (i, m) group sums to the
  // exact move.
  sol.decomposition.dim = dim;
  sol.decomposition.zp.assign(np * dim, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t m = 0; m < dim; ++m) {
      const double target = p.at(i, m) - exact[i][m];
      sol.value += target;
      double group = valuation[model.zp(i, m).value];
      for (std::size_t j = 0; j < nq; ++j) group += valuation[model.zpq(i, j, m).value];
      const double scale = group > 1e-12 ? target / group : 0.0;
      sol.decomposition.zp[i * dim + m] = group > 1e-12 ? valuation[model.zp(i, m).value] * scale : target;
      for (std::size_t j = 0; j < nq; ++j) {
        const double z = valuation[model.zpq(i, j, m).value] * scale;
        if (z > 1e-12) sol.decomposition.zpq.push_back({i, j, m, z});
      }
    }
  }
  sol.best_bound = sol.value;
  moved = std::move(exact);
  sol.moved_points.reserve(np);
  for (const auto& x : moved) sol.moved_points.push_back(translation.revert(x));
  return sol;
}

Backend resolve_backend(const SolveOptions& opts, std::size_t reduced_q, std::size_t dim) {
  switch (opts.backend) {
    case Backend::Exact2d:
      if (dim != 2) throw BackendError("exact-2d needs exactly two objectives, got " + std::to_string(dim));
      return Backend::Exact2d;
    case Backend::ExactDp:
    case Backend::External:
      return opts.backend;
    case Backend::Auto:
      break;
  }
  if (dim == 2) return Backend::Exact2d;
  if (reduced_q <= opts.dp_size_limit) return Backend::ExactDp;
  if (opts.external_command && !opts.external_command->empty()) return Backend::External;
  throw BackendError("reduced Q has " + std::to_string(reduced_q) + " points, above the exact-dp limit of " +
                     std::to_string(opts.dp_size_limit) + "; configure an external MIP command");
}

DomSolution dom(const PointSet& p, const PointSet& q, const SolveOptions& opts) {
  require_pair(p, q);
  opts.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t dim = p.dim();

  const PrefilterOutcome pre = prefilter_pair(p, q);
  std::vector<std::size_t> assignment(q.size(), 0);
  for (const auto& c : pre.zero_cost_covers) assignment[c.q_index] = c.by_index;

  if (pre.q_reduced.is_empty()) {
    DomSolution sol = assemble_solution(p, q, std::move(assignment));
    sol.backend = opts.backend;
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
  }

  const Backend backend = resolve_backend(opts, pre.q_reduced.size(), dim);
  auto merge_reduced = [&](const std::vector<std::size_t>& reduced) {
    for (std::size_t r = 0; r < reduced.size(); ++r) {
      assignment[pre.q_original[r]] = pre.p_original[reduced[r]];
    }
    for (const auto& a : pre.absorbed) assignment[a.q_index] = assignment[a.by_index];
  };

  DomSolution sol;
  if (backend == Backend::ExactDp || backend == Backend::Exact2d) {
    const DomSolution reduced = backend == Backend::ExactDp
                                    ? solve_dp_exact(pre.p_reduced, pre.q_reduced, opts.dp_size_limit)
                                    : dom_2d(pre.p_reduced, pre.q_reduced);
    merge_reduced(reduced.assignment);
    sol = assemble_solution(p, q, std::move(assignment));
  } else {
    const TranslatedPair shifted = translate_nonnegative(pre.p_reduced, pre.q_reduced);
    const DomMipModel model = build_model(shifted.p, shifted.q);
    const ExternalResult ext = solve_external(model, opts);
    const DomSolution reduced = reconstruct_solution(model, ext.valuation, shifted.p, shifted.q,
                                                     shifted.translation);
    merge_reduced(reduced.assignment);

    // P' is rebuilt in the original frame so undoing the shift adds no noise.
    sol = assemble_solution(p, q, std::move(assignment));
    sol.decomposition.zp.assign(p.size() * dim, 0.0);
    for (std::size_t r = 0; r < pre.p_reduced.size(); ++r) {
      for (std::size_t m = 0; m < dim; ++m) {
        sol.decomposition.zp[pre.p_original[r] * dim + m] = reduced.decomposition.zp_at(r, m);
      }
    }
    for (const auto& e : reduced.decomposition.zpq) {
      sol.decomposition.zpq.push_back({pre.p_original[e.i], pre.q_original[e.j], e.m, e.value});
    }
    sol.solver_objective = ext.objective;
    sol.best_bound = std::min(ext.bound.value_or(sol.value), sol.value);
    sol.gap = relative_gap(sol.value, sol.best_bound);
    if (ext.status && *ext.status == "time-limit") {
      sol.status = SolveStatus::TimeLimit;
    } else if (sol.gap <= kOptimalGap) {
      sol.status = SolveStatus::Optimal;
    } else if (sol.gap <= opts.relative_gap_target + 1e-9) {
      sol.status = SolveStatus::WithinGap;
    } else {
      throw BackendError("external solver stopped at relative gap " + format_real(sol.gap) +
                         " above the target " + format_real(opts.relative_gap_target));
    }
  }
  sol.backend = backend;

  for (std::size_t j = 0; j < q.size(); ++j) {
    const auto& mp = sol.moved_points[sol.assignment[j]];
    for (std::size_t m = 0; m < dim; ++m) {
      if (mp[m] > q.at(j, m) + dominance_tolerance(q.at(j, m))) {
        throw VerificationError("moved point " + std::to_string(sol.assignment[j]) +
                                " does not weakly dominate q " + std::to_string(j));
      }
    }
  }
  sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace dom
