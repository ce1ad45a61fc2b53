#include "dom/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dom/csv.hpp"
#include "dom/error.hpp"
#include "dom/solver.hpp"

namespace dom {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

SolveStatus parse_status(std::string_view text) {
  for (auto s : {SolveStatus::Optimal, SolveStatus::WithinGap, SolveStatus::TimeLimit,
                 SolveStatus::InfeasibleError}) {
    if (to_string(s) == text) return s;
  }
  throw InvalidInput("unknown status '" + std::string(text) + "'");
}

json point_json(PointView x) { return json(std::vector<double>(x.begin(), x.end())); }

}  // namespace

PointSet joint_reference(std::span<const LabeledSet> sets) {
  if (sets.empty()) throw InvalidInput("no point sets given");
  std::vector<Point> all;
  const std::size_t dim = sets.front().points.dim();
  for (const auto& s : sets) {
    if (s.points.dim() != dim) {
      throw InvalidInput("set '" + s.label + "' has " + std::to_string(s.points.dim()) +
                         " objectives, expected " + std::to_string(dim));
    }
    for (auto& row : s.points.rows()) all.push_back(std::move(row));
  }
  return nondominated_filter(PointSet(all));
}

ReportDocument build_report(std::string problem, std::span<const LabeledSet> sets,
                            const ReportOptions& opts) {
  if (sets.size() < 2) throw InvalidInput("a report needs at least two algorithms");
  std::set<std::string> labels;
  for (const auto& s : sets) {
    if (!labels.insert(s.label).second) throw InvalidInput("duplicate algorithm label '" + s.label + "'");
  }
  opts.solve.validate();
  const auto start = std::chrono::steady_clock::now();
  const PointSet reference = joint_reference(sets);
  const std::size_t dim = reference.dim();

  ReportDocument doc;
  doc.problem = std::move(problem);
  doc.reference_size = reference.size();
  doc.gap_target = opts.solve.relative_gap_target;
  doc.backend = opts.solve.backend;
  if (opts.hv_reference) {
    if (opts.hv_reference->size() != dim) throw InvalidInput("HV reference point has the wrong dimension");
    doc.hv_reference = *opts.hv_reference;
  } else {
    doc.hv_reference.assign(dim, -std::numeric_limits<double>::infinity());
    for (const auto& s : sets) {
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        for (std::size_t m = 0; m < dim; ++m) {
          doc.hv_reference[m] = std::max(doc.hv_reference[m], s.points.at(i, m));
        }
      }
    }
  }

  for (const auto& s : sets) {
    const auto cell_start = std::chrono::steady_clock::now();
    IndicatorRow row;
    row.label = s.label;
    row.size = s.points.size();
    const DomSolution sol = dom(s.points, reference, opts.solve);
    row.dom = sol.value;
    row.dom_bound = sol.best_bound;
    row.status = sol.status;
    row.backend = sol.backend;
    if (s.points.size() <= kMaxExactHvPoints && dim <= kMaxExactHvObjectives) {
      row.hv = hypervolume(s.points, doc.hv_reference);
    }
    row.igd_plus = igd_plus(s.points, reference);
    row.epsilon = additive_epsilon(s.points, reference);
    row.seconds = seconds_since(cell_start);
    doc.rows.push_back(std::move(row));
  }
  std::sort(doc.rows.begin(), doc.rows.end(), [](const IndicatorRow& a, const IndicatorRow& b) {
    return a.dom != b.dom ? a.dom < b.dom : a.label < b.label;
  });
  doc.seconds = seconds_since(start);
  return doc;
}

std::vector<LabeledSet> load_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InvalidInput("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<LabeledSet> out;
  for (const auto& f : files) out.push_back({f.stem().string(), read_point_set(f)});
  return out;
}

std::string report_to_json(const ReportDocument& doc, bool deterministic) {
  json rows = json::array();
  for (const auto& r : doc.rows) {
    json j = {{"label", r.label},
              {"size", r.size},
              {"dom", r.dom},
              {"dom_bound", r.dom_bound},
              {"status", to_string(r.status)},
              {"backend", to_string(r.backend)},
              {"hv", r.hv ? json(*r.hv) : json(nullptr)},
              {"igd_plus", r.igd_plus},
              {"epsilon", r.epsilon}};
    if (!deterministic) j["seconds"] = r.seconds;
    rows.push_back(std::move(j));
  }
  json meta = {{"reference_size", doc.reference_size},
               {"hv_reference", doc.hv_reference},
               {"gap_target", doc.gap_target},
               {"backend", to_string(doc.backend)}};
  if (!deterministic) meta["seconds"] = doc.seconds;
  const json out = {{"problem", doc.problem}, {"metadata", meta}, {"rows", rows}};
  return out.dump(2) + "\n";
}

ReportDocument report_from_json(std::string_view text, std::string_view source_name) {
  const std::string where(source_name);
  try {
    const json in = json::parse(text);
    ReportDocument doc;
    doc.problem = in.at("problem").get<std::string>();
    const json& meta = in.at("metadata");
    doc.reference_size = meta.at("reference_size").get<std::size_t>();
    doc.hv_reference = meta.at("hv_reference").get<std::vector<double>>();
    doc.gap_target = meta.at("gap_target").get<double>();
    doc.backend = parse_backend(meta.at("backend").get<std::string>());
    doc.seconds = meta.value("seconds", 0.0);
    for (const auto& j : in.at("rows")) {
      IndicatorRow r;
      r.label = j.at("label").get<std::string>();
      r.size = j.at("size").get<std::size_t>();
      r.dom = j.at("dom").get<double>();
      r.dom_bound = j.value("dom_bound", r.dom);
      r.status = parse_status(j.value("status", std::string(to_string(SolveStatus::Optimal))));
      r.backend = parse_backend(j.value("backend", std::string("auto")));
      if (j.contains("hv") && !j.at("hv").is_null()) r.hv = j.at("hv").get<double>();
      r.igd_plus = j.at("igd_plus").get<double>();
      r.epsilon = j.at("epsilon").get<double>();
      r.seconds = j.value("seconds", 0.0);
      doc.rows.push_back(std::move(r));
    }
    return doc;
  } catch (const json::exception& e) {
    throw InvalidInput(where + ": malformed report: " + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(where + ": " + e.what());
  }
}

std::string report_to_text(const ReportDocument& doc) {
  std::ostringstream out;
  out << "problem " << doc.problem << "  reference " << doc.reference_size << " points  hv-ref (";
  for (std::size_t m = 0; m < doc.hv_reference.size(); ++m) {
    out << (m ? ", " : "") << sci(doc.hv_reference[m]);
  }
  out << ")\n";

  std::size_t label_width = 9;
  for (const auto& r : doc.rows) label_width = std::max(label_width, r.label.size());
  out << pad("rank", 4) << "  " << pad("algorithm", label_width, true) << pad("n", 6)
      << pad("DoM", 14) << pad("HV", 14) << pad("IGD+", 14) << pad("eps+", 14) << "  status\n";
  for (std::size_t k = 0; k < doc.rows.size(); ++k) {
    const auto& r = doc.rows[k];
    out << pad(std::to_string(k + 1), 4) << "  " << pad(r.label, label_width, true)
        << pad(std::to_string(r.size), 6) << pad(fixed(r.dom, 6), 14)
        << pad(r.hv ? fixed(*r.hv, 6) : std::string("n/a"), 14) << pad(fixed(r.igd_plus, 6), 14)
        << pad(fixed(r.epsilon, 6), 14) << "  " << to_string(r.status) << "\n";
  }
  return out.str();
}

std::vector<CorrelationTable> correlate(std::span<const ReportDocument> docs) {
  std::size_t total = 0;
  for (const auto& d : docs) total += d.rows.size();
  if (total < 3) throw InvalidInput("correlation needs at least 3 rows, got " + std::to_string(total));

  // Column order: dom, -HV, IGD+, eps+. A column that cannot be normalised
  // keeps its reason instead.
  struct Columns {
    std::vector<double> values[4];
    std::string error[4];
  };
  const std::string_view names[3] = {kNegHvColumn, kIgdPlusColumn, kEpsilonColumn};

  auto normalise = [](const std::vector<double>& raw, std::vector<double>& out, std::string& error) {
    try {
      out = minmax_normalize(raw);
    } catch (const InvalidInput& e) {
      error = e.what();
    }
  };

  std::vector<Columns> per_doc;
  for (const auto& d : docs) {
    Columns c;
    std::vector<double> raw[4];
    bool hv_missing = false;
    for (const auto& r : d.rows) {
      raw[0].push_back(r.dom);
      if (r.hv) raw[1].push_back(-*r.hv);
      else hv_missing = true;
      raw[2].push_back(r.igd_plus);
      raw[3].push_back(r.epsilon);
    }
    for (int k = 0; k < 4; ++k) {
      if (k == 1 && hv_missing) {
        c.error[1] = "hypervolume missing for some rows";
        continue;
      }
      normalise(raw[k], c.values[k], c.error[k]);
    }
    per_doc.push_back(std::move(c));
  }

  auto make_cell = [](std::string_view name, const std::vector<double>& x, const std::string& x_err,
                      const std::vector<double>& y, const std::string& y_err) {
    CorrelationCell cell;
    cell.indicator = std::string(name);
    if (!x_err.empty()) {
      cell.error = "DoM: " + x_err;
    } else if (!y_err.empty()) {
      cell.error = std::string(name) + ": " + y_err;
    } else {
      try {
        cell.result = pearson(x, y);
      } catch (const InvalidInput& e) {
        cell.error = e.what();
      }
    }
    return cell;
  };

  std::vector<CorrelationTable> tables;
  Columns combined;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    CorrelationTable t;
    t.scope = docs[d].problem;
    t.rows = docs[d].rows.size();
    const Columns& c = per_doc[d];
    for (int k = 0; k < 3; ++k) {
      t.cells.push_back(make_cell(names[k], c.values[0], c.error[0], c.values[k + 1], c.error[k + 1]));
    }
    tables.push_back(std::move(t));
    for (int k = 0; k < 4; ++k) {
      if (!c.error[k].empty() && combined.error[k].empty()) {
        combined.error[k] = docs[d].problem + ": " + c.error[k];
      }
      combined.values[k].insert(combined.values[k].end(), c.values[k].begin(), c.values[k].end());
    }
  }
  if (docs.size() > 1) {
    CorrelationTable t;
    t.scope = "combined";
    t.rows = total;
    for (int k = 0; k < 3; ++k) {
      // Per-problem errors only poison the pairs that involve the bad column.
      t.cells.push_back(make_cell(names[k], combined.values[0], combined.error[0],
                                  combined.values[k + 1], combined.error[k + 1]));
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

std::string correlation_to_json(std::span<const CorrelationTable> tables) {
  json out = json::array();
  for (const auto& t : tables) {
    json cells = json::array();
    for (const auto& c : t.cells) {
      json j = {{"indicator", c.indicator}};
      if (c.result) {
        j["r"] = c.result->r;
        j["p_value"] = c.result->p_value;
        j["n"] = c.result->n;
        j["significant"] = c.result->significant;
      } else {
        j["error"] = c.error;
      }
      cells.push_back(std::move(j));
    }
    out.push_back({{"scope", t.scope}, {"rows", t.rows}, {"cells", cells}});
  }
  return out.dump(2) + "\n";
}

std::string correlation_to_text(std::span<const CorrelationTable> tables) {
  std::size_t width = 8;
  for (const auto& t : tables) width = std::max(width, t.scope.size());
  std::ostringstream out;
  out << pad("problem", width, true);
  for (auto name : {kNegHvColumn, kIgdPlusColumn, kEpsilonColumn}) out << pad(std::string(name), 20);
  out << "\n";
  for (const auto& t : tables) {
    out << pad(t.scope, width, true);
    for (const auto& c : t.cells) {
      if (c.result) {
        // A trailing * marks cells that are not significant at the 5% level.
        std::string text = fixed(c.result->r, 4) + " (p " + sci(c.result->p_value) + ")";
        if (!c.result->significant) text += "*";
        out << pad(text, 20);
      } else {
        out << pad("error", 20);
      }
    }
    out << "\n";
  }
  for (const auto& t : tables) {
    for (const auto& c : t.cells) {
      if (!c.result) out << t.scope << " " << c.indicator << ": " << c.error << "\n";
    }
  }
  return out.str();
}

void RunSeries::validate() const {
  if (generations.empty()) throw InvalidInput("a run series needs at least one generation");
  for (std::size_t k = 1; k < generations.size(); ++k) {
    if (generations[k].first <= generations[k - 1].first) {
      throw InvalidInput("generation numbers must be strictly increasing (" +
                         std::to_string(generations[k - 1].first) + " then " +
                         std::to_string(generations[k].first) + ")");
    }
  }
  const std::size_t dim = generations.front().second.dim();
  for (const auto& [g, s] : generations) {
    if (s.dim() != dim) throw InvalidInput("generation " + std::to_string(g) + " has a different dimension");
  }
  if (terminal_reference && terminal_reference->dim() != dim) {
    throw InvalidInput("terminal reference has a different dimension");
  }
  for (long pivot : pivots) {
    const bool found = std::any_of(generations.begin(), generations.end(),
                                   [&](const auto& g) { return g.first == pivot; });
    if (!found) throw InvalidInput("pivot generation " + std::to_string(pivot) + " is not in the series");
  }
  if (pivots.empty() && !terminal_reference) throw InvalidInput("no pivots given");
}

std::vector<RunningCell> running_matrix(const RunSeries& series, const SolveOptions& opts) {
  series.validate();
  std::vector<std::pair<std::string, PointSet>> refs;
  for (long pivot : series.pivots) {
    const auto it = std::find_if(series.generations.begin(), series.generations.end(),
                                 [&](const auto& g) { return g.first == pivot; });
    refs.emplace_back(std::to_string(pivot), nondominated_filter(it->second));
  }
  if (series.terminal_reference) {
    refs.emplace_back(std::string(kTerminalPivot), nondominated_filter(*series.terminal_reference));
  }

  std::vector<RunningCell> cells;
  for (const auto& [g, set] : series.generations) {
    for (const auto& [name, ref] : refs) cells.push_back({g, name, dom(set, ref, opts).value});
  }
  return cells;
}

void write_running_csv(std::ostream& out, std::span<const RunningCell> cells) {
  out << "generation,pivot,dom\n";
  for (const auto& c : cells) out << c.generation << "," << c.pivot << "," << format_real(c.dom) << "\n";
}

RunSeries load_series(std::span<const fs::path> files, std::vector<long> pivots,
                      const std::optional<fs::path>& terminal) {
  std::map<long, fs::path> by_generation;
  for (const auto& f : files) {
    const std::string stem = f.stem().string();
    std::size_t first = stem.size();
    while (first > 0 && std::isdigit(static_cast<unsigned char>(stem[first - 1]))) --first;
    if (first == stem.size()) {
      throw InvalidInput(f.string() + ": file name carries no generation number");
    }
    const long g = std::stol(stem.substr(first));
    if (!by_generation.emplace(g, f).second) {
      throw InvalidInput("generation " + std::to_string(g) + " given twice");
    }
  }
  RunSeries series;
  for (const auto& [g, f] : by_generation) {
    if (!fs::exists(f)) throw InvalidInput("missing generation file " + f.string());
    series.generations.emplace_back(g, read_point_set(f));
  }
  series.pivots = std::move(pivots);
  if (terminal) series.terminal_reference = read_point_set(*terminal);
  series.validate();
  return series;
}

std::string solution_to_json(const DomSolution& sol, const PointSet& p, bool deterministic) {
  json moved = json::array();
  for (const auto& x : sol.moved_points) moved.push_back(point_json(x));
  json zp = json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<double> row(sol.decomposition.dim);
    for (std::size_t m = 0; m < row.size(); ++m) row[m] = sol.decomposition.zp_at(i, m);
    zp.push_back(row);
  }
  json zpq = json::array();
  for (const auto& e : sol.decomposition.zpq) {
    zpq.push_back({{"i", e.i}, {"j", e.j}, {"m", e.m}, {"value", e.value}});
  }
  json out = {{"value", sol.value},
              {"best_bound", sol.best_bound},
              {"gap", sol.gap},
              {"status", to_string(sol.status)},
              {"backend", to_string(sol.backend)},
              {"changed_points", sol.changed_points(p)},
              {"assignment", sol.assignment},
              {"moved_points", moved},
              {"decomposition", {{"zp", zp}, {"zpq", zpq}}}};
  if (sol.solver_objective) out["solver_objective"] = *sol.solver_objective;
  if (!deterministic) out["seconds"] = sol.seconds;
  return out.dump(2) + "\n";
}

std::string solution_to_text(const DomSolution& sol, const PointSet& p) {
  std::ostringstream out;
  out << "dom            " << format_real(sol.value) << "\n"
      << "bounds         [" << format_real(sol.best_bound) << ", " << format_real(sol.value) << "]\n"
      << "gap            " << format_real(sol.gap) << "\n"
      << "status         " << to_string(sol.status) << "\n"
      << "backend        " << to_string(sol.backend) << "\n"
      << "changed points " << sol.changed_points(p) << " of " << p.size() << "\n";
  return out.str();
}

}  // namespace dom
