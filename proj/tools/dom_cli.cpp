// dom: dominance move and companion indicators from the command line.
//
// Exit codes: 0 success, 2 input error, 3 backend error, 4 verification
// failure.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dom/dom.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitBackend = 3;
constexpr int kExitVerification = 4;

struct GlobalFlags {
  std::string backend = "auto";
  double gap = 1e-8;
  std::optional<double> time_limit;
  std::optional<std::string> external_cmd;
  std::size_t dp_limit = 20;
  std::vector<double> hv_ref;
  bool deterministic = false;
  std::optional<std::string> json_path;
};

dom::SolveOptions solve_options(const GlobalFlags& g) {
  dom::SolveOptions o;
  o.backend = dom::parse_backend(g.backend);
  o.relative_gap_target = g.gap;
  o.time_limit = g.time_limit;
  o.dp_size_limit = g.dp_limit;
  if (g.external_cmd) {
    o.external_command = g.external_cmd;
  } else if (const char* env = std::getenv("DOM_EXTERNAL_CMD"); env != nullptr && *env != '\0') {
    o.external_command = env;
  }
  o.validate();
  return o;
}

void write_json(const GlobalFlags& g, const std::string& text) {
  if (!g.json_path) return;
  if (*g.json_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(*g.json_path, std::ios::binary);
  if (!out) throw dom::InvalidInput("cannot write " + *g.json_path);
  out << text;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dom::InvalidInput("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_model(const dom::PointSet& p, const dom::PointSet& q, const std::string& target) {
  const dom::TranslatedPair shifted = dom::translate_nonnegative(p, q);
  if (!shifted.translation.is_identity()) {
    std::cerr << "note: coordinates shifted by (";
    for (std::size_t m = 0; m < shifted.translation.offset.size(); ++m) {
      std::cerr << (m ? ", " : "") << dom::format_real(shifted.translation.offset[m]);
    }
    std::cerr << ") to make them nonnegative\n";
  }
  const dom::DomMipModel model = dom::build_model(shifted.p, shifted.q);
  if (target == "-") {
    dom::emit_lp(model, std::cout);
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw dom::InvalidInput("cannot write " + target);
  dom::emit_lp(model, out);
}

std::pair<dom::PointSet, dom::PointSet> read_pair(const std::string& p_file, const std::string& q_file) {
  dom::PointSet p = dom::read_point_set(p_file);
  dom::PointSet q = dom::read_point_set(q_file);
  if (p.dim() != q.dim()) {
    throw dom::InvalidInput(p_file + " has " + std::to_string(p.dim()) + " objectives but " + q_file +
                            " has " + std::to_string(q.dim()));
  }
  return {std::move(p), std::move(q)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dominance move (DoM) between point sets, with HV, IGD+ and additive epsilon"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--backend", g.backend, "auto, exact-dp, exact-2d or external")
      ->check(CLI::IsMember({"auto", "exact-dp", "exact-2d", "external"}));
  app.add_option("--gap", g.gap, "Relative MIP gap target")->check(CLI::Range(0.0, 1.0));
  app.add_option("--time-limit", g.time_limit, "External solver time limit in seconds");
  app.add_option("--external-cmd", g.external_cmd,
                 "Solver command template using {lp_file}, {sol_file}, {gap}, {time_limit}; "
                 "defaults to $DOM_EXTERNAL_CMD");
  app.add_option("--dp-limit", g.dp_limit, "Largest reduced |Q| for the subset DP");
  app.add_option("--hv-ref", g.hv_ref, "Hypervolume reference point (report)")->delimiter(',');
  app.add_flag("--deterministic", g.deterministic, "Omit timings from JSON output");
  app.add_option("--json", g.json_path, "Also write JSON to this path ('-' for stdout)");

  std::string p_file;
  std::string q_file;
  std::optional<std::string> emit_path;
  auto* compute = app.add_subcommand("compute", "DoM(P, Q) for two CSV point sets");
  compute->add_option("p", p_file, "CSV file for P")->required();
  compute->add_option("q", q_file, "CSV file for Q")->required();
  compute->add_option("--emit-lp", emit_path, "Write the MIP model here instead of solving");

  std::string lp_out = "-";
  auto* emit = app.add_subcommand("emit-lp", "Write the MIP model for (P, Q) in LP format");
  emit->add_option("p", p_file, "CSV file for P")->required();
  emit->add_option("q", q_file, "CSV file for Q")->required();
  emit->add_option("-o,--output", lp_out, "Output path ('-' for stdout)");

  std::vector<std::string> report_inputs;
  std::string problem;
  auto* report = app.add_subcommand("report", "Rank algorithms against their joint non-dominated set");
  report->add_option("inputs", report_inputs, "A directory of CSV files, or two or more CSV files")
      ->required();
  report->add_option("--problem", problem, "Problem label (default: directory or first file name)");

  std::vector<std::string> report_files;
  auto* corr = app.add_subcommand("correlate", "Pearson correlation of DoM with -HV, IGD+ and eps+");
  corr->add_option("reports", report_files, "Report JSON files")->required()->check(CLI::ExistingFile);

  std::vector<std::string> generation_files;
  std::vector<long> pivots;
  std::optional<std::string> terminal;
  auto* running = app.add_subcommand("running", "DoM of every generation against pivot generations");
  running->add_option("generations", generation_files,
                      "Generation CSV files; the trailing digits of each name give the generation")
      ->required();
  running->add_option("--pivot", pivots, "Pivot generation (repeatable)");
  running->add_option("--terminal", terminal, "Extra reference set, e.g. a final joint front");

  std::size_t np = 0;
  std::size_t nq = 0;
  std::size_t nm = 0;
  auto* size = app.add_subcommand("size", "Closed-form variable and constraint counts of the model");
  size->add_option("np", np, "|P|")->required();
  size->add_option("nq", nq, "|Q|")->required();
  size->add_option("m", nm, "Number of objectives")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*compute) {
      const auto [p, q] = read_pair(p_file, q_file);
      if (emit_path) {
        write_model(p, q, *emit_path);
        return 0;
      }
      const dom::DomSolution sol = dom::dom(p, q, solve_options(g));
      std::cout << dom::solution_to_text(sol, p);
      write_json(g, dom::solution_to_json(sol, p, g.deterministic));
      const bool ok = sol.status == dom::SolveStatus::Optimal || sol.status == dom::SolveStatus::WithinGap;
      return ok ? 0 : kExitBackend;
    }
    if (*emit) {
      const auto [p, q] = read_pair(p_file, q_file);
      write_model(p, q, lp_out);
      return 0;
    }
    if (*report) {
      std::vector<dom::LabeledSet> sets;
      if (report_inputs.size() == 1 && fs::is_directory(report_inputs.front())) {
        sets = dom::load_directory(report_inputs.front());
        if (problem.empty()) problem = fs::path(report_inputs.front()).lexically_normal().filename().string();
      } else {
        for (const auto& f : report_inputs) sets.push_back({fs::path(f).stem().string(), dom::read_point_set(f)});
        if (problem.empty()) problem = fs::path(report_inputs.front()).parent_path().filename().string();
      }
      if (problem.empty()) problem = "problem";
      dom::ReportOptions ro;
      ro.solve = solve_options(g);
      if (!g.hv_ref.empty()) ro.hv_reference = g.hv_ref;
      const dom::ReportDocument doc = dom::build_report(problem, sets, ro);
      std::cout << dom::report_to_text(doc);
      write_json(g, dom::report_to_json(doc, g.deterministic));
      return 0;
    }
    if (*corr) {
      std::vector<dom::ReportDocument> docs;
      for (const auto& f : report_files) docs.push_back(dom::report_from_json(slurp(f), f));
      const auto tables = dom::correlate(docs);
      std::cout << dom::correlation_to_text(tables);
      write_json(g, dom::correlation_to_json(tables));
      return 0;
    }
    if (*running) {
      std::vector<fs::path> files(generation_files.begin(), generation_files.end());
      std::optional<fs::path> terminal_path;
      if (terminal) terminal_path = *terminal;
      const dom::RunSeries series = dom::load_series(files, pivots, terminal_path);
      const auto cells = dom::running_matrix(series, solve_options(g));
      dom::write_running_csv(std::cout, cells);
      return 0;
    }
    if (*size) {
      const dom::ModelCounts c = dom::model_size(np, nq, nm);
      std::cout << "continuous  " << c.continuous << "\n"
                << "binary      " << c.binary << "\n"
                << "constraints " << c.constraints << "\n";
      return 0;
    }
  } catch (const dom::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const dom::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitVerification;
  } catch (const dom::BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  }
  return 0;
}
