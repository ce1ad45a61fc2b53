#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dom/csv.hpp"
#include "dom/error.hpp"
#include "dom/harness.hpp"
#include "dom/solver.hpp"
#include "oracles.hpp"

using dom::LabeledSet;
using dom::Point;
using dom::PointSet;

namespace fs = std::filesystem;

namespace {

dom::IndicatorRow row(std::string label, double d, double hv, double igd, double eps) {
  dom::IndicatorRow r;
  r.label = std::move(label);
  r.dom = d;
  r.hv = hv;
  r.igd_plus = igd;
  r.epsilon = eps;
  return r;
}

// Archives that only ever improve: each generation adds points and keeps the
// non-dominated ones.
std::vector<PointSet> cumulative_archives(std::mt19937_64& rng, std::size_t generations, std::size_t dim) {
  std::vector<PointSet> out;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pool;
  for (std::size_t g = 0; g < generations; ++g) {
    const double level = 2.0 - static_cast<double>(g) / static_cast<double>(generations);
    for (int k = 0; k < 4; ++k) {
      Point x(dim);
      double sum = 0.0;
      for (auto& v : x) sum += (v = u(rng) + 1e-3);
      for (auto& v : x) v = level * v / sum + 0.2 * u(rng);
      pool.push_back(x);
    }
    out.push_back(dom::nondominated_filter(PointSet(pool)));
  }
  return out;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("report: a dominating algorithm ranks first with zero DoM") {
    const std::vector<LabeledSet> sets{{"worse", PointSet({{2, 3}, {3, 2}})}, {"better", PointSet({{1, 2}, {2, 1}})}};
    const auto doc = dom::build_report("toy", sets);
    REQUIRE(doc.rows.size() == 2);
    CHECK(doc.rows[0].label == "better");
    CHECK(doc.rows[0].dom == 0.0);
    CHECK(doc.rows[1].dom > 0.0);
    CHECK(doc.reference_size == 2);
    CHECK(doc.hv_reference == Point{3, 3});
    CHECK(doc.rows[0].hv == doctest::Approx(3.0));
    CHECK(doc.rows[0].igd_plus == 0.0);
    CHECK(doc.rows[0].epsilon == 0.0);
  }

  TEST_CASE("report: cells equal independent recomputation") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<LabeledSet> sets;
      for (int a = 0; a < 3; ++a) sets.push_back({"alg" + std::to_string(a), oracle::random_set(rng, 5, 3)});
      const auto doc = dom::build_report("random", sets);
      const PointSet joint = dom::joint_reference(sets);
      for (std::size_t k = 0; k + 1 < doc.rows.size(); ++k) CHECK(doc.rows[k].dom <= doc.rows[k + 1].dom);
      for (const auto& r : doc.rows) {
        const auto& s = std::find_if(sets.begin(), sets.end(), [&](const auto& x) { return x.label == r.label; })->points;
        CHECK(r.dom == doctest::Approx(oracle::dom_by_assignment(s, joint)).epsilon(1e-12));
        CHECK(r.igd_plus == doctest::Approx(oracle::igd_plus_loops(s, joint)).epsilon(1e-12));
        CHECK(r.epsilon == doctest::Approx(oracle::additive_epsilon_loops(s, joint)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("report: ties broken by label, contract errors") {
    const PointSet s({{1, 2}, {2, 1}});
    const std::vector<LabeledSet> tied{{"zeta", s}, {"alpha", s}};
    const auto doc = dom::build_report("tie", tied);
    CHECK(doc.rows[0].label == "alpha");
    CHECK_THROWS_AS(dom::build_report("one", std::vector<LabeledSet>{{"a", s}}), dom::InvalidInput);
    CHECK_THROWS_AS(dom::build_report("dup", std::vector<LabeledSet>{{"a", s}, {"a", s}}), dom::InvalidInput);
    CHECK_THROWS_AS(dom::build_report("dims", std::vector<LabeledSet>{{"a", s}, {"b", PointSet({{1, 2, 3}})}}),
                    dom::InvalidInput);
    dom::ReportOptions o;
    o.hv_reference = Point{10, 10};
    CHECK(dom::build_report("ref", tied, o).hv_reference == Point{10, 10});
  }

  TEST_CASE("report JSON round trip and determinism") {
    std::mt19937_64 rng(72);
    const std::vector<LabeledSet> sets{{"a", oracle::random_set(rng, 4, 3)}, {"b", oracle::random_set(rng, 4, 3)}};
    const auto doc = dom::build_report("p", sets);
    const std::string text = dom::report_to_json(doc, true);
    CHECK(text == dom::report_to_json(dom::build_report("p", sets), true));
    CHECK(text.find("seconds") == std::string::npos);
    CHECK(dom::report_to_json(doc, false).find("seconds") != std::string::npos);
    const auto back = dom::report_from_json(text);
    CHECK(dom::report_to_json(back, true) == text);
    CHECK_THROWS_AS(dom::report_from_json("{\"problem\": 3}", "bad.json"), dom::InvalidInput);
    CHECK(dom::report_to_text(doc).find("rank") != std::string::npos);
  }

  TEST_CASE("correlate: exact relationships and per-cell errors") {
    dom::ReportDocument doc;
    doc.problem = "p";
    doc.rows = {row("a", 1, -1, 5, 3), row("b", 2, -2, 4, 3), row("c", 4, -4, 9, 3)};
    auto tables = dom::correlate(std::vector<dom::ReportDocument>{doc});
    REQUIRE(tables.size() == 1);
    REQUIRE(tables[0].cells[0].result.has_value());
    CHECK(tables[0].cells[0].result->r == doctest::Approx(1.0));
    CHECK(tables[0].cells[1].result.has_value());
    CHECK_FALSE(tables[0].cells[2].result.has_value());  // constant epsilon column
    CHECK(tables[0].cells[2].error.find("variance") != std::string::npos);

    for (auto& r : doc.rows) r.dom = 7.0;
    tables = dom::correlate(std::vector<dom::ReportDocument>{doc});
    for (const auto& c : tables[0].cells) CHECK_FALSE(c.result.has_value());

    dom::ReportDocument small;
    small.problem = "s";
    small.rows = {row("a", 1, 1, 1, 1), row("b", 2, 2, 2, 2)};
    CHECK_THROWS_AS(dom::correlate(std::vector<dom::ReportDocument>{small}), dom::InvalidInput);
  }

  TEST_CASE("correlate: per-problem normalisation and combined table") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<dom::ReportDocument> docs(2);
    std::vector<double> dom_norm, hv_norm, igd_norm;
    for (int d = 0; d < 2; ++d) {
      docs[d].problem = "prob" + std::to_string(d);
      const double scale = d == 0 ? 1.0 : 100.0;
      std::vector<double> dv, hv, ig;
      for (int k = 0; k < 10; ++k) {
        dv.push_back(scale * u(rng));
        hv.push_back(scale * u(rng));
        ig.push_back(dv.back() + scale * 0.3 * u(rng));
        docs[d].rows.push_back(row("r" + std::to_string(k), dv.back(), hv.back(), ig.back(), u(rng)));
      }
      std::vector<double> neg_hv;
      for (double h : hv) neg_hv.push_back(-h);
      for (double v : dom::minmax_normalize(dv)) dom_norm.push_back(v);
      for (double v : dom::minmax_normalize(neg_hv)) hv_norm.push_back(v);
      for (double v : dom::minmax_normalize(ig)) igd_norm.push_back(v);
    }
    const auto tables = dom::correlate(docs);
    REQUIRE(tables.size() == 3);
    CHECK(tables[2].scope == "combined");
    CHECK(tables[2].rows == 20);
    CHECK(std::abs(tables[2].cells[0].result->r - oracle::pearson_r(dom_norm, hv_norm)) <= 1e-6);
    CHECK(std::abs(tables[2].cells[1].result->r - oracle::pearson_r(dom_norm, igd_norm)) <= 1e-6);
    const std::vector<double> first_dom(dom_norm.begin(), dom_norm.begin() + 10);
    const std::vector<double> first_igd(igd_norm.begin(), igd_norm.begin() + 10);
    CHECK(std::abs(tables[0].cells[1].result->r - oracle::pearson_r(first_dom, first_igd)) <= 1e-6);
    CHECK(dom::correlation_to_json(tables).find("combined") != std::string::npos);
    CHECK(dom::correlation_to_text(tables).find("IGD+") != std::string::npos);
  }

  TEST_CASE("running matrix on cumulative archives") {
    std::mt19937_64 rng(74);
    for (int trial = 0; trial < 10; ++trial) {
      const auto archives = cumulative_archives(rng, 5, 2 + trial % 2);
      dom::RunSeries series;
      for (std::size_t g = 0; g < archives.size(); ++g) series.generations.emplace_back(10 * (g + 1), archives[g]);
      series.pivots = {10, 30, 50};
      series.terminal_reference = archives.back();
      const auto cells = dom::running_matrix(series);
      CHECK(cells.size() == 5 * 4);
      for (const auto& c : cells) {
        if (c.pivot == std::to_string(c.generation)) CHECK(c.dom == 0.0);
      }
      for (std::size_t k = 4; k < cells.size(); ++k) {
        CHECK(cells[k].pivot == cells[k - 4].pivot);
        CHECK(cells[k].dom <= cells[k - 4].dom + 1e-9);
      }
    }
  }

  TEST_CASE("running matrix contract") {
    const PointSet s({{1, 2}, {2, 1}});
    dom::RunSeries one;
    one.generations = {{7, s}};
    one.pivots = {7};
    const auto cells = dom::running_matrix(one);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].dom == 0.0);
    std::ostringstream csv;
    dom::write_running_csv(csv, cells);
    CHECK(csv.str() == "generation,pivot,dom\n7,7,0\n");

    dom::RunSeries bad = one;
    bad.pivots = {8};
    CHECK_THROWS_AS(dom::running_matrix(bad), dom::InvalidInput);
    bad = one;
    bad.generations.emplace_back(3, s);
    CHECK_THROWS_AS(bad.validate(), dom::InvalidInput);
  }

  TEST_CASE("series and directory loading") {
    const fs::path dir = fs::temp_directory_path() / "dom-harness-test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    dom::write_point_set(dir / "run_gen020.csv", PointSet({{1, 1}}));
    dom::write_point_set(dir / "run_gen010.csv", PointSet({{2, 2}}));
    const std::vector<fs::path> files{dir / "run_gen020.csv", dir / "run_gen010.csv"};
    const auto series = dom::load_series(files, {20}, std::nullopt);
    CHECK(series.generations[0].first == 10);
    CHECK(series.generations[1].first == 20);
    const std::vector<fs::path> missing{dir / "run_gen030.csv"};
    CHECK_THROWS_AS(dom::load_series(missing, {30}, std::nullopt), dom::InvalidInput);
    const std::vector<fs::path> unnumbered{dir / "run.csv"};
    CHECK_THROWS_AS(dom::load_series(unnumbered, {}, std::nullopt), dom::InvalidInput);

    const auto sets = dom::load_directory(dir);
    REQUIRE(sets.size() == 2);
    CHECK(sets[0].label == "run_gen010");
    fs::remove_all(dir);
  }

  TEST_CASE("solution rendering") {
    const PointSet p({{2.0, 2.5}, {3.0, 1.9}});
    const PointSet q({{2.2, 2.0}, {3.0, 1.5}});
    const auto sol = dom::dom(p, q);
    const std::string json = dom::solution_to_json(sol, p, true);
    CHECK(json == dom::solution_to_json(dom::dom(p, q), p, true));
    CHECK(json.find("\"changed_points\": 2") != std::string::npos);
    const std::string text = dom::solution_to_text(sol, p);
    CHECK(text.find("status         optimal") != std::string::npos);
    CHECK(text.find("changed points 2 of 2") != std::string::npos);
  }
}
