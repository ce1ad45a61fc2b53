#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "dom/error.hpp"
#include "dom/mip_model.hpp"
#include "dom/solver.hpp"
#include "oracles.hpp"

using dom::Point;
using dom::PointSet;

namespace {

const PointSet kExampleP({{2.0, 2.5}, {3.0, 1.9}});
const PointSet kExampleQ({{2.2, 2.0}, {3.0, 1.5}});

dom::SolveOptions with_backend(dom::Backend b) {
  dom::SolveOptions o;
  o.backend = b;
  return o;
}

// Checks the invariants every DomSolution must satisfy.
void check_solution(const dom::DomSolution& sol, const PointSet& p, const PointSet& q) {
  REQUIRE(sol.moved_points.size() == p.size());
  REQUIRE(sol.assignment.size() == q.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t m = 0; m < p.dim(); ++m) {
      CHECK(sol.moved_points[i][m] <= p.at(i, m));
      total += p.at(i, m) - sol.moved_points[i][m];
    }
  }
  CHECK(total == doctest::Approx(sol.value).epsilon(1e-9));
  CHECK(sol.decomposition.total() == doctest::Approx(sol.value).epsilon(1e-9));
  for (std::size_t j = 0; j < q.size(); ++j) {
    CHECK(dom::weakly_leq(sol.moved_points[sol.assignment[j]], q[j]));
  }
  CHECK(sol.best_bound <= sol.value);
  if (sol.value > 0.0) CHECK(sol.changed_points(p) >= 1);
}

PointSet permuted(const PointSet& s, std::mt19937_64& rng) {
  std::vector<Point> rows = s.rows();
  std::shuffle(rows.begin(), rows.end(), rng);
  return PointSet(rows);
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("cover cost") {
    auto r = dom::cover_cost(Point{2.0, 2.5}, PointSet({{2.2, 2.0}}));
    CHECK(r.cost == doctest::Approx(0.5));
    CHECK(r.moved == Point{2.0, 2.0});
    r = dom::cover_cost(Point{3.0, 1.9}, PointSet({{3.0, 1.5}}));
    CHECK(r.cost == doctest::Approx(0.4));
    CHECK(r.moved == Point{3.0, 1.5});
    r = dom::cover_cost(Point{1, 1}, PointSet({{1, 2}, {3, 1}}));
    CHECK(r.cost == 0.0);
    CHECK(r.moved == Point{1, 1});
    CHECK_THROWS_AS(dom::cover_cost(Point{1, 1}, PointSet::empty(2)), dom::InvalidInput);
  }

  TEST_CASE("subset DP on the worked example") {
    const auto sol = dom::solve_dp_exact(kExampleP, kExampleQ);
    CHECK(sol.value == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(sol.assignment == std::vector<std::size_t>{0, 1});
    CHECK(sol.status == dom::SolveStatus::Optimal);
    CHECK(sol.gap == 0.0);
    check_solution(sol, kExampleP, kExampleQ);
  }

  TEST_CASE("subset DP: equal sets and the ten-objective pair") {
    CHECK(dom::solve_dp_exact(kExampleP, kExampleP).value == 0.0);
    Point a(10, 0.0);
    a.back() = 1.0;
    Point b(10, 1.0);
    b.back() = 0.0;
    CHECK(dom::solve_dp_exact(PointSet({a}), PointSet({b})).value == 1.0);
    CHECK(dom::solve_dp_exact(PointSet({b}), PointSet({a})).value == 9.0);
  }

  TEST_CASE("subset DP matches assignment enumeration") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t dim = 1 + trial % 4;
      const PointSet p = oracle::random_set(rng, 1 + trial % 5, dim);
      const PointSet q = oracle::random_set(rng, 1 + (trial / 3) % 6, dim);
      const auto sol = dom::solve_dp_exact(p, q);
      CHECK(sol.value == doctest::Approx(oracle::dom_by_assignment(p, q)).epsilon(1e-12));
      check_solution(sol, p, q);
    }
  }

  TEST_CASE("subset DP size limit") {
    std::mt19937_64 rng(42);
    const PointSet q = oracle::random_front(rng, 6, 3);
    CHECK_THROWS_AS(dom::solve_dp_exact(kExampleP.merged_with(kExampleP), PointSet({{1, 1}}), 0), dom::BackendError);
    CHECK_THROWS_AS(dom::solve_dp_exact(q, q, 5), dom::BackendError);
    CHECK_NOTHROW(dom::solve_dp_exact(q, q, 6));
  }

  TEST_CASE("pipeline on the worked example") {
    for (auto b : {dom::Backend::Auto, dom::Backend::ExactDp, dom::Backend::Exact2d}) {
      const auto sol = dom::dom(kExampleP, kExampleQ, with_backend(b));
      CHECK(sol.value == doctest::Approx(0.9).epsilon(1e-12));
      check_solution(sol, kExampleP, kExampleQ);
    }
    CHECK(dom::dom(kExampleP, kExampleQ).backend == dom::Backend::Exact2d);
  }

  TEST_CASE("pipeline short-circuits when P already covers Q") {
    dom::SolveOptions o;
    o.dp_size_limit = 0;  // any backend call would throw
    const PointSet p({{0, 0, 0}});
    const PointSet q({{1, 1, 1}, {0, 2, 0}});
    const auto sol = dom::dom(p, q, o);
    CHECK(sol.value == 0.0);
    CHECK(sol.assignment == std::vector<std::size_t>{0, 0});
    check_solution(sol, p, q);
  }

  TEST_CASE("pipeline maps reduced indices back") {
    // Dominated P points, Q points covered for free and Q points absorbed by
    // other Q points all exercise a different index map.
    const PointSet p({{5, 5, 5}, {1, 4, 4}, {4, 1, 4}, {0, 9, 9}});
    const PointSet q({{2, 2, 2}, {3, 3, 3}, {9, 9, 0}, {0, 9, 9}, {2, 3, 2}});
    const auto sol = dom::dom(p, q);
    CHECK(sol.value == doctest::Approx(oracle::dom_by_assignment(p, q)).epsilon(1e-12));
    check_solution(sol, p, q);
  }

  TEST_CASE("backend resolution") {
    dom::SolveOptions o;
    CHECK(dom::resolve_backend(o, 50, 2) == dom::Backend::Exact2d);
    CHECK(dom::resolve_backend(o, 20, 3) == dom::Backend::ExactDp);
    CHECK_THROWS_AS(dom::resolve_backend(o, 21, 3), dom::BackendError);
    o.external_command = "true";
    CHECK(dom::resolve_backend(o, 21, 3) == dom::Backend::External);
    CHECK_THROWS_AS(dom::resolve_backend(with_backend(dom::Backend::Exact2d), 3, 3), dom::BackendError);
    CHECK_THROWS_AS(with_backend(dom::Backend::External).validate(), dom::InvalidInput);
    dom::SolveOptions bad;
    bad.relative_gap_target = -1.0;
    CHECK_THROWS_AS(bad.validate(), dom::InvalidInput);
    CHECK_THROWS_AS(dom::dom(kExampleP, PointSet({{1, 2, 3}})), dom::InvalidInput);
  }

  TEST_CASE("value invariances") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> shift(-20.0, 20.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t dim = 2 + trial % 3;
      const PointSet p = oracle::random_set(rng, 5, dim);
      const PointSet q = oracle::random_set(rng, 5, dim);
      const double base = dom::dom(p, q).value;
      Point t(dim);
      for (auto& v : t) v = shift(rng);
      CHECK(dom::dom(p.shifted(t), q.shifted(t)).value == doctest::Approx(base).epsilon(1e-9));
      const double c = scale(rng);
      auto scaled = [&](const PointSet& s) {
        std::vector<Point> rows = s.rows();
        for (auto& r : rows) {
          for (auto& v : r) v *= c;
        }
        return PointSet(rows);
      };
      CHECK(dom::dom(scaled(p), scaled(q)).value == doctest::Approx(c * base).epsilon(1e-9));
      CHECK(dom::dom(permuted(p, rng), permuted(q, rng)).value == doctest::Approx(base).epsilon(1e-9));
    }
  }

  TEST_CASE("solution file parsing") {
    const auto model = dom::build_model(kExampleP, kExampleQ);
    std::istringstream good("# from a solver\nstatus optimal\nobjective 0.9\nbound 0.85\nzp_1_2 0.05\nxp_1 1\n");
    const auto r = dom::parse_solution(good, model);
    CHECK(r.objective == 0.9);
    CHECK(r.bound == 0.85);
    CHECK(r.status == "optimal");
    CHECK(r.valuation[model.zp(0, 1).value] == 0.05);
    CHECK(r.valuation[model.xp(0).value] == 1.0);
    CHECK(r.valuation[model.xp(1).value] == 0.0);

    auto error_of = [&](const std::string& text) -> std::string {
      std::istringstream in(text);
      try {
        dom::parse_solution(in, model, "x.sol");
      } catch (const dom::BackendError& e) {
        return e.what();
      }
      return {};
    };
    CHECK(error_of("objective 1\nzz_9 1\n").find("'zz_9'") != std::string::npos);
    CHECK(error_of("objective 1\nxp_1 abc\n").find("'abc'") != std::string::npos);
    CHECK(error_of("objective 1\nxp_1 1\nxp_1 0\n").find("duplicate") != std::string::npos);
    CHECK(error_of("xp_1 1\n").find("objective") != std::string::npos);
    CHECK(error_of("status infeasible\n").find("infeasible") != std::string::npos);
    CHECK(error_of("objective 1 2\n").find("x.sol:1") != std::string::npos);
  }

  TEST_CASE("command template expansion") {
    CHECK(dom::expand_command("solve {lp_file} -o {sol_file} -g {gap} -t {time_limit}", "a.lp", "a.sol", 0.1,
                              std::nullopt) == "solve a.lp -o a.sol -g 0.10000000000000001 -t none");
    CHECK(dom::expand_command("{time_limit}{time_limit}", "", "", 0, 2.5) == "2.52.5");
  }

  TEST_CASE("reconstruction from the worked example's valuation") {
    const auto model = dom::build_model(kExampleP, kExampleQ);
    std::vector<double> v(model.variables().size(), 0.0);
    v[model.zp(0, 1).value] = 0.05;
    v[model.zpq(0, 0, 1).value] = 0.45;
    v[model.zp(1, 1).value] = 0.40;
    v[model.phat(0, 0).value] = 2.0;
    v[model.phat(0, 1).value] = 2.45;
    v[model.phat(1, 0).value] = 3.0;
    v[model.phat(1, 1).value] = 1.5;
    v[model.xp(0).value] = 1;
    v[model.xp(1).value] = 1;
    v[model.xpq(0, 0).value] = 1;
    v[model.xpq(1, 1).value] = 1;
    v[model.xpqd(0, 0, 1).value] = 1;
    const dom::Translation identity{Point(2, 0.0)};

    const auto sol = dom::reconstruct_solution(model, v, kExampleP, kExampleQ, identity);
    CHECK(sol.value == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(sol.moved_points[0][0] == doctest::Approx(2.0));
    CHECK(sol.moved_points[0][1] == doctest::Approx(2.0));
    CHECK(sol.moved_points[1][0] == doctest::Approx(3.0));
    CHECK(sol.moved_points[1][1] == doctest::Approx(1.5));
    CHECK(sol.decomposition.zp_at(0, 1) == doctest::Approx(0.05));
    CHECK(sol.decomposition.zpq_at(0, 0, 1) == doctest::Approx(0.45));
    CHECK(sol.assignment == std::vector<std::size_t>{0, 1});
    check_solution(sol, kExampleP, kExampleQ);

    auto fuzzy = v;
    fuzzy[model.xpqd(0, 0, 1).value] = 0.49;
    CHECK_THROWS_AS(dom::reconstruct_solution(model, fuzzy, kExampleP, kExampleQ, identity), dom::VerificationError);

    auto infeasible = v;
    infeasible[model.zpq(0, 0, 1).value] = 0.2;  // leaves q_1 uncovered
    CHECK_THROWS_AS(dom::reconstruct_solution(model, infeasible, kExampleP, kExampleQ, identity),
                    dom::VerificationError);

    auto double_claim = v;
    double_claim[model.xpq(1, 0).value] = 1;
    CHECK_THROWS(dom::reconstruct_solution(model, double_claim, kExampleP, kExampleQ, identity));
  }

  TEST_CASE("reconstruction removes solver feasibility slack") {
    const auto model = dom::build_model(kExampleP, kExampleQ);
    std::vector<double> v(model.variables().size(), 0.0);
    // The worked example's valuation, short by 4e-7 on the shared move.
    v[model.zp(0, 1).value] = 0.05;
    v[model.zpq(0, 0, 1).value] = 0.45 - 4e-7;
    v[model.zp(1, 1).value] = 0.40;
    v[model.phat(0, 0).value] = 2.0;
    v[model.phat(0, 1).value] = 2.45;
    v[model.phat(1, 0).value] = 3.0;
    v[model.phat(1, 1).value] = 1.5;
    v[model.xp(0).value] = 1;
    v[model.xp(1).value] = 1;
    v[model.xpq(0, 0).value] = 1;
    v[model.xpq(1, 1).value] = 1;
    v[model.xpqd(0, 0, 1).value] = 1;

    const auto sol = dom::reconstruct_solution(model, v, kExampleP, kExampleQ, dom::Translation{Point(2, 0.0)});
    CHECK(sol.moved_points[0][1] == 2.0);
    CHECK(sol.value == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(sol.decomposition.zp_at(0, 1) + sol.decomposition.zpq_at(0, 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    REQUIRE(sol.solver_objective.has_value());
    CHECK(*sol.solver_objective < sol.value);
    check_solution(sol, kExampleP, kExampleQ);
  }

  TEST_CASE("reconstruction of the identity valuation") {
    const PointSet p({{1, 2}, {2, 1}});
    const PointSet q({{1.5, 2.5}, {3, 1}});
    const auto model = dom::build_model(p, q);
    std::vector<double> v(model.variables().size(), 0.0);
    for (std::size_t i = 0; i < 2; ++i) {
      v[model.xp(i).value] = 1;
      v[model.xpq(i, i).value] = 1;
      for (std::size_t m = 0; m < 2; ++m) v[model.phat(i, m).value] = p.at(i, m);
    }
    const auto sol = dom::reconstruct_solution(model, v, p, q, dom::Translation{Point(2, 0.0)});
    CHECK(sol.value == 0.0);
    CHECK(sol.moved_points == p.rows());
  }

  TEST_CASE("relative gap") {
    CHECK(dom::relative_gap(2.0, 1.5) == 0.25);
    CHECK(dom::relative_gap(0.0, 0.0) == 0.0);
  }
}
