#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "dom/error.hpp"
#include "dom/solver.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

using dom::Point;
using dom::PointSet;

namespace {

const PointSet kExampleP({{2.0, 2.5}, {3.0, 1.9}});
const PointSet kExampleQ({{2.2, 2.0}, {3.0, 1.5}});

// A stand-in solver that ignores the model and reports the worked example's
// hand-made optimum.
const char* const kCannedSolver = R"(#!/bin/sh
sol="$2"
cat > "$sol" <<SOL
# canned answer
status optimal
objective 0.9
bound 0.9
zp_1_2 0.05
zpq_1_1_2 0.45
zp_2_2 0.40
phat_1_1 2.0
phat_1_2 2.45
phat_2_1 3.0
phat_2_2 1.5
xp_1 1
xp_2 1
xpq_1_1 1
xpq_2_2 1
xpqd_1_1_2 1
SOL
)";

dom::SolveOptions external(const std::string& command) {
  dom::SolveOptions o;
  o.backend = dom::Backend::External;
  o.external_command = command;
  return o;
}

std::string milp_call(const std::string& lp, const std::string& sol, const std::string& gap,
                      const std::string& time_limit) {
  return std::string(DOM_PYTHON) + " " + DOM_MILP_SOLVE + " " + lp + " " + sol + " --gap " + gap +
         " --time-limit " + time_limit;
}

std::string milp_command() { return milp_call("{lp_file}", "{sol_file}", "{gap}", "{time_limit}"); }

std::string backend_error(const PointSet& p, const PointSet& q, const dom::SolveOptions& o) {
  try {
    dom::dom(p, q, o);
  } catch (const dom::BackendError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("external") {
  TEST_CASE("canned solver output is reconstructed and verified") {
    scratch::Dir dir("dom-ext");
    scratch::write_file(dir / "solver.sh", kCannedSolver, true);
    const auto sol = dom::dom(kExampleP, kExampleQ, external((dir / "solver.sh").string() + " {lp_file} {sol_file}"));
    CHECK(sol.value == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(sol.status == dom::SolveStatus::Optimal);
    CHECK(sol.backend == dom::Backend::External);
    CHECK(sol.solver_objective == doctest::Approx(0.9));
    CHECK(sol.decomposition.zpq_at(0, 0, 1) == doctest::Approx(0.45));
    CHECK(sol.decomposition.total() == doctest::Approx(0.9));
  }

  TEST_CASE("solver failures become backend errors") {
    scratch::Dir dir("dom-ext");
    scratch::write_file(dir / "fail.sh", "#!/bin/sh\necho boom >&2\nexit 3\n", true);
    scratch::write_file(dir / "silent.sh", "#!/bin/sh\nexit 0\n", true);
    scratch::write_file(dir / "alien.sh", "#!/bin/sh\nprintf 'objective 1\\nnope_1 2\\n' > \"$2\"\n", true);
    scratch::write_file(dir / "infeasible.sh", "#!/bin/sh\nprintf 'status infeasible\\n' > \"$2\"\n", true);
    auto run = [&](const std::string& script) {
      return backend_error(kExampleP, kExampleQ, external((dir / script).string() + " {lp_file} {sol_file}"));
    };
    const std::string fail = run("fail.sh");
    CHECK(fail.find("exit status 3") != std::string::npos);
    CHECK(fail.find("boom") != std::string::npos);
    CHECK(run("silent.sh").find("no solution file") != std::string::npos);
    CHECK(run("alien.sh").find("'nope_1'") != std::string::npos);
    CHECK(run("infeasible.sh").find("infeasible") != std::string::npos);
  }

  TEST_CASE("placeholders reach the solver") {
    scratch::Dir dir("dom-ext");
    const std::string log = (dir / "args").string();
    scratch::write_file(dir / "echo.sh", "#!/bin/sh\necho \"$3 $4\" > " + log + "\nexit 1\n", true);
    auto o = external((dir / "echo.sh").string() + " {lp_file} {sol_file} {gap} {time_limit}");
    o.relative_gap_target = 0.25;
    o.time_limit = 30;
    CHECK_FALSE(backend_error(kExampleP, kExampleQ, o).empty());
    CHECK(scratch::read_file(log) == "0.25 30\n");
  }

  TEST_CASE("real MIP solver" * doctest::skip(!DOM_HAVE_SCIPY)) {
    SUBCASE("worked example") {
      const auto sol = dom::dom(kExampleP, kExampleQ, external(milp_command()));
      CHECK(std::abs(sol.value - 0.9) <= 1e-9);
      CHECK(sol.status == dom::SolveStatus::Optimal);
    }
    SUBCASE("agrees with the subset DP") {
      std::mt19937_64 rng(81);
      for (int trial = 0; trial < 10; ++trial) {
        const PointSet p = oracle::random_set(rng, 5, 3);
        const PointSet q = oracle::random_set(rng, 5, 3);
        const auto sol = dom::dom(p, q, external(milp_command()));
        CHECK(std::abs(sol.value - dom::solve_dp_exact(p, q).value) <= 1e-6);
      }
    }
    SUBCASE("negative coordinates are shifted and shifted back") {
      const PointSet p = kExampleP.shifted(Point{-10.0, -3.0});
      const PointSet q = kExampleQ.shifted(Point{-10.0, -3.0});
      const auto sol = dom::dom(p, q, external(milp_command()));
      CHECK(std::abs(sol.value - 0.9) <= 1e-9);
      CHECK(sol.moved_points[0][0] == doctest::Approx(-8.0));
      CHECK(sol.moved_points[0][1] == doctest::Approx(-1.0));
    }
  }

  TEST_CASE("gap status from the reported bound" * doctest::skip(!DOM_HAVE_SCIPY)) {
    // Wraps the real solver and then weakens the bound by 5%.
    scratch::Dir dir("dom-ext");
    scratch::write_file(dir / "loose.sh",
                        "#!/bin/sh\n" + milp_call("\"$1\"", "\"$2\"", "$3", "$4") +
                            "\nobj=$(sed -n 's/^objective //p' \"$2\")\n"
                            "echo \"bound $(echo \"$obj\" | awk '{printf \"%.17g\", $1 * 0.95}')\" >> \"$2\"\n",
                        true);
    const std::string cmd = (dir / "loose.sh").string() + " {lp_file} {sol_file} {gap} {time_limit}";
    auto o = external(cmd);
    o.relative_gap_target = 0.10;
    const auto sol = dom::dom(kExampleP, kExampleQ, o);
    CHECK(sol.status == dom::SolveStatus::WithinGap);
    CHECK(sol.gap == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(sol.best_bound <= 0.9);
    CHECK(sol.value >= 0.9 - 1e-9);
    o.relative_gap_target = 0.01;
    CHECK(backend_error(kExampleP, kExampleQ, o).find("above the target") != std::string::npos);
  }
}
