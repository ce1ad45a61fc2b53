#include "dom/exact2d.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "dom/error.hpp"
#include "dom/solver.hpp"

namespace dom {

double move_distance(PointView b, PointView a) {
  if (a.size() != b.size()) throw InvalidInput("move_distance dimension mismatch");
  double d = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) d += std::max(0.0, b[m] - a[m]);
  return d;
}

std::size_t inward_neighbor(PointView a, const PointSet& r) {
  if (r.is_empty()) throw InvalidInput("inward_neighbor needs a non-empty candidate set");
  std::size_t best = 0;
  double best_d = move_distance(r[0], a);
  for (std::size_t k = 1; k < r.size(); ++k) {
    const double d = move_distance(r[k], a);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

namespace {

// Neighbour of cluster c in R = P ∪ {representatives}: values below |P| are
// P indices, the rest are np + cluster index.
std::size_t neighbor_of(std::size_t c, const PointSet& p, const std::vector<Cluster>& clusters) {
  const PointView a = clusters[c].representative;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = move_distance(p[i], a);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    if (k == c) continue;
    const double d = move_distance(clusters[k].representative, a);
    if (d < best_d) {
      best_d = d;
      best = p.size() + k;
    }
  }
  return best;
}

Cluster collapse(const std::vector<Cluster>& clusters, const std::vector<std::size_t>& members) {
  Cluster merged;
  merged.representative = clusters[members.front()].representative;
  for (std::size_t k : members) {
    const Cluster& c = clusters[k];
    merged.q_members.insert(merged.q_members.end(), c.q_members.begin(), c.q_members.end());
    for (std::size_t m = 0; m < merged.representative.size(); ++m) {
      merged.representative[m] = std::min(merged.representative[m], c.representative[m]);
    }
  }
  std::sort(merged.q_members.begin(), merged.q_members.end());
  return merged;
}

}  // namespace

DomSolution dom_2d(const PointSet& p, const PointSet& q, Dom2dTrace* trace) {
  if (p.dim() != 2 || q.dim() != 2) {
    throw BackendError("exact-2d supports two objectives only (got " + std::to_string(p.dim()) + ")");
  }
  if (p.is_empty() || q.is_empty()) throw InvalidInput("P and Q must be non-empty");
  const auto start = std::chrono::steady_clock::now();

  const PrefilterOutcome pre = prefilter_pair(p, q);
  std::vector<std::size_t> assignment(q.size(), 0);
  for (const auto& c : pre.zero_cost_covers) assignment[c.q_index] = c.by_index;

  Dom2dTrace local;
  Dom2dTrace& tr = trace ? *trace : local;
  tr = {};

  const PointSet& pr = pre.p_reduced;
  const PointSet& qr = pre.q_reduced;
  std::vector<Cluster> clusters;
  for (std::size_t j = 0; j < qr.size(); ++j) {
    auto v = qr[j];
    clusters.push_back({{j}, std::nullopt, Point(v.begin(), v.end())});
  }

  std::vector<std::size_t> next;
  while (!clusters.empty()) {
    ++tr.iterations;
    const std::size_t np = pr.size();
    next.assign(clusters.size(), 0);
    for (std::size_t c = 0; c < clusters.size(); ++c) next[c] = neighbor_of(c, pr, clusters);

    // A loop: q = n(n(q)) with both ends being clusters.
    std::vector<std::vector<std::size_t>> groups;
    std::vector<bool> grouped(clusters.size(), false);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (grouped[c] || next[c] < np) continue;
      const std::size_t d = next[c] - np;
      if (!grouped[d] && next[d] == np + c) {
        groups.push_back({c, d});
        grouped[c] = grouped[d] = true;
      }
    }
    if (groups.empty()) {
      // Longer cycles among clusters have never been observed, but collapse
      // them the same way rather than loop forever while resolving owners.
      for (std::size_t c = 0; c < clusters.size() && groups.empty(); ++c) {
        std::vector<std::size_t> path;
        std::vector<bool> on_path(clusters.size(), false);
        std::size_t cur = c;
        while (!on_path[cur]) {
          on_path[cur] = true;
          path.push_back(cur);
          if (next[cur] < np) break;
          cur = next[cur] - np;
        }
        if (next[path.back()] >= np && on_path[cur]) {
          auto it = std::find(path.begin(), path.end(), cur);
          groups.emplace_back(it, path.end());
        }
      }
    }
    if (groups.empty()) break;

    std::vector<Cluster> collapsed;
    std::vector<bool> done(clusters.size(), false);
    for (const auto& g : groups) {
      collapsed.push_back(collapse(clusters, g));
      for (std::size_t k : g) done[k] = true;
      ++tr.collapses;
    }
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (!done[c]) collapsed.push_back(std::move(clusters[c]));
    }
    clusters = std::move(collapsed);
  }

  // Owners: follow the neighbour chain to the P point it ends at.
  const std::size_t np = pr.size();
  std::vector<std::size_t> reduced_assignment(qr.size(), 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    std::size_t cur = c;
    for (std::size_t hops = 0; next[cur] >= np; ++hops) {
      if (hops > clusters.size()) throw BackendError("exact-2d: unresolved cluster cycle");
      cur = next[cur] - np;
    }
    clusters[c].owner = next[cur];
    for (std::size_t j : clusters[c].q_members) reduced_assignment[j] = next[cur];
  }

  for (std::size_t r = 0; r < qr.size(); ++r) {
    assignment[pre.q_original[r]] = pre.p_original[reduced_assignment[r]];
  }
  for (const auto& a : pre.absorbed) assignment[a.q_index] = assignment[a.by_index];
  tr.clusters = std::move(clusters);

  DomSolution sol = assemble_solution(p, q, std::move(assignment));
  sol.backend = Backend::Exact2d;
  sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace dom
