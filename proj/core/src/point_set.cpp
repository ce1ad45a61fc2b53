#include "dom/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "dom/error.hpp"

namespace dom {

namespace {

void require_same_dim(PointView a, PointView b) {
  if (a.size() != b.size()) {
    throw InvalidInput("dimension mismatch: " + std::to_string(a.size()) +
                       " vs " + std::to_string(b.size()));
  }
}

}  // namespace

bool weakly_leq(PointView a, PointView b) {
  require_same_dim(a, b);
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] > b[m]) return false;
  }
  return true;
}

bool dominates(PointView a, PointView b) {
  require_same_dim(a, b);
  bool strict = false;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] > b[m]) return false;
    if (a[m] < b[m]) strict = true;
  }
  return strict;
}

PointSet::PointSet(const std::vector<Point>& rows,
                   std::vector<std::string> labels) {
  if (rows.empty()) throw InvalidInput("point set must not be empty");
  if (!labels.empty() && labels.size() != rows.size()) {
    throw InvalidInput("label count does not match point count");
  }
  dim_ = rows.front().size();
  if (dim_ == 0) throw InvalidInput("points need at least one objective");

  std::set<Point> seen;
  coords_.reserve(rows.size() * dim_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Point& row = rows[i];
    if (row.size() != dim_) {
      throw InvalidInput("point " + std::to_string(i) + " has " +
                         std::to_string(row.size()) + " objectives, expected " +
                         std::to_string(dim_));
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw InvalidInput("point " + std::to_string(i) +
                           " has a non-finite coordinate");
      }
    }
    if (!seen.insert(row).second) continue;
    coords_.insert(coords_.end(), row.begin(), row.end());
    if (!labels.empty()) labels_.push_back(std::move(labels[i]));
    ++count_;
  }
}

PointSet PointSet::empty(std::size_t dim) { return PointSet(EmptyTag{}, dim); }

std::vector<Point> PointSet::rows() const {
  std::vector<Point> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) {
    auto v = (*this)[i];
    out.emplace_back(v.begin(), v.end());
  }
  return out;
}

PointSet PointSet::select(std::span<const std::size_t> indices) const {
  PointSet out(EmptyTag{}, dim_);
  out.coords_.reserve(indices.size() * dim_);
  for (std::size_t i : indices) {
    if (i >= count_) throw InvalidInput("point index out of range");
    auto v = (*this)[i];
    out.coords_.insert(out.coords_.end(), v.begin(), v.end());
    if (!labels_.empty()) out.labels_.push_back(labels_[i]);
    ++out.count_;
  }
  return out;
}

PointSet PointSet::shifted(PointView offset) const {
  if (offset.size() != dim_) throw InvalidInput("offset dimension mismatch");
  PointSet out = *this;
  for (std::size_t k = 0; k < out.coords_.size(); ++k) out.coords_[k] += offset[k % dim_];
  return out;
}

PointSet PointSet::merged_with(const PointSet& other) const {
  if (other.dim_ != dim_) throw InvalidInput("cannot merge point sets of different dimension");
  std::vector<Point> all = rows();
  auto more = other.rows();
  all.insert(all.end(), more.begin(), more.end());
  if (all.empty()) return PointSet::empty(dim_);
  return PointSet(all);
}

std::vector<std::size_t> nondominated_indices(const PointSet& s) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool dominated = false;
    for (std::size_t k = 0; k < s.size() && !dominated; ++k) {
      dominated = k != i && dominates(s[k], s[i]);
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

PointSet nondominated_filter(const PointSet& s) {
  const auto keep = nondominated_indices(s);
  return s.select(keep);
}

PrefilterOutcome prefilter_pair(const PointSet& p, const PointSet& q) {
  if (p.is_empty() || q.is_empty()) throw InvalidInput("prefilter needs non-empty sets");
  if (p.dim() != q.dim()) throw InvalidInput("P and Q have different dimensions");

  PrefilterOutcome out{PointSet::empty(p.dim()), PointSet::empty(q.dim()), {}, {}, {}, {}};
  out.p_original = nondominated_indices(p);
  out.p_reduced = p.select(out.p_original);

  // Q points some reduced P point already weakly dominates cost nothing.
  std::vector<std::size_t> open;
  for (std::size_t j = 0; j < q.size(); ++j) {
    std::optional<std::size_t> cover;
    for (std::size_t r = 0; r < out.p_reduced.size() && !cover; ++r) {
      if (weakly_leq(out.p_reduced[r], q[j])) cover = out.p_original[r];
    }
    if (cover) {
      out.zero_cost_covers.push_back({j, *cover});
    } else {
      open.push_back(j);
    }
  }

  for (std::size_t j : open) {
    bool dominated = false;
    for (std::size_t k : open) {
      if (k != j && dominates(q[k], q[j])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.q_original.push_back(j);
  }
  for (std::size_t j : open) {
    if (std::find(out.q_original.begin(), out.q_original.end(), j) != out.q_original.end()) continue;
    for (std::size_t k : out.q_original) {
      if (dominates(q[k], q[j])) {
        out.absorbed.push_back({j, k});
        break;
      }
    }
  }
  out.q_reduced = q.select(out.q_original);
  return out;
}

bool Translation::is_identity() const {
  return std::all_of(offset.begin(), offset.end(), [](double v) { return v == 0.0; });
}

Point Translation::apply(PointView x) const {
  Point out(x.begin(), x.end());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] += offset[m];
  return out;
}

Point Translation::revert(PointView x) const {
  Point out(x.begin(), x.end());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] -= offset[m];
  return out;
}

PointSet Translation::apply(const PointSet& s) const {
  if (is_identity()) return s;
  return s.shifted(offset);
}

TranslatedPair translate_nonnegative(const PointSet& p, const PointSet& q) {
  if (p.dim() != q.dim()) throw InvalidInput("P and Q have different dimensions");
  Translation t{Point(p.dim(), 0.0)};
  for (const PointSet* s : {&p, &q}) {
    for (std::size_t i = 0; i < s->size(); ++i) {
      for (std::size_t m = 0; m < s->dim(); ++m) {
        t.offset[m] = std::max(t.offset[m], -s->at(i, m));
      }
    }
  }
  return {t.apply(p), t.apply(q), t};
}

std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.size() < 2) throw InvalidInput("normalization needs at least two values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double low = *lo;
  const double range = *hi - *lo;
  std::vector<double> out(values.size(), 0.0);
  if (range == 0.0) return out;
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = (values[k] - low) / range;
  return out;
}

}  // namespace dom
