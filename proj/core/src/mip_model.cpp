#include "dom/mip_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "dom/csv.hpp"
#include "dom/error.hpp"

namespace dom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string indexed(std::string_view stem, std::initializer_list<std::uint32_t> idx) {
  std::string out(stem);
  for (auto k : idx) {
    out += '_';
    out += std::to_string(k + 1);
  }
  return out;
}

// Parses "_a_b_c" into zero-based indices; false on anything else.
bool parse_indices(std::string_view s, std::size_t expected, std::uint32_t* out) {
  for (std::size_t k = 0; k < expected; ++k) {
    if (s.empty() || s.front() != '_') return false;
    s.remove_prefix(1);
    std::uint32_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || v == 0 || ptr == s.data()) return false;
    out[k] = v - 1;
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  }
  return s.empty();
}

}  // namespace

std::string ModelVariable::name() const {
  switch (role) {
    case VarRole::Zp: return indexed("zp", {index.i, index.m});
    case VarRole::Phat: return indexed("phat", {index.i, index.m});
    case VarRole::Zpq: return indexed("zpq", {index.i, index.j, index.m});
    case VarRole::Xp: return indexed("xp", {index.i});
    case VarRole::Xpq: return indexed("xpq", {index.i, index.j});
    case VarRole::Xpqd: return indexed("xpqd", {index.i, index.j, index.m});
  }
  return {};
}

std::string LinearConstraint::name() const {
  switch (role) {
    case RowRole::ZpLower: return indexed("zp_lo", {index.i, index.m});
    case RowRole::ZpUpper: return indexed("zp_up", {index.i, index.m});
    case RowRole::ZpqLower: return indexed("zpq_lo", {index.i, index.j, index.m});
    case RowRole::ZpqUpper: return indexed("zpq_up", {index.i, index.j, index.m});
    case RowRole::ZpqCap: return indexed("zpq_cap", {index.i, index.j, index.m});
    case RowRole::Link: return indexed("link", {index.i, index.j});
    case RowRole::Active: return indexed("active", {index.i});
    case RowRole::Assign: return indexed("assign", {index.j});
  }
  return {};
}

ModelCounts model_size(std::size_t np, std::size_t nq, std::size_t m) {
  if (np == 0 || nq == 0 || m == 0) throw InvalidInput("model_size needs positive counts");
  return {(2 + nq) * (np * m), np * (1 + nq * (1 + 2 * m)),
          nq + np * (1 + 3 * m) + (np * nq) * (3 + 4 * m)};
}

double DomMipModel::big_m(std::size_t i, std::size_t j, std::size_t m) const {
  return std::max(0.0, p(i, m) - q(j, m));
}

double DomMipModel::release_coefficient(std::size_t i, std::size_t j, std::size_t m) const {
  return big_m(i, j, m) + q(j, m) - lower_p(i, m);
}

ModelCounts DomMipModel::counts() const {
  ModelCounts c;
  std::size_t nonnegative = 0;
  std::size_t intervals = 0;
  for (const auto& v : vars_) {
    if (v.kind == VarKind::Binary) {
      ++c.binary;
      continue;
    }
    ++c.continuous;
    if (v.role == VarRole::Phat) {
      intervals += 2;
    } else {
      ++nonnegative;
    }
  }
  c.constraints = rows_.size() + nonnegative + intervals;
  return c;
}

std::optional<VarId> DomMipModel::find(std::string_view name) const {
  std::uint32_t idx[3] = {0, 0, 0};
  auto try_role = [&](std::string_view stem, std::size_t arity) {
    if (!name.starts_with(stem)) return false;
    return parse_indices(name.substr(stem.size()), arity, idx);
  };
  auto in_range = [&](std::size_t i, std::size_t j, std::size_t m) {
    return i < np_ && j < nq_ && m < dim_;
  };
  // Longer stems first: "xpqd" before "xpq" before "xp", "zpq" before "zp".
  if (try_role("xpqd", 3)) {
    if (in_range(idx[0], idx[1], idx[2])) return xpqd(idx[0], idx[1], idx[2]);
  } else if (try_role("xpq", 2)) {
    if (in_range(idx[0], idx[1], 0)) return xpq(idx[0], idx[1]);
  } else if (try_role("xp", 1)) {
    if (in_range(idx[0], 0, 0)) return xp(idx[0]);
  } else if (try_role("zpq", 3)) {
    if (in_range(idx[0], idx[1], idx[2])) return zpq(idx[0], idx[1], idx[2]);
  } else if (try_role("zp", 2)) {
    if (in_range(idx[0], 0, idx[1])) return zp(idx[0], idx[1]);
  } else if (try_role("phat", 2)) {
    if (in_range(idx[0], 0, idx[1])) return phat(idx[0], idx[1]);
  }
  return std::nullopt;
}

double DomMipModel::objective_value(std::span<const double> valuation) const {
  double total = 0.0;
  for (const auto& t : objective_) total += t.coefficient * valuation[t.var.value];
  return total;
}

double DomMipModel::max_violation(std::span<const double> valuation) const {
  if (valuation.size() != vars_.size()) throw InvalidInput("valuation size does not match model");
  double worst = 0.0;
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    worst = std::max(worst, vars_[k].lower - valuation[k]);
    worst = std::max(worst, valuation[k] - vars_[k].upper);
  }
  for (const auto& row : rows_) {
    double activity = 0.0;
    for (const auto& t : row.terms) activity += t.coefficient * valuation[t.var.value];
    switch (row.sense) {
      case Sense::LessEqual: worst = std::max(worst, activity - row.rhs); break;
      case Sense::GreaterEqual: worst = std::max(worst, row.rhs - activity); break;
      case Sense::Equal: worst = std::max(worst, std::abs(activity - row.rhs)); break;
    }
  }
  return worst;
}

DomMipModel build_model(const PointSet& p, const PointSet& q) {
  if (p.is_empty() || q.is_empty()) throw InvalidInput("model needs non-empty P and Q");
  if (p.dim() != q.dim()) throw InvalidInput("P and Q have different dimensions");
  for (const PointSet* s : {&p, &q}) {
    for (std::size_t i = 0; i < s->size(); ++i) {
      for (std::size_t m = 0; m < s->dim(); ++m) {
        if (s->at(i, m) < 0.0) {
          throw InvalidInput("model requires nonnegative coordinates; translate the pair first");
        }
      }
    }
  }

  DomMipModel model;
  const std::size_t np = p.size();
  const std::size_t nq = q.size();
  const std::size_t dim = p.dim();
  model.np_ = np;
  model.nq_ = nq;
  model.dim_ = dim;
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t m = 0; m < dim; ++m) model.p_.push_back(p.at(i, m));
  }
  for (std::size_t j = 0; j < nq; ++j) {
    for (std::size_t m = 0; m < dim; ++m) model.q_.push_back(q.at(j, m));
  }
  std::vector<double> q_min(dim, kInf);
  for (std::size_t j = 0; j < nq; ++j) {
    for (std::size_t m = 0; m < dim; ++m) q_min[m] = std::min(q_min[m], q.at(j, m));
  }
  model.lp_.resize(np * dim);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t m = 0; m < dim; ++m) model.lp_[i * dim + m] = std::min(p.at(i, m), q_min[m]);
  }

  auto u32 = [](std::size_t v) { return static_cast<std::uint32_t>(v); };

  // Variables, in the block order the VarId accessors assume.
  auto& vars = model.vars_;
  vars.reserve((2 + nq) * np * dim + np + np * nq + np * nq * dim);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t m = 0; m < dim; ++m) {
      vars.push_back({VarRole::Zp, {u32(i), 0, u32(m)}, VarKind::Continuous, 0.0, kInf});
    }
  }
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t m = 0; m < dim; ++m) {
      vars.push_back({VarRole::Phat, {u32(i), 0, u32(m)}, VarKind::Continuous,
                      model.lower_p(i, m), model.upper_p(i, m)});
    }
  }
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nq; ++j) {
      for (std::size_t m = 0; m < dim; ++m) {
        vars.push_back({VarRole::Zpq, {u32(i), u32(j), u32(m)}, VarKind::Continuous, 0.0, kInf});
      }
    }
  }
  for (std::size_t i = 0; i < np; ++i) {
    vars.push_back({VarRole::Xp, {u32(i), 0, 0}, VarKind::Binary, 0.0, 1.0});
  }
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nq; ++j) {
      vars.push_back({VarRole::Xpq, {u32(i), u32(j), 0}, VarKind::Binary, 0.0, 1.0});
    }
  }
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nq; ++j) {
      for (std::size_t m = 0; m < dim; ++m) {
        vars.push_back({VarRole::Xpqd, {u32(i), u32(j), u32(m)}, VarKind::Binary, 0.0, 1.0});
      }
    }
  }

  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t m = 0; m < dim; ++m) model.objective_.push_back({1.0, model.zp(i, m)});
  }
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nq; ++j) {
      for (std::size_t m = 0; m < dim; ++m) model.objective_.push_back({1.0, model.zpq(i, j, m)});
    }
  }

  auto& rows = model.rows_;
  rows.reserve(2 * np * dim + 3 * np * nq * dim + np * nq + np + nq);

  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t m = 0; m < dim; ++m) {
      const double pim = model.p(i, m);
      const ModelIndex at{u32(i), 0, u32(m)};
      rows.push_back({RowRole::ZpLower, at,
                      {{1.0, model.zp(i, m)}, {-pim, model.xp(i)}, {1.0, model.phat(i, m)}},
                      Sense::GreaterEqual, 0.0});
      rows.push_back({RowRole::ZpUpper, at, {{1.0, model.zp(i, m)}, {-pim, model.xp(i)}},
                      Sense::LessEqual, 0.0});
    }
  }

  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nq; ++j) {
      for (std::size_t m = 0; m < dim; ++m) {
        const double pim = model.p(i, m);
        const double qjm = model.q(j, m);
        const double cap = model.big_m(i, j, m);
        const double release = model.release_coefficient(i, j, m);
        const ModelIndex at{u32(i), u32(j), u32(m)};
        rows.push_back({RowRole::ZpqLower, at,
                        {{1.0, model.zpq(i, j, m)}, {-1.0, model.phat(i, m)}, {-pim, model.xpq(i, j)}},
                        Sense::GreaterEqual, -qjm - pim});
        rows.push_back({RowRole::ZpqUpper, at,
                        {{1.0, model.zpq(i, j, m)}, {-1.0, model.phat(i, m)}, {release, model.xpqd(i, j, m)}},
                        Sense::LessEqual, release - qjm});
        rows.push_back({RowRole::ZpqCap, at, {{1.0, model.zpq(i, j, m)}, {-cap, model.xpqd(i, j, m)}},
                        Sense::LessEqual, 0.0});
      }
    }
  }

  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nq; ++j) {
      rows.push_back({RowRole::Link, {u32(i), u32(j), 0}, {{1.0, model.xp(i)}, {-1.0, model.xpq(i, j)}},
                      Sense::GreaterEqual, 0.0});
    }
  }
  for (std::size_t i = 0; i < np; ++i) {
    LinearConstraint row{RowRole::Active, {u32(i), 0, 0}, {{1.0, model.xp(i)}}, Sense::LessEqual, 0.0};
    for (std::size_t j = 0; j < nq; ++j) row.terms.push_back({-1.0, model.xpq(i, j)});
    rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < nq; ++j) {
    LinearConstraint row{RowRole::Assign, {0, u32(j), 0}, {}, Sense::Equal, 1.0};
    for (std::size_t i = 0; i < np; ++i) row.terms.push_back({1.0, model.xpq(i, j)});
    rows.push_back(std::move(row));
  }
  return model;
}

namespace {

constexpr std::size_t kTermsPerLine = 8;

void write_expression(std::ostream& out, const DomMipModel& model, const std::vector<Term>& terms) {
  const auto& vars = model.variables();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (k != 0 && k % kTermsPerLine == 0) out << "\n   ";
    const double c = terms[k].coefficient;
    const std::string name = vars[terms[k].var.value].name();
    if (k == 0) {
      if (c == 1.0) {
        out << name;
      } else if (c == -1.0) {
        out << "- " << name;
      } else {
        out << format_real(c) << ' ' << name;
      }
      continue;
    }
    const char sign = std::signbit(c) ? '-' : '+';
    const double mag = std::abs(c);
    out << ' ' << sign << ' ';
    if (mag != 1.0) out << format_real(mag) << ' ';
    out << name;
  }
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

}  // namespace

void emit_lp(const DomMipModel& model, std::ostream& sink) {
  const auto old_mask = sink.exceptions();
  sink.exceptions(std::ios::badbit | std::ios::failbit);

  sink << "\\ Dominance move model: |P|=" << model.num_p() << " |Q|=" << model.num_q()
       << " M=" << model.num_objectives() << "\n";
  sink << "Minimize\n obj: ";
  write_expression(sink, model, model.objective());
  sink << "\nSubject To\n";
  for (const auto& row : model.constraints()) {
    sink << ' ' << row.name() << ": ";
    write_expression(sink, model, row.terms);
    sink << ' ' << sense_text(row.sense) << ' ' << format_real(row.rhs + 0.0) << '\n';
  }
  sink << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.kind == VarKind::Binary) continue;
    if (std::isinf(v.upper)) {
      sink << ' ' << v.name() << " >= " << format_real(v.lower) << '\n';
    } else {
      sink << ' ' << format_real(v.lower) << " <= " << v.name() << " <= " << format_real(v.upper) << '\n';
    }
  }
  sink << "Binaries\n";
  for (const auto& v : model.variables()) {
    if (v.kind == VarKind::Binary) sink << ' ' << v.name() << '\n';
  }
  sink << "End\n";
  sink.flush();
  sink.exceptions(old_mask);
}

}  // namespace dom
