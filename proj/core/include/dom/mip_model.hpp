/**
 * @file mip_model.hpp
 * @brief Symbolic mixed-integer model whose optimum is DoM(P, Q), plus its
 *        size accounting and a deterministic CPLEX-LP writer.
 *
 * For p_i in P and q_j in Q with objectives m, the model has
 *
 *   continuous  zp_{i,m} >= 0, phat_{i,m} in [lp_{i,m}, up_{i,m}], zpq_{i,j,m} >= 0
 *   binary      xp_i, xpq_{i,j}, xpqd_{i,j,m}
 *
 * and minimizes sum zp + sum zpq subject to
 *
 *   zp_{i,m}    >= p_{i,m} xp_i - phat_{i,m}
 *   zp_{i,m}    <= p_{i,m} xp_i
 *   zpq_{i,j,m} >= phat_{i,m} - q_{j,m} - p_{i,m} (1 - xpq_{i,j})
 *   zpq_{i,j,m} <= phat_{i,m} - q_{j,m} + K_{i,j,m} (1 - xpqd_{i,j,m})
 *   zpq_{i,j,m} <= M_{i,j,m} xpqd_{i,j,m}
 *   xp_i        >= xpq_{i,j}
 *   xp_i        <= sum_j xpq_{i,j}
 *   sum_i xpq_{i,j} = 1
 *
 * with M_{i,j,m} = max(0, p_{i,m} - q_{j,m}), up_{i,m} = p_{i,m},
 * lp_{i,m} = min(p_{i,m}, min_j q_{j,m}) and K_{i,j,m} = M_{i,j,m} + q_{j,m} - lp_{i,m}.
 * K is the smallest constant that leaves the xpqd = 0 branch slack for every
 * admissible phat. All coordinates must be nonnegative.
 *
 * Variable names are 1-based: zp_{i}_{m}, phat_{i}_{m}, zpq_{i}_{j}_{m},
 * xp_{i}, xpq_{i}_{j}, xpqd_{i}_{j}_{m}. They are a stable public contract.
 */

#ifndef DOM_MIP_MODEL_HPP
#define DOM_MIP_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dom/point_set.hpp"

namespace dom {

enum class VarKind { Continuous, Binary };
enum class VarRole : std::uint8_t { Zp, Phat, Zpq, Xp, Xpq, Xpqd };

struct VarId {
  std::size_t value;
  friend bool operator==(VarId, VarId) = default;
};

/// Zero-based indices; unused ones are 0.
struct ModelIndex {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint32_t m = 0;
};

struct ModelVariable {
  VarRole role;
  ModelIndex index;
  VarKind kind;
  double lower;
  double upper;  // +inf when unbounded

  [[nodiscard]] std::string name() const;
};

enum class Sense { LessEqual, GreaterEqual, Equal };

enum class RowRole : std::uint8_t {
  ZpLower,   // zp >= p xp - phat
  ZpUpper,   // zp <= p xp
  ZpqLower,  // zpq >= phat - q - p (1 - xpq)
  ZpqUpper,  // zpq <= phat - q + K (1 - xpqd)
  ZpqCap,    // zpq <= M xpqd
  Link,      // xp >= xpq
  Active,    // xp <= sum_j xpq
  Assign,    // sum_i xpq = 1
};

struct Term {
  double coefficient;
  VarId var;
};

struct LinearConstraint {
  RowRole role;
  ModelIndex index;
  std::vector<Term> terms;
  Sense sense;
  double rhs;

  [[nodiscard]] std::string name() const;
};

struct ModelCounts {
  std::size_t continuous = 0;
  std::size_t binary = 0;
  std::size_t constraints = 0;
  friend bool operator==(const ModelCounts&, const ModelCounts&) = default;
};

/// Closed-form size accounting: continuous (2+nq) np m, binary
/// np (1 + nq (1 + 2m)), constraints nq + np (1 + 3m) + np nq (3 + 4m).
/// Throws InvalidInput for zero counts.
ModelCounts model_size(std::size_t np, std::size_t nq, std::size_t m);

class DomMipModel {
 public:
  [[nodiscard]] std::size_t num_p() const noexcept { return np_; }
  [[nodiscard]] std::size_t num_q() const noexcept { return nq_; }
  [[nodiscard]] std::size_t num_objectives() const noexcept { return dim_; }

  [[nodiscard]] VarId zp(std::size_t i, std::size_t m) const { return {i * dim_ + m}; }
  [[nodiscard]] VarId phat(std::size_t i, std::size_t m) const { return {np_ * dim_ + i * dim_ + m}; }
  [[nodiscard]] VarId zpq(std::size_t i, std::size_t j, std::size_t m) const {
    return {2 * np_ * dim_ + (i * nq_ + j) * dim_ + m};
  }
  [[nodiscard]] VarId xp(std::size_t i) const { return {(2 + nq_) * np_ * dim_ + i}; }
  [[nodiscard]] VarId xpq(std::size_t i, std::size_t j) const {
    return {(2 + nq_) * np_ * dim_ + np_ + i * nq_ + j};
  }
  [[nodiscard]] VarId xpqd(std::size_t i, std::size_t j, std::size_t m) const {
    return {(2 + nq_) * np_ * dim_ + np_ + np_ * nq_ + (i * nq_ + j) * dim_ + m};
  }

  [[nodiscard]] double p(std::size_t i, std::size_t m) const { return p_[i * dim_ + m]; }
  [[nodiscard]] double q(std::size_t j, std::size_t m) const { return q_[j * dim_ + m]; }
  [[nodiscard]] double big_m(std::size_t i, std::size_t j, std::size_t m) const;
  [[nodiscard]] double release_coefficient(std::size_t i, std::size_t j, std::size_t m) const;
  [[nodiscard]] double lower_p(std::size_t i, std::size_t m) const { return lp_[i * dim_ + m]; }
  [[nodiscard]] double upper_p(std::size_t i, std::size_t m) const { return p(i, m); }

  [[nodiscard]] const std::vector<ModelVariable>& variables() const noexcept { return vars_; }
  [[nodiscard]] const std::vector<LinearConstraint>& constraints() const noexcept { return rows_; }
  [[nodiscard]] const std::vector<Term>& objective() const noexcept { return objective_; }

  /// Counts of the built model: every inequality written in the formulation,
  /// i.e. explicit rows plus zp/zpq nonnegativity plus both sides of each
  /// phat interval.
  [[nodiscard]] ModelCounts counts() const;

  /// Resolves a canonical variable name; nullopt for anything else.
  [[nodiscard]] std::optional<VarId> find(std::string_view name) const;

  [[nodiscard]] double objective_value(std::span<const double> valuation) const;

  /// Largest violation of any row or variable bound (0 when feasible).
  [[nodiscard]] double max_violation(std::span<const double> valuation) const;

 private:
  friend DomMipModel build_model(const PointSet& p, const PointSet& q);

  std::size_t np_ = 0;
  std::size_t nq_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> p_;
  std::vector<double> q_;
  std::vector<double> lp_;
  std::vector<ModelVariable> vars_;
  std::vector<LinearConstraint> rows_;
  std::vector<Term> objective_;
};

/// Builds the model for a prefiltered, nonnegative pair. Throws InvalidInput
/// for empty sets, mismatched dimensions or negative coordinates.
DomMipModel build_model(const PointSet& p, const PointSet& q);

/// CPLEX-LP text: Minimize, Subject To (insertion order), Bounds, Binaries,
/// End. Coefficients use 17 significant digits; output is byte-identical for
/// identical models. Throws std::ios_base::failure if the stream goes bad.
void emit_lp(const DomMipModel& model, std::ostream& sink);

}  // namespace dom

#endif  // DOM_MIP_MODEL_HPP
