#ifndef SETRISK_RISKMEASURE_HPP
#define SETRISK_RISKMEASURE_HPP

#include "setrisk/acceptance.hpp"
#include "setrisk/lp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace setrisk {

/// A value R(X) subset of M: one polyhedron in M-coordinates, or a finite union of them.
struct RiskSet {
  std::vector<Polyhedron> pieces;  // M-coordinates, canonical; no empty pieces in unions
  Matrix basis;                    // d x m eligible basis

  bool is_union() const { return pieces.size() > 1; }
  bool is_empty() const;
  /// The single polyhedron. Throws UnionNotSupported for unions.
  const Polyhedron& polyhedron() const;
  /// The same set in R^d.
  std::vector<Polyhedron> ambient() const;
  bool contains(const Vector& coords) const;
};

/// Same point set (exact, works for unions).
bool same_set(const RiskSet& a, const RiskSet& b);
/// a subset of b (exact, works for unions).
bool risk_subset(const RiskSet& a, const RiskSet& b);

/// R_A(X) = {u in M : X + u 1 in A}. Throws ShapeMismatch.
RiskSet evaluate(const AcceptanceSet& a, const RandomPortfolio& x);
/// X in A.
bool accepts(const AcceptanceSet& a, const RandomPortfolio& x);
/// inf { v . u : u in R_A(X) } with v in ambient coordinates; +inf for an empty risk set.
Extended scalarize(const AcceptanceSet& a, const RandomPortfolio& x, const Vector& v);

/// A halfspace {u in M : v . u >= offset}, all of M, or the empty set.
struct PenaltyValue {
  enum class Kind { halfspace, whole_m, empty };
  Kind kind = Kind::whole_m;
  Rational offset;

  static PenaltyValue halfspace(Rational offset) { return {Kind::halfspace, std::move(offset)}; }
  static PenaltyValue whole_m() { return {Kind::whole_m, Rational(0)}; }
  static PenaltyValue empty() { return {Kind::empty, Rational(0)}; }
};

/// F^M_(Y,v)[X] = {u in M : E[X^T Y] <= v . u}; Y is a density (n x d), v ambient.
RiskSet set_expectation(const OnePeriodMarket& m, const Matrix& y, const Vector& v, const RandomPortfolio& x);

/// Vector probability measure Q (n x d, column i is the law Q_i) with weight vector w.
struct DualPair {
  Matrix q;
  Vector w;
};

/// (Y, v) -> (Q, w) with w = E[Y], Q_i = P Y_i / w_i (Q_i = P when w_i = 0).
/// Throws InvalidDualVariable naming the violated condition.
DualPair pair_transform(const OnePeriodMarket& m, const Matrix& y, const Vector& v);
/// (Q, w) -> (Y, v) with Y = diag(w) dQ/dP and v the projection of w onto M.
std::pair<Matrix, Vector> pair_inverse(const OnePeriodMarket& m, const DualPair& pair);
/// Throws InvalidDualVariable unless (Q, w) is an admissible dual variable for the market.
void check_pair(const OnePeriodMarket& m, const DualPair& pair);

/// {u in M : v . u >= -sup_{X in A} E[X^T Y]}; whole M when the supremum is infinite, empty for empty A.
PenaltyValue conjugate(const AcceptanceSet& a, const Matrix& y, const Vector& v);
/// Minimal penalty: closure of the union over X' in A of (E^Q[X'] + G(w)) intersected with M.
PenaltyValue penalty_min(const AcceptanceSet& a, const DualPair& pair);

/// sum_w eta(w) . X(w) >= offset, where eta is a mass (n x d) with sum_w eta(w) in M-perp.
/// These are limits of admissible dual variables and decide whether R(X) is empty.
struct LimitConstraint {
  Matrix eta;
  Rational offset;
};

struct DualGenerators {
  std::vector<DualPair> pairs;
  std::vector<LimitConstraint> limits;
};

/// One pair per extreme ray of the dual cone of a coherent region; rays with E[Y] in M-perp become limits.
/// Throws NotACone for a non-conic region, UnionNotSupported for unions.
DualGenerators dual_generators(const AcceptanceSet& a);

/// Pairs, penalties and limits reproducing a polyhedral convex acceptance set.
struct DualFamily {
  std::vector<DualPair> pairs;
  std::vector<PenaltyValue> penalties;
  std::vector<LimitConstraint> limits;
};
/// Cones use dual_generators with minimal penalties; other convex regions use facet normals.
DualFamily dual_family(const AcceptanceSet& a);

/// Intersection over the family of -alpha(Q,w) + (E^Q[-X] + G(w)) intersected with M, and the limits.
/// Throws EmptyDualFamily when no penalty differs from M.
RiskSet dual_evaluate(const OnePeriodMarket& m, const std::vector<DualPair>& pairs,
                      const std::vector<PenaltyValue>& penalties, const RandomPortfolio& x,
                      const std::vector<LimitConstraint>& limits = {});
RiskSet dual_evaluate(const OnePeriodMarket& m, const DualFamily& family, const RandomPortfolio& x);

struct PrimalDualReport {
  std::vector<RiskSet> primal;
  std::vector<RiskSet> dual;
  std::vector<std::size_t> mismatches;  // indices into the portfolio list
  bool all_equal() const { return mismatches.empty(); }
};

/// Compares evaluate and dual_evaluate for every portfolio.
/// Throws PreconditionViolated unless A is polyhedral, convex, (A1a), (A1b) and market-compatible.
PrimalDualReport primal_dual_check(const AcceptanceSet& a, const std::vector<RandomPortfolio>& xs);

struct HarnessSamples {
  std::vector<RandomPortfolio> portfolios;
  std::vector<Vector> shifts;     // M-coordinates
  std::vector<Rational> weights;  // convex weights in (0,1)
};

/// Sampled witness that t R(X) + (1-t) R(X') is not contained in R(t X + (1-t) X').
struct ConvexityCounterexample {
  RandomPortfolio x;
  RandomPortfolio x_prime;
  Rational t;
  Vector u;  // M-coordinates of a point of the left side outside the right side
};

struct HarnessReport {
  AxiomReport axioms;
  bool membership_roundtrip = true;  // X in A iff 0 in R(X)
  bool translative = true;           // R(X + u 1) = R(X) - u
  bool monotone_sampled = true;      // R(X + Z) contains R(X) for Z >= 0
  bool subadditive = true;           // R(X + X') contains R(X) + R(X')
  bool convex_sampled = true;        // R(tX + (1-t)X') contains t R(X) + (1-t) R(X')
  std::optional<ConvexityCounterexample> counterexample;
};

/// Exact axiom flags plus sampled checks of the correspondence between A and R_A.
HarnessReport axiom_harness(const AcceptanceSet& a, const HarnessSamples& samples);

}  // namespace setrisk

#endif  // SETRISK_RISKMEASURE_HPP
