#ifndef SETRISK_MARKET_HPP
#define SETRISK_MARKET_HPP

#include "setrisk/polyhedra.hpp"

#include <string>
#include <utility>
#include <vector>

namespace setrisk {

/// Finite probability space; probs[w] = P({w}).
struct ScenarioSpace {
  Vector probs;

  Index n() const { return probs.size(); }
  static ScenarioSpace uniform(Index n);
};

/// Eligible portfolios M = span of the basis columns (d x m, full column rank).
struct EligibleSpace {
  Matrix basis;

  Index d() const { return basis.rows(); }
  Index m() const { return basis.cols(); }
  static EligibleSpace full(Index d);

  /// Basis of the orthogonal complement of M (columns, d x (d - m)).
  Matrix complement() const;
  /// Orthogonal projection of x onto M, in ambient coordinates.
  Vector project(const Vector& x) const;
  /// M-coordinates of x, or nullopt when x is not in M.
  std::optional<Vector> coordinates(const Vector& x) const;
};

/// One-period conical market: K_I at time 0, K_T(w) at time T, eligible subspace M.
struct OnePeriodMarket {
  ScenarioSpace space;
  Polyhedron k_initial = Polyhedron::orthant(1);
  std::vector<Polyhedron> k_terminal;
  EligibleSpace eligible;

  Index n() const { return space.n(); }
  Index d() const { return k_initial.dim(); }
};

/// n x d matrix; row w is the portfolio X(w) in physical units.
using RandomPortfolio = Matrix;

/// Violated invariants, one message per violation; empty means valid.
std::vector<std::string> validate_market(const OnePeriodMarket& m);
/// Throws ValidationError carrying every violation.
void require_valid(const OnePeriodMarket& m);

/// Violations of R^d_+ subset K != R^d for a single cone, prefixed with `name`.
std::vector<std::string> solvency_cone_violations(const Polyhedron& k, const std::string& name);

/// {x : sum_i prices_i x_i >= 0}. Throws NonpositivePrice.
Polyhedron frictionless_cone(const Vector& prices);

/// Cone generated by e_i and pi_ij e_i - e_j (i != j); pairs listed in `illiquid` contribute no generator.
/// Throws InvalidRates for nonpositive rates or a diagonal entry other than 1.
Polyhedron bidask_cone(const Matrix& pi, const std::vector<std::pair<Index, Index>>& illiquid = {});

/// K_I^M = K_I intersected with M and its dual within M, in both coordinate systems.
struct EligibleCone {
  Polyhedron cone;          // M-coordinates
  Polyhedron cone_ambient;  // R^d
  Polyhedron dual;          // M-coordinates of the ambient dual below
  Polyhedron dual_ambient;  // (K_I^M)^+ taken within M = (K_I^+ + M-perp) intersected with M
};

/// Throws DegenerateEligibleCone when K_I^M = {0}.
EligibleCone eligible_initial_cone(const OnePeriodMarket& m);

/// Product cone prod_w K_T(w) in R^{n d}, scenario-major.
Polyhedron scenario_cone(const OnePeriodMarket& m);
/// Product of the per-scenario dual cones prod_w K_T(w)^+.
Polyhedron scenario_dual_cone(const OnePeriodMarket& m);

/// (n d) x k matrix stacking `block` (d x k) once per scenario: u -> (block u, ..., block u).
Matrix repeat_rows(const Matrix& block, Index n);

/// Throws ShapeMismatch unless x is n x d.
void check_shape(const OnePeriodMarket& m, const RandomPortfolio& x);

/// sum_w probs_w x(w) for an n x d matrix.
Vector expectation(const ScenarioSpace& s, const Matrix& x);

}  // namespace setrisk

#endif  // SETRISK_MARKET_HPP
