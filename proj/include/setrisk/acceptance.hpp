#ifndef SETRISK_ACCEPTANCE_HPP
#define SETRISK_ACCEPTANCE_HPP

#include "setrisk/market.hpp"

#include <optional>
#include <string>
#include <vector>

namespace setrisk {

/// Acceptable terminal positions, as a polyhedron in scenario space R^{n d}
/// (scenario-major) or as a finite union of polyhedra.
class AcceptanceSet {
 public:
  static AcceptanceSet polyhedral(OnePeriodMarket market, Polyhedron region);
  /// Members are canonicalized; empty members and members contained in another are dropped.
  static AcceptanceSet union_of(OnePeriodMarket market, std::vector<Polyhedron> members);

  bool is_union() const { return is_union_; }
  /// The single region. Throws UnionNotSupported for unions.
  const Polyhedron& region() const;
  const std::vector<Polyhedron>& members() const { return members_; }
  const OnePeriodMarket& market() const { return market_; }

 private:
  AcceptanceSet(OnePeriodMarket market, std::vector<Polyhedron> members, bool is_union);
  OnePeriodMarket market_;
  std::vector<Polyhedron> members_;
  bool is_union_ = false;
};

struct AxiomReport {
  bool nonempty_det = false;  // R^d 1 meets A
  bool proper_det = false;    // R^d 1 is not contained in A
  bool monotone = false;      // A + (L)_+ subset A
  bool a1a = false;           // M 1 meets A
  bool a1b = false;           // M 1 is not contained in A
  bool convex = false;
  bool cone = false;
  bool kT_compatible = false;  // A + L(K_T) subset A
  bool kI_compatible = false;  // A + K_I^M 1 subset A

  bool acceptance_set() const { return nonempty_det && proper_det && monotone; }
  bool market_compatible() const { return kT_compatible && kI_compatible; }
  /// "name: yes/no" lines in declaration order.
  std::vector<std::pair<std::string, bool>> entries() const;
};

/// Decides every flag exactly; unions are handled with covering tests.
AxiomReport check_axioms(const AcceptanceSet& a);

/// (n d) x d matrix x -> (x, ..., x).
Matrix deterministic_embedding(Index n, Index d);
/// (n d) x m matrix u -> (B u, ..., B u) for the eligible basis B.
Matrix eligible_embedding(const OnePeriodMarket& m);

/// K_I^M 1: the eligible initial cone repeated in every scenario.
Polyhedron initial_cone_embedded(const OnePeriodMarket& m);

/// A + L(K_T) + K_I^M 1. Throws UnionNotSupported for unions.
AcceptanceSet augment(const AcceptanceSet& a);
/// Member-wise augmentation of a union.
AcceptanceSet augment_union(const AcceptanceSet& a);

/// (L)_+ : positions nonnegative in every scenario.
AcceptanceSet orthant_acceptance(const OnePeriodMarket& m);
/// L(K_T): positions solvent in every scenario (not market-compatible in general).
AcceptanceSet solvency_acceptance(const OnePeriodMarket& m);
/// L(K_T) + K_I^M 1.
AcceptanceSet worst_case_acceptance(const OnePeriodMarket& m);

/// (L(K_T) + K_I 1) intersected with -(L)_+ is {0}.
bool no_arbitrage(const OnePeriodMarket& m);

/// Violated conditions among (D0), (D1a), (D1b), (D2) for a per-scenario set; empty when all hold.
std::vector<std::string> var_set_violations(const Polyhedron& d);

/// Union over inclusion-minimal scenario sets S with P(S) >= 1 - alpha of {X : X(w) in D(w) for w in S}.
/// d_alpha defaults to K_T. With augment_initial, each member is enlarged by K_I^M 1.
/// Throws AxiomViolation naming the failed (D*) condition, std::invalid_argument for alpha outside [0,1].
AcceptanceSet var_acceptance(const OnePeriodMarket& m, const Rational& alpha,
                             const std::optional<std::vector<Polyhedron>>& d_alpha = std::nullopt,
                             bool augment_initial = false);

/// Dual variables of AV@R in mass coordinates eta(w) = P(w) Y(w):
/// eta(w) in K_T^+(w), diag(sum eta) mu(lambda) - eta(w) / P(w) in K_T^+(w), sum eta in K_I^+ + M-perp.
/// Throws LambdaOutOfRange unless lambda lies in (0,1]^d.
Polyhedron avar_dual_cone(const OnePeriodMarket& m, const Vector& lambda);

/// Acceptance cone of AV@R_lambda: the dual cone of avar_dual_cone.
/// Throws EmptyDualSet when every dual variable has sum eta in M-perp.
AcceptanceSet avar_acceptance(const OnePeriodMarket& m, const Vector& lambda);

}  // namespace setrisk

#endif  // SETRISK_ACCEPTANCE_HPP
