#ifndef SETRISK_LP_HPP
#define SETRISK_LP_HPP

#include "setrisk/polyhedra.hpp"

#include <optional>
#include <span>
#include <string>

namespace setrisk {

enum class Sense { minimize, maximize };
enum class LpStatus { optimal, unbounded, infeasible };

/// Optimize objective . x over an H-described feasible set.
struct LinearProgram {
  Vector objective;
  HRep constraints;
  Sense sense = Sense::minimize;
};

/// Result of solve(). Every certificate has been checked exactly before it is returned.
///
/// Multipliers are listed inequalities first, then equalities, and refer to the
/// minimization of s * objective where s = +1 (minimize) or -1 (maximize).
struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  std::optional<Rational> value;
  std::optional<Vector> point;
  /// unbounded: an improving ray r (A r >= 0, E r = 0, s c . r < 0).
  /// infeasible: Farkas multipliers (lambda >= 0 on inequalities, sum lambda a + mu e = 0, sum lambda b + mu f > 0).
  std::optional<Vector> certificate;
  /// optimal: dual multipliers (lambda >= 0, sum lambda a + mu e = s c, sum lambda b + mu f = s value).
  std::optional<Vector> duals;
};

/// Two-phase dense simplex over exact rationals with Bland's rule.
LpOutcome solve(const LinearProgram& lp);

/// A point satisfying the listed inequalities strictly and all other constraints weakly, if one exists.
std::optional<Vector> strict_feasible(const HRep& constraints, std::span<const std::size_t> strict_indices);

/// A value in the extended reals.
struct Extended {
  enum class Kind { finite, plus_infinity, minus_infinity };
  Kind kind = Kind::finite;
  Rational value;

  static Extended finite(Rational v) { return {Kind::finite, std::move(v)}; }
  static Extended plus_infinity() { return {Kind::plus_infinity, Rational(0)}; }
  static Extended minus_infinity() { return {Kind::minus_infinity, Rational(0)}; }
  bool is_finite() const { return kind == Kind::finite; }
  friend bool operator==(const Extended& a, const Extended& b) {
    return a.kind == b.kind && (a.kind != Kind::finite || a.value == b.value);
  }
};

std::string to_string(const Extended& x);

/// sup { direction . x : x in p }. Throws EmptySetError for an empty polyhedron.
Extended support_value(const Polyhedron& p, const Vector& direction);

/// inf { direction . x : x in p }; +infinity for the empty set.
Extended minimum_value(const Polyhedron& p, const Vector& direction);

/// Exact test of region subset-of (cover_1 union ... union cover_k).
bool covered_by(const Polyhedron& region, std::span<const Polyhedron> cover);
/// A point of the region outside every cover member, or nullopt when the region is covered.
std::optional<Vector> uncovered_point(const Polyhedron& region, std::span<const Polyhedron> cover);

}  // namespace setrisk

#endif  // SETRISK_LP_HPP
