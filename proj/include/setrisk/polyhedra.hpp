#ifndef SETRISK_POLYHEDRA_HPP
#define SETRISK_POLYHEDRA_HPP

#include "setrisk/errors.hpp"
#include "setrisk/scalar.hpp"

#include <optional>
#include <span>
#include <vector>

namespace setrisk {

/// normal . x >= offset (as an inequality) or normal . x == offset (as an equality).
struct LinearConstraint {
  Vector normal;
  Rational offset;
};

/// Outer description. A zero normal with positive offset (0 >= 1) marks the empty set.
struct HRep {
  Index dim = 0;
  std::vector<LinearConstraint> inequalities;
  std::vector<LinearConstraint> equalities;

  static HRep empty_set(Index dim);
  /// True when an explicit infeasibility marker is present.
  bool marks_empty() const;
  void add_inequality(Vector normal, Rational offset = 0);
  void add_equality(Vector normal, Rational offset = 0);
};

/// Inner description: conv(vertices) + cone(rays) + span(lineality).
/// A nonempty cone has the single vertex 0; the empty set has no vertices.
struct VRep {
  Index dim = 0;
  std::vector<Vector> vertices;
  std::vector<Vector> rays;
  std::vector<Vector> lineality;
};

/// A closed convex polyhedron in R^dim.
///
/// Values are immutable. A canonical polyhedron carries both descriptions in a
/// normal form: minimal, integer-primitive, lexicographically sorted, with
/// normals and generators reduced modulo the equality and lineality spaces.
/// Two canonical polyhedra describe the same set iff their descriptions are equal.
class Polyhedron {
 public:
  explicit Polyhedron(HRep h);
  explicit Polyhedron(VRep v);

  static Polyhedron whole_space(Index dim);
  static Polyhedron empty(Index dim);
  static Polyhedron point(const Vector& x);
  static Polyhedron orthant(Index dim);
  /// Polyhedral cone cone(rays) + span(lineality).
  static Polyhedron cone(Index dim, std::vector<Vector> rays, std::vector<Vector> lineality = {});
  /// Polyhedral cone {x : a . x >= 0 for every row a}.
  static Polyhedron cone_from_inequalities(Index dim, const std::vector<Vector>& normals);

  Index dim() const { return dim_; }
  bool has_hrep() const { return h_.has_value(); }
  bool has_vrep() const { return v_.has_value(); }
  bool is_canonical() const { return canonical_; }

  /// Throw std::logic_error when the representation is absent; use canonical() first.
  const HRep& hrep() const;
  const VRep& vrep() const;

  bool is_empty() const;
  /// Nonempty and every vertex is the origin (modulo lineality).
  bool is_cone() const;
  bool is_full_dimensional() const;
  /// Affine dimension; -1 for the empty set.
  Index affine_dim() const;

  friend bool operator==(const Polyhedron& a, const Polyhedron& b);

 private:
  Polyhedron() = default;
  friend Polyhedron make_canonical(HRep h, VRep v);

  Index dim_ = 0;
  std::optional<HRep> h_;
  std::optional<VRep> v_;
  bool canonical_ = false;
};

/// Canonical form (both representations). No-op on canonical input.
Polyhedron canonical(const Polyhedron& p);

/// Double description conversion. The result carries both representations in canonical form.
Polyhedron dd_convert(const HRep& h);
Polyhedron dd_convert(const VRep& v);

/// {y : y . x >= 0 for all x in c}. With a subspace basis (columns), the dual is taken
/// within that subspace and returned in ambient coordinates.
Polyhedron dual_cone(const Polyhedron& c, const std::optional<Matrix>& subspace_basis = std::nullopt);

Polyhedron minkowski_sum(const Polyhedron& p, const Polyhedron& q);
Polyhedron intersect(const Polyhedron& p, const Polyhedron& q);
Polyhedron project(const Polyhedron& p, std::span<const Index> keep);
Polyhedron recession_cone(const Polyhedron& p);
Polyhedron cartesian_product(std::span<const Polyhedron> blocks);

/// {map x + shift : x in p}.
Polyhedron image(const Polyhedron& p, const Matrix& map, const std::optional<Vector>& shift = std::nullopt);
/// {y : map y + shift in p}.
Polyhedron preimage(const Polyhedron& p, const Matrix& map, const std::optional<Vector>& shift = std::nullopt);
/// Same as preimage but only substitutes constraints (no conversion, not canonical).
HRep preimage_hrep(const HRep& h, const Matrix& map, const std::optional<Vector>& shift = std::nullopt);

Polyhedron translate(const Polyhedron& p, const Vector& shift);
/// t p for t >= 0; 0 p is {0} for nonempty p.
Polyhedron scale(const Polyhedron& p, const Rational& t);

bool subset(const Polyhedron& p, const Polyhedron& q);
bool contains(const Polyhedron& p, const Vector& x);

/// Raw cone generators as produced by the double description kernel.
struct ConeGenerators {
  std::vector<IntVector> lineality;
  std::vector<IntVector> rays;
};

/// Double description on {y in R^dim : a . y >= 0 (a in inequalities), e . y = 0 (e in equalities)}.
/// Returns a lineality basis and the extreme rays modulo lineality, all primitive.
ConeGenerators double_description(Index dim, const std::vector<IntVector>& inequalities,
                                  const std::vector<IntVector>& equalities);

}  // namespace setrisk

#endif  // SETRISK_POLYHEDRA_HPP
