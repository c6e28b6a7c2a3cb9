#include "setrisk/polyhedra.hpp"

#include "setrisk/linalg.hpp"

#include <algorithm>
#include <set>

namespace setrisk {

// ---------------------------------------------------------------- HRep

HRep HRep::empty_set(Index dim) {
  HRep h;
  h.dim = dim;
  h.inequalities.push_back({Vector::Zero(dim), Rational(1)});
  return h;
}

bool HRep::marks_empty() const {
  for (const auto& c : inequalities)
    if (is_zero(c.normal) && c.offset > 0) return true;
  for (const auto& c : equalities)
    if (is_zero(c.normal) && c.offset != 0) return true;
  return false;
}

void HRep::add_inequality(Vector normal, Rational offset) {
  if (normal.size() != dim) throw DimensionMismatch("inequality normal has wrong length");
  inequalities.push_back({std::move(normal), std::move(offset)});
}

void HRep::add_equality(Vector normal, Rational offset) {
  if (normal.size() != dim) throw DimensionMismatch("equality normal has wrong length");
  equalities.push_back({std::move(normal), std::move(offset)});
}

namespace {

// The H-description of p, canonicalizing into `holder` when p has none.
const HRep& some_hrep(const Polyhedron& p, std::optional<Polyhedron>& holder) {
  if (p.has_hrep()) return p.hrep();
  holder = canonical(p);
  return holder->hrep();
}

void check_hrep(const HRep& h) {
  if (h.dim < 1) throw DimensionMismatch("polyhedron dimension must be positive");
  for (const auto* list : {&h.inequalities, &h.equalities})
    for (const auto& c : *list)
      if (c.normal.size() != h.dim) throw DimensionMismatch("constraint normal length differs from dimension");
}

void check_vrep(const VRep& v) {
  if (v.dim < 1) throw DimensionMismatch("polyhedron dimension must be positive");
  for (const auto* list : {&v.vertices, &v.rays, &v.lineality})
    for (const auto& x : *list)
      if (x.size() != v.dim) throw DimensionMismatch("generator length differs from dimension");
}

IntVector homogenize(const LinearConstraint& c) {
  Vector row(c.normal.size() + 1);
  row[0] = -c.offset;
  row.tail(c.normal.size()) = c.normal;
  return primitive(row);
}

IntVector homogenize_point(const Vector& x, const Rational& lead) {
  Vector row(x.size() + 1);
  row[0] = lead;
  row.tail(x.size()) = x;
  return primitive(row);
}

Vector tail_of(const IntVector& y) {
  Vector out(y.size() - 1);
  for (Index i = 1; i < y.size(); ++i) out[i - 1] = Rational(y[i]);
  return out;
}

// Minimal V-representation of an H-described set (not yet in canonical order).
VRep h_to_v(const HRep& h) {
  VRep v;
  v.dim = h.dim;
  if (h.marks_empty()) return v;
  std::vector<IntVector> ineq, eq;
  for (const auto& c : h.inequalities) ineq.push_back(homogenize(c));
  IntVector x0 = IntVector::Zero(h.dim + 1);
  x0[0] = 1;
  ineq.push_back(x0);
  for (const auto& c : h.equalities) eq.push_back(homogenize(c));
  const ConeGenerators gens = double_description(h.dim + 1, ineq, eq);
  for (const auto& l : gens.lineality) v.lineality.push_back(tail_of(l));
  for (const auto& r : gens.rays) {
    if (r[0] > 0) {
      Vector x = tail_of(r);
      const Rational scale_by = Rational(1) / Rational(r[0]);
      for (Index i = 0; i < x.size(); ++i) x[i] *= scale_by;
      v.vertices.push_back(std::move(x));
    } else {
      v.rays.push_back(tail_of(r));
    }
  }
  if (v.vertices.empty()) return VRep{h.dim, {}, {}, {}};
  return v;
}

// Minimal H-representation of a V-described set: facets of the homogenized generator cone.
HRep v_to_h(const VRep& v) {
  if (v.vertices.empty()) return HRep::empty_set(v.dim);
  HRep h;
  h.dim = v.dim;
  std::vector<IntVector> ineq, eq;
  for (const auto& x : v.vertices) ineq.push_back(homogenize_point(x, 1));
  for (const auto& r : v.rays)
    if (!is_zero(r)) ineq.push_back(homogenize_point(r, 0));
  for (const auto& l : v.lineality)
    if (!is_zero(l)) eq.push_back(homogenize_point(l, 0));
  const ConeGenerators gens = double_description(v.dim + 1, ineq, eq);
  // y = (c0, a) with c0 + a . x >= 0 on every generator, i.e. a . x >= -c0.
  for (const auto& y : gens.lineality) {
    Vector a = tail_of(y);
    if (is_zero(a)) continue;
    h.equalities.push_back({std::move(a), Rational(-y[0])});
  }
  for (const auto& y : gens.rays) {
    Vector a = tail_of(y);
    if (is_zero(a)) continue;
    h.inequalities.push_back({std::move(a), Rational(-y[0])});
  }
  return h;
}

Vector joined(const LinearConstraint& c) {
  Vector row(c.normal.size() + 1);
  row.head(c.normal.size()) = c.normal;
  row[c.normal.size()] = c.offset;
  return row;
}

LinearConstraint split(const IntVector& row) {
  const Index n = row.size() - 1;
  Vector normal(n);
  for (Index i = 0; i < n; ++i) normal[i] = Rational(row[i]);
  return {std::move(normal), Rational(row[n])};
}

bool constraint_less(const LinearConstraint& a, const LinearConstraint& b) {
  return lex_less(joined(a), joined(b));
}

bool constraint_equal(const LinearConstraint& a, const LinearConstraint& b) {
  return a.offset == b.offset && equal(a.normal, b.normal);
}

HRep canonical_h(const HRep& h) {
  HRep out;
  out.dim = h.dim;
  if (h.marks_empty()) return HRep::empty_set(h.dim);
  RowEchelon<Rational> eq_basis{Matrix(0, h.dim + 1), {}};
  if (!h.equalities.empty()) {
    std::vector<Vector> rows;
    for (const auto& c : h.equalities) rows.push_back(joined(c));
    eq_basis = rref(stack_rows(rows, h.dim + 1));
    for (Index r = 0; r < eq_basis.reduced.rows(); ++r) {
      Vector row = eq_basis.reduced.row(r).transpose();
      out.equalities.push_back(split(primitive_signed(row)));
    }
  }
  for (const auto& c : h.inequalities) {
    Vector row = reduce_modulo<Rational>(joined(c), eq_basis);
    if (is_zero(Vector(row.head(h.dim)))) continue;
    out.inequalities.push_back(split(primitive(row)));
  }
  std::sort(out.equalities.begin(), out.equalities.end(), constraint_less);
  std::sort(out.inequalities.begin(), out.inequalities.end(), constraint_less);
  out.inequalities.erase(std::unique(out.inequalities.begin(), out.inequalities.end(), constraint_equal),
                         out.inequalities.end());
  return out;
}

void sort_unique(std::vector<Vector>& vs) {
  std::sort(vs.begin(), vs.end(), [](const Vector& a, const Vector& b) { return lex_less(a, b); });
  vs.erase(std::unique(vs.begin(), vs.end(), [](const Vector& a, const Vector& b) { return equal(a, b); }),
           vs.end());
}

VRep canonical_v(const VRep& v) {
  VRep out;
  out.dim = v.dim;
  if (v.vertices.empty()) return out;
  RowEchelon<Rational> lin{Matrix(0, v.dim), {}};
  if (!v.lineality.empty()) {
    lin = rref(stack_rows(v.lineality, v.dim));
    for (Index r = 0; r < lin.reduced.rows(); ++r) {
      Vector row = lin.reduced.row(r).transpose();
      out.lineality.push_back(to_rational(primitive_signed(row)));
    }
  }
  for (const auto& r : v.rays) {
    Vector red = reduce_modulo<Rational>(r, lin);
    if (!is_zero(red)) out.rays.push_back(to_rational(primitive(red)));
  }
  for (const auto& x : v.vertices) out.vertices.push_back(reduce_modulo<Rational>(x, lin));
  sort_unique(out.lineality);
  sort_unique(out.rays);
  sort_unique(out.vertices);
  return out;
}

bool same_constraints(const std::vector<LinearConstraint>& a, const std::vector<LinearConstraint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!constraint_equal(a[i], b[i])) return false;
  return true;
}

bool satisfies(const LinearConstraint& c, const Vector& x, bool equality) {
  const Rational lhs = dot(c.normal, x);
  return equality ? lhs == c.offset : lhs >= c.offset;
}

bool generators_within(const VRep& gens, const HRep& h) {
  for (const auto& c : h.inequalities) {
    for (const auto& x : gens.vertices)
      if (dot(c.normal, x) < c.offset) return false;
    for (const auto& r : gens.rays)
      if (dot(c.normal, r) < 0) return false;
    for (const auto& l : gens.lineality)
      if (dot(c.normal, l) != 0) return false;
  }
  for (const auto& c : h.equalities) {
    for (const auto& x : gens.vertices)
      if (dot(c.normal, x) != c.offset) return false;
    for (const auto& r : gens.rays)
      if (dot(c.normal, r) != 0) return false;
    for (const auto& l : gens.lineality)
      if (dot(c.normal, l) != 0) return false;
  }
  return true;
}

void require_same_dim(const Polyhedron& p, const Polyhedron& q, const char* op) {
  if (p.dim() != q.dim())
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(p.dim()) + " and " +
                            std::to_string(q.dim()));
}

}  // namespace

// ---------------------------------------------------------------- Polyhedron

Polyhedron::Polyhedron(HRep h) : dim_(h.dim) {
  check_hrep(h);
  h_ = std::move(h);
}

Polyhedron::Polyhedron(VRep v) : dim_(v.dim) {
  check_vrep(v);
  v_ = std::move(v);
}

Polyhedron make_canonical(HRep h, VRep v) {
  Polyhedron p;
  p.dim_ = h.dim;
  p.h_ = std::move(h);
  p.v_ = std::move(v);
  p.canonical_ = true;
  return p;
}

Polyhedron Polyhedron::whole_space(Index dim) {
  VRep v;
  v.dim = dim;
  v.vertices.push_back(Vector::Zero(dim));
  for (Index i = 0; i < dim; ++i) v.lineality.push_back(unit(dim, i));
  return dd_convert(v);
}

Polyhedron Polyhedron::empty(Index dim) {
  if (dim < 1) throw DimensionMismatch("polyhedron dimension must be positive");
  return make_canonical(HRep::empty_set(dim), VRep{dim, {}, {}, {}});
}

Polyhedron Polyhedron::point(const Vector& x) { return dd_convert(VRep{x.size(), {x}, {}, {}}); }

Polyhedron Polyhedron::orthant(Index dim) {
  VRep v{dim, {Vector::Zero(dim)}, {}, {}};
  for (Index i = 0; i < dim; ++i) v.rays.push_back(unit(dim, i));
  return dd_convert(v);
}

Polyhedron Polyhedron::cone(Index dim, std::vector<Vector> rays, std::vector<Vector> lineality) {
  return dd_convert(VRep{dim, {Vector::Zero(dim)}, std::move(rays), std::move(lineality)});
}

Polyhedron Polyhedron::cone_from_inequalities(Index dim, const std::vector<Vector>& normals) {
  HRep h;
  h.dim = dim;
  for (const auto& a : normals) h.add_inequality(a, 0);
  return dd_convert(h);
}

const HRep& Polyhedron::hrep() const {
  if (!h_) throw std::logic_error("polyhedron has no H-representation; canonicalize first");
  return *h_;
}

const VRep& Polyhedron::vrep() const {
  if (!v_) throw std::logic_error("polyhedron has no V-representation; canonicalize first");
  return *v_;
}

bool Polyhedron::is_empty() const {
  if (!canonical_) return canonical(*this).is_empty();
  return v_->vertices.empty();
}

bool Polyhedron::is_cone() const {
  if (!canonical_) return canonical(*this).is_cone();
  return v_->vertices.size() == 1 && is_zero(v_->vertices.front());
}

bool Polyhedron::is_full_dimensional() const {
  if (!canonical_) return canonical(*this).is_full_dimensional();
  return !is_empty() && h_->equalities.empty();
}

Index Polyhedron::affine_dim() const {
  if (!canonical_) return canonical(*this).affine_dim();
  if (is_empty()) return -1;
  return dim_ - static_cast<Index>(h_->equalities.size());
}

bool operator==(const Polyhedron& a, const Polyhedron& b) {
  if (a.dim() != b.dim()) return false;
  const Polyhedron ca = canonical(a);
  const Polyhedron cb = canonical(b);
  return same_constraints(ca.hrep().equalities, cb.hrep().equalities) &&
         same_constraints(ca.hrep().inequalities, cb.hrep().inequalities);
}

// ---------------------------------------------------------------- conversion

Polyhedron canonical(const Polyhedron& p) {
  if (p.is_canonical()) return p;
  return p.has_hrep() ? dd_convert(p.hrep()) : dd_convert(p.vrep());
}

Polyhedron dd_convert(const HRep& h) {
  check_hrep(h);
  const VRep v = h_to_v(h);
  if (v.vertices.empty()) return Polyhedron::empty(h.dim);
  return make_canonical(canonical_h(v_to_h(v)), canonical_v(v));
}

Polyhedron dd_convert(const VRep& v) {
  check_vrep(v);
  if (v.vertices.empty()) return Polyhedron::empty(v.dim);
  const HRep h = v_to_h(v);
  return make_canonical(canonical_h(h), canonical_v(h_to_v(h)));
}

// ---------------------------------------------------------------- operations

Polyhedron dual_cone(const Polyhedron& c, const std::optional<Matrix>& subspace_basis) {
  const Polyhedron cc = canonical(c);
  if (!cc.is_cone()) throw NotACone("dual_cone requires a nonempty cone with the origin as only vertex");
  const VRep& g = cc.vrep();
  HRep h;
  h.dim = cc.dim();
  for (const auto& r : g.rays) h.add_inequality(r, 0);
  for (const auto& l : g.lineality) h.add_equality(l, 0);
  if (subspace_basis) {
    const Matrix& basis = *subspace_basis;
    if (basis.rows() != cc.dim()) throw DimensionMismatch("subspace basis has wrong ambient dimension");
    for (const auto* list : {&g.rays, &g.lineality})
      for (const auto& x : *list)
        if (!solve_linear(basis, x)) throw DimensionMismatch("cone does not lie in the given subspace");
    const Matrix complement = nullspace(Matrix(basis.transpose()));
    for (Index k = 0; k < complement.cols(); ++k) h.add_equality(complement.col(k), 0);
  }
  return dd_convert(h);
}

Polyhedron minkowski_sum(const Polyhedron& p, const Polyhedron& q) {
  require_same_dim(p, q, "minkowski_sum");
  const Polyhedron cp = canonical(p);
  const Polyhedron cq = canonical(q);
  if (cp.is_empty() || cq.is_empty()) return Polyhedron::empty(p.dim());
  VRep v;
  v.dim = p.dim();
  for (const auto& a : cp.vrep().vertices)
    for (const auto& b : cq.vrep().vertices) v.vertices.push_back(a + b);
  for (const auto* src : {&cp.vrep(), &cq.vrep()}) {
    v.rays.insert(v.rays.end(), src->rays.begin(), src->rays.end());
    v.lineality.insert(v.lineality.end(), src->lineality.begin(), src->lineality.end());
  }
  return dd_convert(v);
}

Polyhedron intersect(const Polyhedron& p, const Polyhedron& q) {
  require_same_dim(p, q, "intersect");
  HRep h;
  h.dim = p.dim();
  for (const auto* src : {&p, &q}) {
    std::optional<Polyhedron> s_holder;
    const HRep& s = some_hrep(*src, s_holder);
    h.inequalities.insert(h.inequalities.end(), s.inequalities.begin(), s.inequalities.end());
    h.equalities.insert(h.equalities.end(), s.equalities.begin(), s.equalities.end());
  }
  return dd_convert(h);
}

Polyhedron image(const Polyhedron& p, const Matrix& map, const std::optional<Vector>& shift) {
  if (map.cols() != p.dim()) throw DimensionMismatch("image: map columns differ from polyhedron dimension");
  if (shift && shift->size() != map.rows()) throw DimensionMismatch("image: shift length differs from map rows");
  const Polyhedron cp = canonical(p);
  if (cp.is_empty()) return Polyhedron::empty(map.rows());
  VRep v;
  v.dim = map.rows();
  for (const auto& x : cp.vrep().vertices) {
    Vector y = map * x;
    if (shift) y += *shift;
    v.vertices.push_back(std::move(y));
  }
  for (const auto& r : cp.vrep().rays) v.rays.push_back(map * r);
  for (const auto& l : cp.vrep().lineality) v.lineality.push_back(map * l);
  return dd_convert(v);
}

HRep preimage_hrep(const HRep& h, const Matrix& map, const std::optional<Vector>& shift) {
  if (map.rows() != h.dim) throw DimensionMismatch("preimage: map rows differ from polyhedron dimension");
  if (shift && shift->size() != h.dim) throw DimensionMismatch("preimage: shift length differs from dimension");
  HRep out;
  out.dim = map.cols();
  bool infeasible = false;
  auto pull = [&](const LinearConstraint& c, bool equality) {
    Vector normal = map.transpose() * c.normal;
    Rational offset = c.offset;
    if (shift) offset -= dot(c.normal, *shift);
    if (is_zero(normal)) {
      if (equality ? offset != 0 : offset > 0) infeasible = true;
      return;
    }
    (equality ? out.equalities : out.inequalities).push_back({std::move(normal), std::move(offset)});
  };
  for (const auto& c : h.inequalities) pull(c, false);
  for (const auto& c : h.equalities) pull(c, true);
  if (infeasible) return HRep::empty_set(out.dim);
  return out;
}

Polyhedron preimage(const Polyhedron& p, const Matrix& map, const std::optional<Vector>& shift) {
  std::optional<Polyhedron> h_holder;
  const HRep& h = some_hrep(p, h_holder);
  return dd_convert(preimage_hrep(h, map, shift));
}

Polyhedron project(const Polyhedron& p, std::span<const Index> keep) {
  if (keep.empty()) throw DimensionMismatch("project: no coordinates kept");
  std::set<Index> seen;
  for (Index k : keep) {
    if (k < 0 || k >= p.dim()) throw DimensionMismatch("project: coordinate index out of range");
    if (!seen.insert(k).second) throw DimensionMismatch("project: repeated coordinate index");
  }
  Matrix select = Matrix::Zero(static_cast<Index>(keep.size()), p.dim());
  for (std::size_t i = 0; i < keep.size(); ++i) select(static_cast<Index>(i), keep[i]) = 1;
  return image(p, select);
}

Polyhedron translate(const Polyhedron& p, const Vector& shift) {
  if (shift.size() != p.dim()) throw DimensionMismatch("translate: shift length differs from dimension");
  const Polyhedron cp = canonical(p);
  if (cp.is_empty()) return cp;
  VRep v = cp.vrep();
  for (auto& x : v.vertices) x += shift;
  return dd_convert(v);
}

Polyhedron scale(const Polyhedron& p, const Rational& t) {
  if (t < 0) throw std::invalid_argument("scale: factor must be nonnegative");
  const Polyhedron cp = canonical(p);
  if (cp.is_empty()) return cp;
  if (t == 0) return Polyhedron::point(Vector::Zero(p.dim()));
  VRep v = cp.vrep();
  for (auto& x : v.vertices)
    for (Index i = 0; i < x.size(); ++i) x[i] *= t;
  return dd_convert(v);
}

Polyhedron recession_cone(const Polyhedron& p) {
  const Polyhedron cp = canonical(p);
  if (cp.is_empty()) return cp;
  return Polyhedron::cone(p.dim(), cp.vrep().rays, cp.vrep().lineality);
}

Polyhedron cartesian_product(std::span<const Polyhedron> blocks) {
  if (blocks.empty()) throw DimensionMismatch("cartesian_product: no blocks");
  Index total = 0;
  for (const auto& b : blocks) total += b.dim();
  HRep h;
  h.dim = total;
  Index offset = 0;
  for (const auto& b : blocks) {
    std::optional<Polyhedron> s_holder;
    const HRep& s = some_hrep(b, s_holder);
    auto embed = [&](const LinearConstraint& c) {
      Vector n = Vector::Zero(total);
      n.segment(offset, b.dim()) = c.normal;
      return LinearConstraint{std::move(n), c.offset};
    };
    for (const auto& c : s.inequalities) h.inequalities.push_back(embed(c));
    for (const auto& c : s.equalities) h.equalities.push_back(embed(c));
    offset += b.dim();
  }
  return dd_convert(h);
}

bool subset(const Polyhedron& p, const Polyhedron& q) {
  require_same_dim(p, q, "subset");
  const Polyhedron cp = canonical(p);
  if (cp.is_empty()) return true;
  std::optional<Polyhedron> h_holder;
  const HRep& h = some_hrep(q, h_holder);
  if (h.marks_empty()) return false;
  return generators_within(cp.vrep(), h);
}

bool contains(const Polyhedron& p, const Vector& x) {
  if (x.size() != p.dim()) throw DimensionMismatch("contains: point length differs from dimension");
  std::optional<Polyhedron> h_holder;
  const HRep& h = some_hrep(p, h_holder);
  if (h.marks_empty()) return false;
  for (const auto& c : h.inequalities)
    if (!satisfies(c, x, false)) return false;
  for (const auto& c : h.equalities)
    if (!satisfies(c, x, true)) return false;
  return true;
}

}  // namespace setrisk
