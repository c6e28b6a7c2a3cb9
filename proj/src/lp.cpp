#include "setrisk/lp.hpp"

#include "setrisk/linalg.hpp"

namespace setrisk {

namespace {

// Dense tableau over the standard form
//   sigma_r (a_r . (p - q) - s_r) + art_r = sigma_r b_r   (inequality rows)
//   sigma_r (e_r . (p - q))       + art_r = sigma_r f_r   (equality rows)
// with p, q, s, art >= 0 and sigma_r chosen so the right-hand side is nonnegative.
class Simplex {
 public:
  explicit Simplex(const HRep& h)
      : n_(h.dim),
        mi_(static_cast<Index>(h.inequalities.size())),
        rows_(mi_ + static_cast<Index>(h.equalities.size())),
        cols_(2 * n_ + mi_ + rows_),
        t_(Matrix::Zero(rows_, cols_ + 1)),
        sigma_(static_cast<std::size_t>(rows_), 1),
        basis_(static_cast<std::size_t>(rows_)) {
    for (Index r = 0; r < rows_; ++r) {
      const bool ineq = r < mi_;
      const LinearConstraint& c = ineq ? h.inequalities[static_cast<std::size_t>(r)]
                                       : h.equalities[static_cast<std::size_t>(r - mi_)];
      const int s = c.offset < 0 ? -1 : 1;
      sigma_[static_cast<std::size_t>(r)] = s;
      for (Index j = 0; j < n_; ++j) {
        t_(r, j) = s * c.normal[j];
        t_(r, n_ + j) = -s * c.normal[j];
      }
      if (ineq) t_(r, 2 * n_ + r) = -s;
      t_(r, art(r)) = 1;
      t_(r, cols_) = s * c.offset;
      basis_[static_cast<std::size_t>(r)] = art(r);
    }
  }

  LpOutcome run(const Vector& cost_x) {
    // Phase I: minimize the sum of artificials.
    Vector cost1 = Vector::Zero(cols_);
    for (Index r = 0; r < rows_; ++r) cost1[art(r)] = 1;
    Vector obj = reduced_costs(cost1);
    iterate(obj, /*allow_artificial=*/true);
    LpOutcome out;
    if (-obj[cols_] > 0) {
      out.status = LpStatus::infeasible;
      out.certificate = multipliers(obj, 1);
      return out;
    }
    drive_out_artificials();

    Vector cost2 = Vector::Zero(cols_);
    for (Index j = 0; j < n_; ++j) {
      cost2[j] = cost_x[j];
      cost2[n_ + j] = -cost_x[j];
    }
    obj = reduced_costs(cost2);
    if (const auto entering = iterate(obj, /*allow_artificial=*/false)) {
      out.status = LpStatus::unbounded;
      out.certificate = ray(*entering);
      return out;
    }
    out.status = LpStatus::optimal;
    out.value = -obj[cols_];
    out.point = point();
    out.duals = multipliers(obj, 0);
    return out;
  }

 private:
  Index art(Index r) const { return 2 * n_ + mi_ + r; }
  bool is_artificial(Index j) const { return j >= 2 * n_ + mi_; }

  Vector reduced_costs(const Vector& cost) const {
    Vector obj(cols_ + 1);
    for (Index j = 0; j <= cols_; ++j) {
      Rational z = j < cols_ ? cost[j] : Rational(0);
      for (Index r = 0; r < rows_; ++r) {
        const Rational& cb = cost[basis_[static_cast<std::size_t>(r)]];
        if (cb != 0 && t_(r, j) != 0) z -= cb * t_(r, j);
      }
      obj[j] = z;
    }
    return obj;
  }

  void pivot(Index r, Index c, Vector& obj) {
    const Rational inv = Rational(1) / t_(r, c);
    for (Index j = 0; j <= cols_; ++j)
      if (t_(r, j) != 0) t_(r, j) *= inv;
    for (Index i = 0; i < rows_; ++i) {
      if (i == r || t_(i, c) == 0) continue;
      const Rational f = t_(i, c);
      for (Index j = 0; j <= cols_; ++j)
        if (t_(r, j) != 0) t_(i, j) -= f * t_(r, j);
    }
    if (obj[c] != 0) {
      const Rational f = obj[c];
      for (Index j = 0; j <= cols_; ++j)
        if (t_(r, j) != 0) obj[j] -= f * t_(r, j);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Bland's rule: lowest-index entering column, lowest-index leaving variable among ratio ties.
  // Returns the entering column of an unbounded direction, or nullopt at optimality.
  std::optional<Index> iterate(Vector& obj, bool allow_artificial) {
    for (;;) {
      Index entering = -1;
      for (Index j = 0; j < cols_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (obj[j] < 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return std::nullopt;
      Index leave = -1;
      Rational best;
      for (Index r = 0; r < rows_; ++r) {
        if (t_(r, entering) <= 0) continue;
        const Rational ratio = t_(r, cols_) / t_(r, entering);
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return entering;
      pivot(leave, entering, obj);
    }
  }

  void drive_out_artificials() {
    Vector scratch = Vector::Zero(cols_ + 1);
    for (Index r = 0; r < rows_; ++r) {
      if (!is_artificial(basis_[static_cast<std::size_t>(r)])) continue;
      for (Index j = 0; j < 2 * n_ + mi_; ++j) {
        if (t_(r, j) != 0) {
          pivot(r, j, scratch);
          break;
        }
      }
    }
  }

  Vector values() const {
    Vector v = Vector::Zero(cols_);
    for (Index r = 0; r < rows_; ++r) v[basis_[static_cast<std::size_t>(r)]] = t_(r, cols_);
    return v;
  }

  Vector point() const {
    const Vector v = values();
    Vector x(n_);
    for (Index j = 0; j < n_; ++j) x[j] = v[j] - v[n_ + j];
    return x;
  }

  Vector ray(Index entering) const {
    Vector d = Vector::Zero(cols_);
    d[entering] = 1;
    for (Index r = 0; r < rows_; ++r) d[basis_[static_cast<std::size_t>(r)]] = -t_(r, entering);
    Vector x(n_);
    for (Index j = 0; j < n_; ++j) x[j] = d[j] - d[n_ + j];
    return x;
  }

  // y_r = cost_art - reduced cost of art_r, mapped back through the row signs.
  Vector multipliers(const Vector& obj, int art_cost) const {
    Vector y(rows_);
    for (Index r = 0; r < rows_; ++r) y[r] = (Rational(art_cost) - obj[art(r)]) * sigma_[static_cast<std::size_t>(r)];
    return y;
  }

  Index n_, mi_, rows_, cols_;
  Matrix t_;
  std::vector<int> sigma_;
  std::vector<Index> basis_;
};

Vector combined_normal(const HRep& h, const Vector& y) {
  Vector s = Vector::Zero(h.dim);
  const Index mi = static_cast<Index>(h.inequalities.size());
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] == 0) continue;
    const LinearConstraint& c = i < mi ? h.inequalities[static_cast<std::size_t>(i)]
                                       : h.equalities[static_cast<std::size_t>(i - mi)];
    s += y[i] * c.normal;
  }
  return s;
}

Rational combined_offset(const HRep& h, const Vector& y) {
  Rational s = 0;
  const Index mi = static_cast<Index>(h.inequalities.size());
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] == 0) continue;
    s += y[i] * (i < mi ? h.inequalities[static_cast<std::size_t>(i)].offset
                        : h.equalities[static_cast<std::size_t>(i - mi)].offset);
  }
  return s;
}

bool nonnegative_on_inequalities(const HRep& h, const Vector& y) {
  for (std::size_t i = 0; i < h.inequalities.size(); ++i)
    if (y[static_cast<Index>(i)] < 0) return false;
  return true;
}

void verify(const LpOutcome& out, const HRep& h, const Vector& c) {
  auto fail = [](const char* what) { throw std::logic_error(std::string("simplex certificate check failed: ") + what); };
  switch (out.status) {
    case LpStatus::optimal: {
      const Vector& x = *out.point;
      for (const auto& k : h.inequalities)
        if (dot(k.normal, x) < k.offset) fail("point violates an inequality");
      for (const auto& k : h.equalities)
        if (dot(k.normal, x) != k.offset) fail("point violates an equality");
      if (dot(c, x) != *out.value) fail("objective value mismatch");
      const Vector& y = *out.duals;
      if (!nonnegative_on_inequalities(h, y)) fail("negative inequality multiplier");
      if (!equal(combined_normal(h, y), c)) fail("dual multipliers do not reproduce the objective");
      if (combined_offset(h, y) != *out.value) fail("duality gap");
      break;
    }
    case LpStatus::unbounded: {
      const Vector& r = *out.certificate;
      for (const auto& k : h.inequalities)
        if (dot(k.normal, r) < 0) fail("ray leaves an inequality");
      for (const auto& k : h.equalities)
        if (dot(k.normal, r) != 0) fail("ray leaves an equality");
      if (dot(c, r) >= 0) fail("ray does not improve");
      break;
    }
    case LpStatus::infeasible: {
      const Vector& y = *out.certificate;
      if (!nonnegative_on_inequalities(h, y)) fail("negative Farkas multiplier");
      if (!is_zero(combined_normal(h, y))) fail("Farkas combination is not zero");
      if (combined_offset(h, y) <= 0) fail("Farkas offset is not positive");
      break;
    }
  }
}

const HRep& some_hrep(const Polyhedron& p, std::optional<Polyhedron>& holder) {
  if (p.has_hrep()) return p.hrep();
  holder = canonical(p);
  return holder->hrep();
}

std::optional<Vector> interior_point(const HRep& h) {
  if (!h.equalities.empty()) return std::nullopt;
  std::vector<std::size_t> all(h.inequalities.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return strict_feasible(h, all);
}

// An interior point of the full-dimensional closed set `piece` outside members[i..], if any.
std::optional<Vector> uncovered_from(const HRep& piece, const std::vector<HRep>& members, std::size_t i) {
  auto inside = interior_point(piece);
  if (!inside || i == members.size()) return inside;
  const HRep& q = members[i];
  if (q.inequalities.empty()) return std::nullopt;
  for (std::size_t j = 0; j < q.inequalities.size(); ++j) {
    HRep sub = piece;
    for (std::size_t k = 0; k < j; ++k) sub.inequalities.push_back(q.inequalities[k]);
    sub.inequalities.push_back({Vector(-q.inequalities[j].normal), Rational(-q.inequalities[j].offset)});
    if (auto found = uncovered_from(sub, members, i + 1)) return found;
  }
  return std::nullopt;
}

}  // namespace

LpOutcome solve(const LinearProgram& lp) {
  const HRep& h = lp.constraints;
  if (lp.objective.size() != h.dim) throw DimensionMismatch("objective length differs from constraint dimension");
  for (const auto* list : {&h.inequalities, &h.equalities})
    for (const auto& c : *list)
      if (c.normal.size() != h.dim) throw DimensionMismatch("constraint normal length differs from dimension");
  const Vector c = lp.sense == Sense::minimize ? lp.objective : Vector(-lp.objective);
  Simplex simplex(h);
  LpOutcome out = simplex.run(c);
  verify(out, h, c);
  if (lp.sense == Sense::maximize && out.value) out.value = -*out.value;
  return out;
}

std::optional<Vector> strict_feasible(const HRep& constraints, std::span<const std::size_t> strict_indices) {
  const Index n = constraints.dim;
  std::vector<bool> strict(constraints.inequalities.size(), false);
  for (std::size_t i : strict_indices) {
    if (i >= strict.size()) throw std::out_of_range("strict_feasible: inequality index out of range");
    strict[i] = true;
  }
  HRep lifted;
  lifted.dim = n + 1;
  for (std::size_t i = 0; i < constraints.inequalities.size(); ++i) {
    const auto& c = constraints.inequalities[i];
    Vector a = Vector::Zero(n + 1);
    a.head(n) = c.normal;
    if (strict[i]) a[n] = -1;
    lifted.inequalities.push_back({std::move(a), c.offset});
  }
  for (const auto& c : constraints.equalities) {
    Vector a = Vector::Zero(n + 1);
    a.head(n) = c.normal;
    lifted.equalities.push_back({std::move(a), c.offset});
  }
  Vector cap = Vector::Zero(n + 1);
  cap[n] = -1;
  lifted.inequalities.push_back({std::move(cap), Rational(-1)});
  const LpOutcome out = solve({unit(n + 1, n), lifted, Sense::maximize});
  if (out.status != LpStatus::optimal) return std::nullopt;
  if (!strict_indices.empty() && *out.value <= 0) return std::nullopt;
  return Vector(out.point->head(n));
}

std::string to_string(const Extended& x) {
  switch (x.kind) {
    case Extended::Kind::plus_infinity: return "+inf";
    case Extended::Kind::minus_infinity: return "-inf";
    case Extended::Kind::finite: break;
  }
  return to_string(x.value);
}

Extended support_value(const Polyhedron& p, const Vector& direction) {
  if (direction.size() != p.dim()) throw DimensionMismatch("support_value: direction length differs from dimension");
  std::optional<Polyhedron> holder;
  const LpOutcome out = solve({direction, some_hrep(p, holder), Sense::maximize});
  switch (out.status) {
    case LpStatus::infeasible: throw EmptySetError("support function of the empty set");
    case LpStatus::unbounded: return Extended::plus_infinity();
    case LpStatus::optimal: break;
  }
  return Extended::finite(*out.value);
}

Extended minimum_value(const Polyhedron& p, const Vector& direction) {
  if (direction.size() != p.dim()) throw DimensionMismatch("minimum_value: direction length differs from dimension");
  std::optional<Polyhedron> holder;
  const LpOutcome out = solve({direction, some_hrep(p, holder), Sense::minimize});
  switch (out.status) {
    case LpStatus::infeasible: return Extended::plus_infinity();
    case LpStatus::unbounded: return Extended::minus_infinity();
    case LpStatus::optimal: break;
  }
  return Extended::finite(*out.value);
}

std::optional<Vector> uncovered_point(const Polyhedron& region, std::span<const Polyhedron> cover) {
  for (const auto& q : cover)
    if (q.dim() != region.dim()) throw DimensionMismatch("covered_by: member dimension differs from region");
  const Polyhedron r = canonical(region);
  if (r.is_empty()) return std::nullopt;

  // Parametrize the affine hull of the region as x0 + N y.
  const HRep& rh = r.hrep();
  Vector x0 = Vector::Zero(r.dim());
  Matrix param = Matrix::Identity(r.dim(), r.dim());
  if (!rh.equalities.empty()) {
    Matrix e(static_cast<Index>(rh.equalities.size()), r.dim());
    Vector f(e.rows());
    for (Index i = 0; i < e.rows(); ++i) {
      e.row(i) = rh.equalities[static_cast<std::size_t>(i)].normal.transpose();
      f[i] = rh.equalities[static_cast<std::size_t>(i)].offset;
    }
    x0 = *solve_linear(e, f);
    param = nullspace(e);
  }
  if (param.cols() == 0) {
    for (const auto& q : cover)
      if (contains(q, x0)) return std::nullopt;
    return x0;
  }

  const HRep piece = preimage_hrep(rh, param, x0);
  std::vector<HRep> members;
  for (const auto& q : cover) {
    std::optional<Polyhedron> holder;
    const Polyhedron pulled = dd_convert(preimage_hrep(some_hrep(q, holder), param, x0));
    if (pulled.is_empty()) continue;
    HRep flat = pulled.hrep();
    for (const auto& e : flat.equalities) {
      flat.inequalities.push_back(e);
      flat.inequalities.push_back({Vector(-e.normal), Rational(-e.offset)});
    }
    flat.equalities.clear();
    members.push_back(std::move(flat));
  }
  auto y = uncovered_from(piece, members, 0);
  if (!y) return std::nullopt;
  return Vector(x0 + param * *y);
}

bool covered_by(const Polyhedron& region, std::span<const Polyhedron> cover) {
  return !uncovered_point(region, cover).has_value();
}

}  // namespace setrisk
