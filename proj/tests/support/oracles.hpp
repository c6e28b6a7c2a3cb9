#ifndef SETRISK_TESTS_ORACLES_HPP
#define SETRISK_TESTS_ORACLES_HPP

// Deliberately naive reference computations. They share no code with the
// double description kernel beyond exact elimination.

#include "setrisk/linalg.hpp"
#include "setrisk/polyhedra.hpp"

#include <algorithm>
#include <functional>

namespace setrisk::testing {

/// Every inequality and both directions of every equality, as rows a . x >= b.
inline std::vector<LinearConstraint> as_inequalities(const HRep& h) {
  std::vector<LinearConstraint> rows = h.inequalities;
  for (const auto& e : h.equalities) {
    rows.push_back(e);
    rows.push_back({Vector(-e.normal), Rational(-e.offset)});
  }
  return rows;
}

inline bool satisfies_all(const std::vector<LinearConstraint>& rows, const Vector& x, bool homogeneous) {
  for (const auto& c : rows)
    if (dot(c.normal, x) < (homogeneous ? Rational(0) : c.offset)) return false;
  return true;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline void sort_vectors(std::vector<Vector>& vs) {
  std::sort(vs.begin(), vs.end(), [](const Vector& a, const Vector& b) { return lex_less(a, b); });
  vs.erase(std::unique(vs.begin(), vs.end(), [](const Vector& a, const Vector& b) { return equal(a, b); }), vs.end());
}

/// Vertices of a pointed polyhedron: feasible solutions of every nonsingular dim x dim active system.
inline std::vector<Vector> brute_vertices(const HRep& h) {
  const auto rows = as_inequalities(h);
  std::vector<Vector> out;
  for_each_subset(rows.size(), static_cast<std::size_t>(h.dim), [&](const std::vector<std::size_t>& idx) {
    Matrix a(h.dim, h.dim);
    Vector b(h.dim);
    for (Index r = 0; r < h.dim; ++r) {
      a.row(r) = rows[idx[static_cast<std::size_t>(r)]].normal.transpose();
      b[r] = rows[idx[static_cast<std::size_t>(r)]].offset;
    }
    if (rank(a) < h.dim) return;
    const auto x = solve_linear(a, b);
    if (x && satisfies_all(rows, *x, false)) out.push_back(*x);
  });
  sort_vectors(out);
  return out;
}

/// Extreme rays (primitive) of the pointed cone {r : a . r >= 0} built from the homogeneous rows.
inline std::vector<Vector> brute_extreme_rays(const HRep& h) {
  const auto rows = as_inequalities(h);
  std::vector<Vector> out;
  if (h.dim == 1) {
    for (const Rational s : {Rational(1), Rational(-1)}) {
      Vector r(1);
      r[0] = s;
      if (satisfies_all(rows, r, true)) out.push_back(r);
    }
    return out;
  }
  for_each_subset(rows.size(), static_cast<std::size_t>(h.dim - 1), [&](const std::vector<std::size_t>& idx) {
    Matrix a(h.dim - 1, h.dim);
    for (Index r = 0; r < h.dim - 1; ++r) a.row(r) = rows[idx[static_cast<std::size_t>(r)]].normal.transpose();
    const Matrix ns = nullspace(a);
    if (ns.cols() != 1) return;
    for (const int s : {1, -1}) {
      Vector r = ns.col(0);
      if (s < 0) r = -r;
      if (satisfies_all(rows, r, true)) out.push_back(to_rational(primitive(r)));
    }
  });
  sort_vectors(out);
  return out;
}

/// Fourier-Motzkin elimination of coordinate j; the result keeps dimension dim with a zero column j.
inline HRep fourier_motzkin(const HRep& h, Index j) {
  const auto rows = as_inequalities(h);
  HRep out;
  out.dim = h.dim;
  std::vector<const LinearConstraint*> pos, neg;
  for (const auto& c : rows) {
    if (c.normal[j] > 0) pos.push_back(&c);
    else if (c.normal[j] < 0) neg.push_back(&c);
    else out.inequalities.push_back(c);
  }
  for (const auto* p : pos)
    for (const auto* n : neg) {
      const Rational sp = p->normal[j], sn = -n->normal[j];
      out.inequalities.push_back({Vector(sn * p->normal + sp * n->normal), sn * p->offset + sp * n->offset});
    }
  std::vector<LinearConstraint> kept;
  for (auto& c : out.inequalities) {
    if (is_zero(c.normal)) {
      if (c.offset > 0) return HRep::empty_set(h.dim);
      continue;
    }
    kept.push_back(c);
  }
  out.inequalities = std::move(kept);
  return out;
}

/// Drops the listed zero columns, mapping an FM result to the kept coordinates.
inline HRep keep_columns(const HRep& h, const std::vector<Index>& keep) {
  HRep out;
  out.dim = static_cast<Index>(keep.size());
  for (const auto& c : h.inequalities) {
    Vector n(out.dim);
    for (std::size_t i = 0; i < keep.size(); ++i) n[static_cast<Index>(i)] = c.normal[keep[i]];
    out.inequalities.push_back({n, c.offset});
  }
  return out;
}

}  // namespace setrisk::testing

#endif  // SETRISK_TESTS_ORACLES_HPP
