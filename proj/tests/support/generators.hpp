#ifndef SETRISK_TESTS_GENERATORS_HPP
#define SETRISK_TESTS_GENERATORS_HPP

#include "setrisk/polyhedra.hpp"

#include <random>

namespace setrisk::testing {

/// Deterministic source of small rational test data.
class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// p/q with |p| <= span and q in [1, max_den].
  Rational rational(int span, int max_den = 1) {
    return Rational(Integer(integer(-span, span)), Integer(integer(1, max_den)));
  }
  Rational positive(int span, int max_den = 1) {
    return Rational(Integer(integer(1, span)), Integer(integer(1, max_den)));
  }

  Vector vector(Index dim, int span, int max_den = 1) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = rational(span, max_den);
    return v;
  }
  Vector nonzero_vector(Index dim, int span, int max_den = 1) {
    for (;;) {
      Vector v = vector(dim, span, max_den);
      if (!is_zero(v)) return v;
    }
  }

  /// Random H-description with `m` inequalities (possibly empty, unbounded or lower dimensional).
  HRep hrep(Index dim, int m, int span = 3) {
    HRep h;
    h.dim = dim;
    for (int k = 0; k < m; ++k) h.add_inequality(nonzero_vector(dim, span), rational(span * 2));
    if (coin(0.15)) h.add_equality(nonzero_vector(dim, span), rational(span));
    return h;
  }

  /// Random polyhedral cone given by generators.
  Polyhedron cone(Index dim, int max_rays, int span = 3) {
    std::vector<Vector> rays, lin;
    const int nr = integer(0, max_rays);
    for (int k = 0; k < nr; ++k) rays.push_back(nonzero_vector(dim, span));
    if (coin(0.2)) lin.push_back(nonzero_vector(dim, span));
    return Polyhedron::cone(dim, rays, lin);
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

}  // namespace setrisk::testing

#endif  // SETRISK_TESTS_GENERATORS_HPP
