#ifndef SETRISK_SCALAR_HPP
#define SETRISK_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace setrisk {

namespace mp = boost::multiprecision;

/// Arbitrary-precision integer (GMP backed).
using Integer = mp::number<mp::gmp_int, mp::et_off>;
/// Arbitrary-precision rational, always kept in lowest terms with positive denominator.
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<Rational>;
using Matrix = MatrixX<Rational>;
using IntVector = VectorX<Integer>;

/// Parses "p/q", "-p", "p" (and decimal "1.25") exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// "p/q" or "p"; inverse of parse_rational.
std::string to_string(const Rational& value);

std::string to_string(const Vector& v);

inline int sign(const Rational& x) { return x.sign(); }
inline int sign(const Integer& x) { return x.sign(); }

Vector vector_of(std::initializer_list<Rational> values);
Matrix matrix_of(std::initializer_list<std::initializer_list<Rational>> rows);

/// Unit vector e_i in R^dim.
Vector unit(Index dim, Index i);

bool is_zero(const Vector& v);
bool is_zero(const IntVector& v);

/// Lexicographic strict order on equally sized vectors.
template <typename Scalar>
bool lex_less(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  for (Index i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

template <typename Scalar>
bool equal(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

/// Exact dot product; avoids Eigen's redux path, which assumes a cheap Scalar copy.
template <typename DerivedA, typename DerivedB>
auto dot(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Scalar s = 0;
  for (Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

/// Scales by a positive factor to a primitive integer vector (gcd of entries 1).
IntVector primitive(const Vector& v);
IntVector primitive(const IntVector& v);

/// Scales by a nonzero factor so the leading nonzero entry is positive and the vector is primitive.
IntVector primitive_signed(const Vector& v);

Vector to_rational(const IntVector& v);

/// Scenario-major flattening of an n x d matrix into R^{n d}.
Vector flatten(const Matrix& rows);
Matrix unflatten(const Vector& flat, Index rows, Index cols);

}  // namespace setrisk

#endif  // SETRISK_SCALAR_HPP
