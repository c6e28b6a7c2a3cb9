#include "setrisk/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace setrisk {

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) throw std::invalid_argument("not a rational: '" + std::string(whole) + "'");
  for (std::size_t k = i; k < text.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(text[k])))
      throw std::invalid_argument("not a rational: '" + std::string(whole) + "'");
  Integer value(std::string(text.substr(i)));
  return negative ? Integer(-value) : value;
}

Integer gcd_of(const IntVector& v) {
  Integer g = 0;
  for (Index i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    g = (g == 0) ? Integer(abs(v[i])) : Integer(gcd(g, v[i]));
    if (g == 1) break;
  }
  return g;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_integer(text.substr(0, slash), text);
    const Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (const auto dot_pos = text.find('.'); dot_pos != std::string_view::npos) {
    std::string digits(text.substr(0, dot_pos));
    const std::string_view frac = text.substr(dot_pos + 1);
    digits += frac;
    Integer den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    return Rational(parse_integer(digits, text), den);
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

std::string to_string(const Vector& v) {
  std::string out = "(";
  for (Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

Vector vector_of(std::initializer_list<Rational> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (const auto& x : values) v[i++] = x;
  return v;
}

Matrix matrix_of(std::initializer_list<std::initializer_list<Rational>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r ? static_cast<Index>(rows.begin()->size()) : 0;
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != c) throw std::invalid_argument("ragged matrix literal");
    Index j = 0;
    for (const auto& x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

Vector unit(Index dim, Index i) {
  Vector v = Vector::Zero(dim);
  v[i] = 1;
  return v;
}

bool is_zero(const Vector& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

bool is_zero(const IntVector& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

IntVector primitive(const IntVector& v) {
  const Integer g = gcd_of(v);
  if (g == 0 || g == 1) return v;
  IntVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

IntVector primitive(const Vector& v) {
  Integer l = 1;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) l = lcm(l, denominator(v[i]));
  IntVector scaled(v.size());
  for (Index i = 0; i < v.size(); ++i) scaled[i] = numerator(v[i]) * (l / denominator(v[i]));
  return primitive(scaled);
}

IntVector primitive_signed(const Vector& v) {
  IntVector p = primitive(v);
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    if (p[i] < 0) p = -p;
    break;
  }
  return p;
}

Vector to_rational(const IntVector& v) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

Vector flatten(const Matrix& rows) {
  Vector out(rows.rows() * rows.cols());
  for (Index r = 0; r < rows.rows(); ++r)
    for (Index c = 0; c < rows.cols(); ++c) out[r * rows.cols() + c] = rows(r, c);
  return out;
}

Matrix unflatten(const Vector& flat, Index rows, Index cols) {
  if (flat.size() != rows * cols) throw std::invalid_argument("unflatten: size mismatch");
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  return m;
}

}  // namespace setrisk
