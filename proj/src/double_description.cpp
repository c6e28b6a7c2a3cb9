#include "setrisk/polyhedra.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstdint>

namespace setrisk {

namespace {

using Bits = boost::dynamic_bitset<>;

struct Ray {
  IntVector v;
  Bits zero;  // processed inequalities satisfied with equality
};

Integer dot_int(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (Index i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

IntVector combine(const Integer& alpha, const IntVector& x, const Integer& beta, const IntVector& y) {
  IntVector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = alpha * x[i] - beta * y[i];
  return primitive(out);
}

// Rank over Z/pZ never exceeds the rank over Q, so it gives a safe lower bound
// for the adjacency cardinality filter.
constexpr std::uint64_t kPrime = 2305843009213693951ULL;  // 2^61 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t to_mod(const Integer& x) {
  Integer r = x % Integer(kPrime);
  if (r < 0) r += Integer(kPrime);
  return r.convert_to<std::uint64_t>();
}

Index rank_mod_p(const std::vector<const IntVector*>& rows, Index dim) {
  std::vector<std::vector<std::uint64_t>> a;
  a.reserve(rows.size());
  for (const IntVector* r : rows) {
    std::vector<std::uint64_t> row(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) row[static_cast<std::size_t>(i)] = to_mod((*r)[i]);
    a.push_back(std::move(row));
  }
  Index rank = 0;
  const std::size_t n = a.size();
  for (Index col = 0; col < dim && static_cast<std::size_t>(rank) < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = static_cast<std::size_t>(rank); r < n; ++r)
      if (a[r][static_cast<std::size_t>(col)] != 0) {
        piv = r;
        break;
      }
    if (piv == n) continue;
    std::swap(a[piv], a[static_cast<std::size_t>(rank)]);
    auto& prow = a[static_cast<std::size_t>(rank)];
    const std::uint64_t inv = powmod(prow[static_cast<std::size_t>(col)], kPrime - 2);
    for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < n; ++r) {
      const std::uint64_t f = mulmod(a[r][static_cast<std::size_t>(col)], inv);
      if (f == 0) continue;
      for (Index c = col; c < dim; ++c) {
        const std::uint64_t sub = mulmod(f, prow[static_cast<std::size_t>(c)]);
        auto& cell = a[r][static_cast<std::size_t>(c)];
        cell = cell >= sub ? cell - sub : cell + kPrime - sub;
      }
    }
    ++rank;
  }
  return rank;
}

class DoubleDescription {
 public:
  DoubleDescription(Index dim, std::size_t num_inequalities) : dim_(dim), num_ineq_(num_inequalities) {
    for (Index i = 0; i < dim; ++i) {
      IntVector e = IntVector::Zero(dim);
      e[i] = 1;
      lineality_.push_back(std::move(e));
    }
  }

  void add_equality(const IntVector& a) {
    if (eliminate_lineality(a, /*keep_as_ray=*/false, 0)) return;
    std::vector<Integer> s;
    s.reserve(rays_.size());
    for (const auto& r : rays_) s.push_back(dot_int(a, r.v));
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays_.size(); ++i)
      if (s[i] == 0) next.push_back(rays_[i]);
    add_adjacent_combinations(s, next, std::nullopt);
    rays_ = std::move(next);
  }

  void add_inequality(const IntVector& a, std::size_t k) {
    if (eliminate_lineality(a, /*keep_as_ray=*/true, k)) return;
    std::vector<Integer> s;
    s.reserve(rays_.size());
    bool any_negative = false;
    for (const auto& r : rays_) {
      s.push_back(dot_int(a, r.v));
      if (s.back() < 0) any_negative = true;
    }
    if (!any_negative) {
      for (std::size_t i = 0; i < rays_.size(); ++i)
        if (s[i] == 0) rays_[i].zero.set(k);
      return;
    }
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      if (s[i] > 0) next.push_back(rays_[i]);
      if (s[i] == 0) {
        next.push_back(rays_[i]);
        next.back().zero.set(k);
      }
    }
    add_adjacent_combinations(s, next, k);
    rays_ = std::move(next);
  }

  ConeGenerators result() const {
    ConeGenerators out;
    out.lineality = lineality_;
    for (const auto& r : rays_) out.rays.push_back(r.v);
    return out;
  }

 private:
  // Cuts a lineality direction with a . l != 0. Returns false when every lineality vector is orthogonal to a.
  bool eliminate_lineality(const IntVector& a, bool keep_as_ray, std::size_t k) {
    std::size_t pick = lineality_.size();
    Integer al;
    for (std::size_t j = 0; j < lineality_.size(); ++j) {
      al = dot_int(a, lineality_[j]);
      if (al != 0) {
        pick = j;
        break;
      }
    }
    if (pick == lineality_.size()) return false;
    IntVector l = lineality_[pick];
    if (al < 0) {
      l = -l;
      al = -al;
    }
    lineality_.erase(lineality_.begin() + static_cast<std::ptrdiff_t>(pick));
    for (auto& other : lineality_) {
      const Integer ao = dot_int(a, other);
      if (ao != 0) other = combine(al, other, ao, l);
    }
    for (auto& r : rays_) {
      const Integer ar = dot_int(a, r.v);
      if (ar != 0) r.v = combine(al, r.v, ar, l);
      if (keep_as_ray) r.zero.set(k);
    }
    if (keep_as_ray) {
      Ray ray{l, Bits(num_ineq_)};
      for (std::size_t i = 0; i < k; ++i) ray.zero.set(i);
      rays_.push_back(std::move(ray));
    }
    return true;
  }

  void add_adjacent_combinations(const std::vector<Integer>& s, std::vector<Ray>& next,
                                 std::optional<std::size_t> k) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      if (s[i] > 0) pos.push_back(i);
      if (s[i] < 0) neg.push_back(i);
    }
    if (pos.empty() || neg.empty()) return;

    // Two extreme rays of a pointed cone of dimension D are adjacent only if they share
    // at least D - 2 tight constraints.
    std::size_t min_common = 0;
    if (pos.size() * neg.size() > 16) {
      std::vector<const IntVector*> rows;
      for (const auto& r : rays_) rows.push_back(&r.v);
      for (const auto& l : lineality_) rows.push_back(&l);
      const Index d = rank_mod_p(rows, dim_) - static_cast<Index>(lineality_.size());
      if (d > 2) min_common = static_cast<std::size_t>(d - 2);
    }

    Bits common(num_ineq_);
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        common = rays_[p].zero & rays_[n].zero;
        if (common.count() < min_common) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays_.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (common.is_subset_of(rays_[r].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        // s_p > 0 > s_n: s_p * n - s_n * p lies on the hyperplane with positive weights.
        Ray ray{combine(s[p], rays_[n].v, s[n], rays_[p].v), common};
        if (k) ray.zero.set(*k);
        next.push_back(std::move(ray));
      }
    }
  }

  Index dim_;
  std::size_t num_ineq_;
  std::vector<IntVector> lineality_;
  std::vector<Ray> rays_;
};

}  // namespace

ConeGenerators double_description(Index dim, const std::vector<IntVector>& inequalities,
                                  const std::vector<IntVector>& equalities) {
  DoubleDescription dd(dim, inequalities.size());
  for (const auto& e : equalities) {
    if (e.size() != dim) throw DimensionMismatch("equality row length differs from dimension");
    if (!is_zero(e)) dd.add_equality(e);
  }
  for (std::size_t k = 0; k < inequalities.size(); ++k) {
    if (inequalities[k].size() != dim) throw DimensionMismatch("inequality row length differs from dimension");
    if (!is_zero(inequalities[k])) dd.add_inequality(inequalities[k], k);
  }
  return dd.result();
}

}  // namespace setrisk
