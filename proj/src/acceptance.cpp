#include "setrisk/acceptance.hpp"

#include "setrisk/linalg.hpp"
#include "setrisk/lp.hpp"

#include <functional>

namespace setrisk {

// ---------------------------------------------------------------- AcceptanceSet

AcceptanceSet::AcceptanceSet(OnePeriodMarket market, std::vector<Polyhedron> members, bool is_union)
    : market_(std::move(market)), members_(std::move(members)), is_union_(is_union) {}

AcceptanceSet AcceptanceSet::polyhedral(OnePeriodMarket market, Polyhedron region) {
  const Index dim = market.n() * market.d();
  if (region.dim() != dim)
    throw DimensionMismatch("acceptance region has dimension " + std::to_string(region.dim()) + ", expected " +
                            std::to_string(dim));
  std::vector<Polyhedron> members{canonical(region)};
  return AcceptanceSet(std::move(market), std::move(members), false);
}

AcceptanceSet AcceptanceSet::union_of(OnePeriodMarket market, std::vector<Polyhedron> members) {
  const Index dim = market.n() * market.d();
  std::vector<Polyhedron> nonempty;
  for (auto& p : members) {
    if (p.dim() != dim) throw DimensionMismatch("union member has wrong dimension");
    Polyhedron c = canonical(p);
    if (!c.is_empty()) nonempty.push_back(std::move(c));
  }
  std::vector<Polyhedron> kept;
  for (std::size_t i = 0; i < nonempty.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < nonempty.size() && !redundant; ++j) {
      if (i == j || !subset(nonempty[i], nonempty[j])) continue;
      // Equal members: keep the first occurrence only.
      redundant = !subset(nonempty[j], nonempty[i]) || j < i;
    }
    if (!redundant) kept.push_back(nonempty[i]);
  }
  if (kept.empty()) return polyhedral(std::move(market), Polyhedron::empty(dim));
  if (kept.size() == 1) return polyhedral(std::move(market), kept.front());
  return AcceptanceSet(std::move(market), std::move(kept), true);
}

const Polyhedron& AcceptanceSet::region() const {
  if (is_union_) throw UnionNotSupported("operation requires a single polyhedral acceptance region");
  return members_.front();
}

// ---------------------------------------------------------------- embeddings

Matrix deterministic_embedding(Index n, Index d) { return repeat_rows(Matrix::Identity(d, d), n); }

Matrix eligible_embedding(const OnePeriodMarket& m) { return repeat_rows(m.eligible.basis, m.n()); }

Polyhedron initial_cone_embedded(const OnePeriodMarket& m) {
  return image(eligible_initial_cone(m).cone_ambient, deterministic_embedding(m.n(), m.d()));
}

// ---------------------------------------------------------------- axioms

std::vector<std::pair<std::string, bool>> AxiomReport::entries() const {
  return {{"nonempty_det", nonempty_det}, {"proper_det", proper_det}, {"monotone", monotone},
          {"a1a", a1a},                   {"a1b", a1b},               {"convex", convex},
          {"cone", cone},                 {"kT_compatible", kT_compatible}, {"kI_compatible", kI_compatible}};
}

namespace {

// A + C subset A for the union A of `members` and a cone C.
bool absorbs(const std::vector<Polyhedron>& members, const Polyhedron& c, bool is_union) {
  if (!is_union) {
    const Polyhedron& a = members.front();
    return a.is_empty() || subset(c, recession_cone(a));
  }
  for (const auto& p : members)
    if (!covered_by(minkowski_sum(p, c), members)) return false;
  return true;
}

// Does {u : E u in A} meet / exhaust R^k?
bool hits(const std::vector<Polyhedron>& members, const Matrix& e) {
  for (const auto& p : members)
    if (!preimage(p, e).is_empty()) return true;
  return false;
}

bool exhausts(const std::vector<Polyhedron>& members, const Matrix& e) {
  std::vector<Polyhedron> pulled;
  for (const auto& p : members) pulled.push_back(preimage(p, e));
  return covered_by(Polyhedron::whole_space(e.cols()), pulled);
}

bool union_convex(const std::vector<Polyhedron>& members) {
  VRep hull;
  hull.dim = members.front().dim();
  for (const auto& p : members) {
    const VRep& v = p.vrep();
    hull.vertices.insert(hull.vertices.end(), v.vertices.begin(), v.vertices.end());
    hull.rays.insert(hull.rays.end(), v.rays.begin(), v.rays.end());
    hull.lineality.insert(hull.lineality.end(), v.lineality.begin(), v.lineality.end());
  }
  return covered_by(dd_convert(hull), members);
}

bool union_cone(const std::vector<Polyhedron>& members) {
  for (const auto& p : members) {
    const VRep& v = p.vrep();
    std::vector<Vector> rays = v.rays;
    rays.insert(rays.end(), v.vertices.begin(), v.vertices.end());
    if (!covered_by(Polyhedron::cone(p.dim(), rays, v.lineality), members)) return false;
  }
  return true;
}

}  // namespace

AxiomReport check_axioms(const AcceptanceSet& a) {
  const OnePeriodMarket& m = a.market();
  const auto& members = a.members();
  const bool uni = a.is_union();
  const Index dim = m.n() * m.d();
  AxiomReport r;
  const Matrix det = deterministic_embedding(m.n(), m.d());
  const Matrix elig = eligible_embedding(m);
  r.nonempty_det = hits(members, det);
  r.proper_det = !exhausts(members, det);
  r.a1a = hits(members, elig);
  r.a1b = !exhausts(members, elig);
  r.monotone = absorbs(members, Polyhedron::orthant(dim), uni);
  r.kT_compatible = absorbs(members, scenario_cone(m), uni);
  r.kI_compatible = absorbs(members, initial_cone_embedded(m), uni);
  if (!uni) {
    r.convex = true;
    r.cone = members.front().is_cone();
  } else {
    r.convex = union_convex(members);
    r.cone = union_cone(members);
  }
  return r;
}

// ---------------------------------------------------------------- constructions

AcceptanceSet augment(const AcceptanceSet& a) {
  if (a.is_union()) throw UnionNotSupported("augment a union member-wise with augment_union");
  const OnePeriodMarket& m = a.market();
  const Polyhedron trading = minkowski_sum(scenario_cone(m), initial_cone_embedded(m));
  return AcceptanceSet::polyhedral(m, minkowski_sum(a.region(), trading));
}

AcceptanceSet augment_union(const AcceptanceSet& a) {
  const OnePeriodMarket& m = a.market();
  const Polyhedron trading = minkowski_sum(scenario_cone(m), initial_cone_embedded(m));
  std::vector<Polyhedron> out;
  for (const auto& p : a.members()) out.push_back(minkowski_sum(p, trading));
  return AcceptanceSet::union_of(m, std::move(out));
}

AcceptanceSet orthant_acceptance(const OnePeriodMarket& m) {
  return AcceptanceSet::polyhedral(m, Polyhedron::orthant(m.n() * m.d()));
}

AcceptanceSet solvency_acceptance(const OnePeriodMarket& m) { return AcceptanceSet::polyhedral(m, scenario_cone(m)); }

AcceptanceSet worst_case_acceptance(const OnePeriodMarket& m) {
  return AcceptanceSet::polyhedral(m, minkowski_sum(scenario_cone(m), initial_cone_embedded(m)));
}

bool no_arbitrage(const OnePeriodMarket& m) {
  const Index dim = m.n() * m.d();
  const Polyhedron reachable =
      minkowski_sum(scenario_cone(m), image(m.k_initial, deterministic_embedding(m.n(), m.d())));
  const Polyhedron negative = image(Polyhedron::orthant(dim), Matrix(-Matrix::Identity(dim, dim)));
  const Polyhedron meet = intersect(reachable, negative);
  return meet.vrep().rays.empty() && meet.vrep().lineality.empty();
}

std::vector<std::string> var_set_violations(const Polyhedron& d) {
  std::vector<std::string> out;
  const Polyhedron c = canonical(d);
  if (c.is_empty()) {
    out.push_back("(D0) the set is empty");
    return out;
  }
  const Index dim = c.dim();
  if (!subset(Polyhedron::orthant(dim), c)) out.push_back("(D1a) R^d_+ is not contained in the set");
  HRep h = c.hrep();
  std::vector<std::size_t> strict;
  for (Index i = 0; i < dim; ++i) {
    strict.push_back(h.inequalities.size());
    h.add_inequality(Vector(-unit(dim, i)), 0);
  }
  if (strict_feasible(h, strict)) out.push_back("(D1b) the set meets -int R^d_+");
  if (!subset(Polyhedron::orthant(dim), recession_cone(c))) out.push_back("(D2) D + R^d_+ is not contained in D");
  return out;
}

AcceptanceSet var_acceptance(const OnePeriodMarket& m, const Rational& alpha,
                             const std::optional<std::vector<Polyhedron>>& d_alpha, bool augment_initial) {
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1], got " + to_string(alpha));
  const Index n = m.n(), d = m.d();
  const std::vector<Polyhedron>& sets = d_alpha ? *d_alpha : m.k_terminal;
  if (static_cast<Index>(sets.size()) != n) throw ShapeMismatch("D_alpha needs one set per scenario");
  for (Index w = 0; w < n; ++w) {
    const Polyhedron& s = sets[static_cast<std::size_t>(w)];
    if (s.dim() != d) throw DimensionMismatch("D_alpha(w" + std::to_string(w + 1) + ") has wrong dimension");
    const auto v = var_set_violations(s);
    if (!v.empty()) throw AxiomViolation("D_alpha(w" + std::to_string(w + 1) + "): " + v.front());
  }
  if (n > 24) throw std::invalid_argument("var_acceptance enumerates scenario subsets; at most 24 scenarios supported");

  const Rational need = 1 - alpha;
  const Vector& p = m.space.probs;
  std::vector<std::vector<Index>> minimal;
  std::vector<Index> current;
  std::function<void(Index, Rational)> walk = [&](Index next, Rational mass) {
    if (mass >= need) {
      bool is_minimal = true;
      for (Index w : current)
        if (mass - p[w] >= need) is_minimal = false;
      if (is_minimal) minimal.push_back(current);
      return;  // supersets are never minimal
    }
    for (Index w = next; w < n; ++w) {
      current.push_back(w);
      walk(w + 1, mass + p[w]);
      current.pop_back();
    }
  };
  walk(0, 0);

  std::optional<Polyhedron> lift;
  if (augment_initial) lift = initial_cone_embedded(m);
  std::vector<Polyhedron> members;
  for (const auto& s : minimal) {
    std::vector<Polyhedron> blocks(static_cast<std::size_t>(n), Polyhedron::whole_space(d));
    for (Index w : s) blocks[static_cast<std::size_t>(w)] = sets[static_cast<std::size_t>(w)];
    Polyhedron member = cartesian_product(blocks);
    if (lift) member = minkowski_sum(member, *lift);
    members.push_back(std::move(member));
  }
  return AcceptanceSet::union_of(m, std::move(members));
}

Polyhedron avar_dual_cone(const OnePeriodMarket& m, const Vector& lambda) {
  const Index n = m.n(), d = m.d(), dim = n * d;
  if (lambda.size() != d) throw LambdaOutOfRange("lambda needs one entry per asset");
  for (Index i = 0; i < d; ++i)
    if (lambda[i] <= 0 || lambda[i] > 1) throw LambdaOutOfRange("lambda_" + std::to_string(i + 1) + " = " +
                                                                to_string(lambda[i]) + " is outside (0,1]");
  Vector mu(d);
  for (Index i = 0; i < d; ++i) mu[i] = 1 / lambda[i];

  HRep h;
  h.dim = dim;
  auto block_row = [&](Index w, const Vector& g) {
    Vector row = Vector::Zero(dim);
    row.segment(w * d, d) = g;
    return row;
  };
  auto all_blocks = [&](const Vector& g) {
    Vector row(dim);
    for (Index w = 0; w < n; ++w) row.segment(w * d, d) = g;
    return row;
  };
  for (Index w = 0; w < n; ++w) {
    const Polyhedron kt = canonical(m.k_terminal[static_cast<std::size_t>(w)]);
    const VRep& k = kt.vrep();
    const Rational inv_p = 1 / m.space.probs[w];
    for (const auto& r : k.rays) {
      h.add_inequality(block_row(w, r), 0);
      Vector scaled_r = r.cwiseProduct(mu);
      h.add_inequality(Vector(all_blocks(scaled_r) - inv_p * block_row(w, r)), 0);
    }
    for (const auto& l : k.lineality) {
      h.add_equality(block_row(w, l), 0);
      Vector scaled_l = l.cwiseProduct(mu);
      h.add_equality(Vector(all_blocks(scaled_l) - inv_p * block_row(w, l)), 0);
    }
  }
  const EligibleCone eligible = eligible_initial_cone(m);
  const VRep& kim = eligible.cone_ambient.vrep();
  for (const auto& g : kim.rays) h.add_inequality(all_blocks(g), 0);
  for (const auto& g : kim.lineality) h.add_equality(all_blocks(g), 0);
  return dd_convert(h);
}

AcceptanceSet avar_acceptance(const OnePeriodMarket& m, const Vector& lambda) {
  const Polyhedron c = avar_dual_cone(m, lambda);
  const Matrix sum_to_m = eligible_embedding(m).transpose();  // eta -> B^T sum_w eta(w)
  bool admissible = false;
  for (const auto* list : {&c.vrep().rays, &c.vrep().lineality})
    for (const auto& g : *list)
      if (!is_zero(Vector(sum_to_m * g))) admissible = true;
  if (!admissible) throw EmptyDualSet("no AV@R dual variable has E[Y] outside M-perp");
  return AcceptanceSet::polyhedral(m, dual_cone(c));
}

}  // namespace setrisk
