#include "setrisk/riskmeasure.hpp"

#include "setrisk/linalg.hpp"

namespace setrisk {

namespace {

RiskSet make_risk_set(std::vector<Polyhedron> pieces, const Matrix& basis, bool keep_single) {
  RiskSet out;
  out.basis = basis;
  if (keep_single && pieces.size() == 1) {
    out.pieces.push_back(canonical(pieces.front()));
    return out;
  }
  for (auto& p : pieces) {
    Polyhedron c = canonical(p);
    if (!c.is_empty()) out.pieces.push_back(std::move(c));
  }
  if (out.pieces.empty()) out.pieces.push_back(Polyhedron::empty(basis.cols()));
  return out;
}

Extended min_extended(const Extended& a, const Extended& b) {
  using K = Extended::Kind;
  if (a.kind == K::minus_infinity || b.kind == K::minus_infinity) return Extended::minus_infinity();
  if (a.kind == K::plus_infinity) return b;
  if (b.kind == K::plus_infinity) return a;
  return a.value <= b.value ? a : b;
}

// Row-wise scaling by the probabilities: density <-> mass.
Matrix to_mass(const ScenarioSpace& s, const Matrix& y) {
  Matrix out = y;
  for (Index w = 0; w < y.rows(); ++w) out.row(w) *= s.probs[w];
  return out;
}

Matrix to_density(const ScenarioSpace& s, const Matrix& eta) {
  Matrix out = eta;
  for (Index w = 0; w < eta.rows(); ++w) out.row(w) /= s.probs[w];
  return out;
}

Rational pairing(const Matrix& a, const Matrix& b) {
  Rational total = 0;
  for (Index w = 0; w < a.rows(); ++w)
    for (Index i = 0; i < a.cols(); ++i) total += a(w, i) * b(w, i);
  return total;
}

void check_density_shape(const OnePeriodMarket& m, const Matrix& y, const char* name) {
  if (y.rows() != m.n() || y.cols() != m.d())
    throw ShapeMismatch(std::string(name) + " must be " + std::to_string(m.n()) + "x" + std::to_string(m.d()));
}

void check_vector_size(const OnePeriodMarket& m, const Vector& v, const char* name) {
  if (v.size() != m.d()) throw DimensionMismatch(std::string(name) + " needs one entry per asset");
}

// Y(w) in K_T^+(w) for every scenario, otherwise the name of the first failing scenario.
std::optional<std::string> terminal_dual_violation(const OnePeriodMarket& m, const Matrix& y) {
  for (Index w = 0; w < m.n(); ++w) {
    const Polyhedron dual = dual_cone(m.k_terminal[static_cast<std::size_t>(w)]);
    if (!contains(dual, Vector(y.row(w).transpose())))
      return "Y(w" + std::to_string(w + 1) + ") is not in K_T^+(w" + std::to_string(w + 1) + ")";
  }
  return std::nullopt;
}

Polyhedron halfspace_in(Index dim, const Vector& normal, const Rational& offset) {
  if (is_zero(normal)) return offset <= 0 ? Polyhedron::whole_space(dim) : Polyhedron::empty(dim);
  HRep h;
  h.dim = dim;
  h.add_inequality(normal, offset);
  return canonical(Polyhedron(std::move(h)));
}

// The pair (Q, w) induced by a nonnegative mass eta with E[Y] = sum eta outside M-perp.
DualPair pair_from_mass(const OnePeriodMarket& m, const Matrix& eta) {
  const Matrix y = to_density(m.space, eta);
  return pair_transform(m, y, m.eligible.project(expectation(m.space, y)));
}

RiskSet translate_set(const RiskSet& r, const Vector& shift) {
  std::vector<Polyhedron> out;
  for (const auto& p : r.pieces) out.push_back(translate(p, shift));
  return make_risk_set(std::move(out), r.basis, !r.is_union());
}

RiskSet scale_set(const RiskSet& r, const Rational& t) {
  if (r.is_empty()) return r;
  std::vector<Polyhedron> out;
  for (const auto& p : r.pieces) out.push_back(scale(p, t));
  return make_risk_set(std::move(out), r.basis, false);
}

RiskSet sum_sets(const RiskSet& a, const RiskSet& b) {
  if (a.is_empty() || b.is_empty()) return make_risk_set({Polyhedron::empty(a.basis.cols())}, a.basis, true);
  std::vector<Polyhedron> out;
  for (const auto& p : a.pieces)
    for (const auto& q : b.pieces) out.push_back(minkowski_sum(p, q));
  return make_risk_set(std::move(out), a.basis, false);
}

}  // namespace

// ---------------------------------------------------------------- RiskSet

bool RiskSet::is_empty() const {
  for (const auto& p : pieces)
    if (!p.is_empty()) return false;
  return true;
}

const Polyhedron& RiskSet::polyhedron() const {
  if (is_union()) throw UnionNotSupported("risk set is a union of polyhedra");
  return pieces.front();
}

std::vector<Polyhedron> RiskSet::ambient() const {
  std::vector<Polyhedron> out;
  for (const auto& p : pieces) out.push_back(image(p, basis));
  return out;
}

bool RiskSet::contains(const Vector& coords) const {
  for (const auto& p : pieces)
    if (setrisk::contains(p, coords)) return true;
  return false;
}

bool risk_subset(const RiskSet& a, const RiskSet& b) {
  for (const auto& p : a.pieces)
    if (!covered_by(p, b.pieces)) return false;
  return true;
}

bool same_set(const RiskSet& a, const RiskSet& b) {
  if (!a.is_union() && !b.is_union()) return a.pieces.front() == b.pieces.front();
  return risk_subset(a, b) && risk_subset(b, a);
}

// ---------------------------------------------------------------- primal side

RiskSet evaluate(const AcceptanceSet& a, const RandomPortfolio& x) {
  const OnePeriodMarket& m = a.market();
  check_shape(m, x);
  const Matrix embed = eligible_embedding(m);
  const Vector shift = flatten(x);
  std::vector<Polyhedron> pieces;
  for (const auto& member : a.members()) pieces.push_back(preimage(member, embed, shift));
  return make_risk_set(std::move(pieces), m.eligible.basis, !a.is_union());
}

bool accepts(const AcceptanceSet& a, const RandomPortfolio& x) {
  check_shape(a.market(), x);
  const Vector flat = flatten(x);
  for (const auto& member : a.members())
    if (contains(member, flat)) return true;
  return false;
}

Extended scalarize(const AcceptanceSet& a, const RandomPortfolio& x, const Vector& v) {
  check_vector_size(a.market(), v, "scalarize: v");
  const RiskSet r = evaluate(a, x);
  const Vector direction = r.basis.transpose() * v;
  Extended best = Extended::plus_infinity();
  for (const auto& p : r.pieces) best = min_extended(best, minimum_value(p, direction));
  return best;
}

RiskSet set_expectation(const OnePeriodMarket& m, const Matrix& y, const Vector& v, const RandomPortfolio& x) {
  check_shape(m, x);
  check_density_shape(m, y, "Y");
  check_vector_size(m, v, "v");
  const Rational value = pairing(x, to_mass(m.space, y));
  const Matrix& b = m.eligible.basis;
  return make_risk_set({halfspace_in(b.cols(), Vector(b.transpose() * v), value)}, b, true);
}

// ---------------------------------------------------------------- dual variables

DualPair pair_transform(const OnePeriodMarket& m, const Matrix& y, const Vector& v) {
  check_density_shape(m, y, "Y");
  check_vector_size(m, v, "v");
  if (auto bad = terminal_dual_violation(m, y)) throw InvalidDualVariable(*bad);
  const Vector w = expectation(m.space, y);
  const Matrix& b = m.eligible.basis;
  if (!m.eligible.coordinates(v)) throw InvalidDualVariable("v is not in M");
  if (!is_zero(Vector(b.transpose() * (v - w)))) throw InvalidDualVariable("v - E[Y] is not in M-perp");
  if (is_zero(v)) throw InvalidDualVariable("v = 0 (E[Y] lies in M-perp)");
  if (!contains(eligible_initial_cone(m).dual_ambient, v)) throw InvalidDualVariable("v is not in (K_I^M)^+");

  DualPair out{Matrix(m.n(), m.d()), w};
  for (Index i = 0; i < m.d(); ++i)
    for (Index k = 0; k < m.n(); ++k)
      out.q(k, i) = w[i] == 0 ? m.space.probs[k] : m.space.probs[k] * y(k, i) / w[i];
  return out;
}

void check_pair(const OnePeriodMarket& m, const DualPair& pair) {
  check_density_shape(m, pair.q, "Q");
  check_vector_size(m, pair.w, "w");
  for (Index i = 0; i < m.d(); ++i) {
    Rational total = 0;
    for (Index k = 0; k < m.n(); ++k) {
      if (pair.q(k, i) < 0) throw InvalidDualVariable("Q_" + std::to_string(i + 1) + " has a negative mass");
      total += pair.q(k, i);
    }
    if (total != 1) throw InvalidDualVariable("Q_" + std::to_string(i + 1) + " has total mass " + to_string(total));
  }
  if (is_zero(Vector(m.eligible.basis.transpose() * pair.w))) throw InvalidDualVariable("w is in M-perp");
  Matrix y(m.n(), m.d());
  for (Index k = 0; k < m.n(); ++k)
    for (Index i = 0; i < m.d(); ++i) y(k, i) = pair.w[i] * pair.q(k, i) / m.space.probs[k];
  if (auto bad = terminal_dual_violation(m, y)) throw InvalidDualVariable("diag(w) dQ/dP: " + *bad);
  if (!contains(eligible_initial_cone(m).dual_ambient, m.eligible.project(pair.w)))
    throw InvalidDualVariable("w is not in K_I^+ + M-perp");
}

std::pair<Matrix, Vector> pair_inverse(const OnePeriodMarket& m, const DualPair& pair) {
  check_pair(m, pair);
  Matrix y(m.n(), m.d());
  for (Index k = 0; k < m.n(); ++k)
    for (Index i = 0; i < m.d(); ++i) y(k, i) = pair.w[i] * pair.q(k, i) / m.space.probs[k];
  return {y, m.eligible.project(pair.w)};
}

// ---------------------------------------------------------------- penalties

PenaltyValue conjugate(const AcceptanceSet& a, const Matrix& y, const Vector& v) {
  const OnePeriodMarket& m = a.market();
  check_density_shape(m, y, "Y");
  check_vector_size(m, v, "v");
  const Polyhedron& region = a.region();
  if (region.is_empty()) return PenaltyValue::empty();
  const Extended s = support_value(region, flatten(to_mass(m.space, y)));
  if (!s.is_finite()) return PenaltyValue::whole_m();
  return PenaltyValue::halfspace(-s.value);
}

PenaltyValue penalty_min(const AcceptanceSet& a, const DualPair& pair) {
  const OnePeriodMarket& m = a.market();
  check_density_shape(m, pair.q, "Q");
  check_vector_size(m, pair.w, "w");
  Matrix eta = pair.q;
  for (Index i = 0; i < m.d(); ++i) eta.col(i) *= pair.w[i];
  const Extended s = minimum_value(a.region(), flatten(eta));
  switch (s.kind) {
    case Extended::Kind::plus_infinity: return PenaltyValue::empty();
    case Extended::Kind::minus_infinity: return PenaltyValue::whole_m();
    case Extended::Kind::finite: break;
  }
  return PenaltyValue::halfspace(s.value);
}

// ---------------------------------------------------------------- dual families

DualGenerators dual_generators(const AcceptanceSet& a) {
  const OnePeriodMarket& m = a.market();
  const Polyhedron& region = a.region();
  if (!region.is_cone()) throw NotACone("dual_generators needs a conic acceptance region");
  const Polyhedron dual_region = dual_cone(region);
  const VRep& dual = dual_region.vrep();
  std::vector<Vector> rays = dual.rays;
  for (const auto& l : dual.lineality) {
    rays.push_back(l);
    rays.push_back(-l);
  }
  const Matrix& b = m.eligible.basis;
  DualGenerators out;
  for (const auto& r : rays) {
    const Matrix eta = unflatten(r, m.n(), m.d());
    const Vector total = eta.colwise().sum().transpose();
    if (is_zero(Vector(b.transpose() * total)))
      out.limits.push_back({eta, Rational(0)});
    else
      out.pairs.push_back(pair_from_mass(m, eta));
  }
  return out;
}

DualFamily dual_family(const AcceptanceSet& a) {
  const OnePeriodMarket& m = a.market();
  const Polyhedron& region = a.region();
  DualFamily out;
  if (region.is_cone()) {
    DualGenerators g = dual_generators(a);
    for (auto& p : g.pairs) {
      out.penalties.push_back(penalty_min(a, p));
      out.pairs.push_back(std::move(p));
    }
    out.limits = std::move(g.limits);
    return out;
  }
  if (region.is_empty()) throw EmptyDualFamily("the acceptance region is empty");
  std::vector<LinearConstraint> facets = region.hrep().inequalities;
  for (const auto& e : region.hrep().equalities) {
    facets.push_back(e);
    facets.push_back({Vector(-e.normal), Rational(-e.offset)});
  }
  const Matrix& b = m.eligible.basis;
  for (const auto& f : facets) {
    const Matrix eta = unflatten(f.normal, m.n(), m.d());
    const Vector total = eta.colwise().sum().transpose();
    if (is_zero(Vector(b.transpose() * total))) {
      out.limits.push_back({eta, f.offset});
      continue;
    }
    DualPair p = pair_from_mass(m, eta);
    out.penalties.push_back(penalty_min(a, p));
    out.pairs.push_back(std::move(p));
  }
  return out;
}

RiskSet dual_evaluate(const OnePeriodMarket& m, const std::vector<DualPair>& pairs,
                      const std::vector<PenaltyValue>& penalties, const RandomPortfolio& x,
                      const std::vector<LimitConstraint>& limits) {
  check_shape(m, x);
  if (pairs.size() != penalties.size()) throw std::invalid_argument("dual_evaluate: one penalty per pair required");
  const Matrix& b = m.eligible.basis;
  const Index dim = b.cols();
  bool informative = false;
  bool empty = false;
  HRep h;
  h.dim = dim;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const DualPair& p = pairs[k];
    check_density_shape(m, p.q, "Q");
    check_vector_size(m, p.w, "w");
    switch (penalties[k].kind) {
      case PenaltyValue::Kind::whole_m: continue;
      case PenaltyValue::Kind::empty: empty = informative = true; continue;
      case PenaltyValue::Kind::halfspace: informative = true; break;
    }
    Matrix eta = p.q;
    for (Index i = 0; i < m.d(); ++i) eta.col(i) *= p.w[i];
    h.add_inequality(Vector(b.transpose() * p.w), penalties[k].offset - pairing(eta, x));
  }
  if (!informative) throw EmptyDualFamily("every penalty equals M");
  for (const auto& l : limits) {
    check_density_shape(m, l.eta, "limit eta");
    if (pairing(l.eta, x) < l.offset) empty = true;
  }
  if (empty) return make_risk_set({Polyhedron::empty(dim)}, b, true);
  return make_risk_set({Polyhedron(std::move(h))}, b, true);
}

RiskSet dual_evaluate(const OnePeriodMarket& m, const DualFamily& family, const RandomPortfolio& x) {
  return dual_evaluate(m, family.pairs, family.penalties, x, family.limits);
}

PrimalDualReport primal_dual_check(const AcceptanceSet& a, const std::vector<RandomPortfolio>& xs) {
  if (a.is_union()) throw PreconditionViolated("convex: the acceptance set is a union of polyhedra");
  const AxiomReport axioms = check_axioms(a);
  for (const auto& [name, ok] : axioms.entries()) {
    const bool needed = name == "a1a" || name == "a1b" || name == "kT_compatible" || name == "kI_compatible";
    if (needed && !ok) throw PreconditionViolated(name + " fails");
  }
  const DualFamily family = dual_family(a);
  PrimalDualReport report;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    report.primal.push_back(evaluate(a, xs[k]));
    report.dual.push_back(dual_evaluate(a.market(), family, xs[k]));
    if (!same_set(report.primal.back(), report.dual.back())) report.mismatches.push_back(k);
  }
  return report;
}

// ---------------------------------------------------------------- harness

HarnessReport axiom_harness(const AcceptanceSet& a, const HarnessSamples& samples) {
  const OnePeriodMarket& m = a.market();
  HarnessReport report;
  report.axioms = check_axioms(a);
  const auto& xs = samples.portfolios;
  std::vector<Rational> weights = samples.weights;
  if (weights.empty()) weights.push_back(Rational(1, 2));

  std::vector<RiskSet> values;
  for (const auto& x : xs) values.push_back(evaluate(a, x));
  const Vector origin = Vector::Zero(m.eligible.m());

  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (accepts(a, xs[k]) != values[k].contains(origin)) report.membership_roundtrip = false;

    for (const auto& u : samples.shifts) {
      if (u.size() != m.eligible.m()) throw DimensionMismatch("harness shift must be given in M-coordinates");
      const Vector cash = m.eligible.basis * u;
      RandomPortfolio shifted = xs[k];
      for (Index w = 0; w < m.n(); ++w) shifted.row(w) += cash.transpose();
      if (!same_set(evaluate(a, shifted), translate_set(values[k], Vector(-u)))) report.translative = false;
    }

    const RandomPortfolio bonus = xs[(k + 1) % xs.size()].cwiseAbs();
    if (!risk_subset(values[k], evaluate(a, RandomPortfolio(xs[k] + bonus)))) report.monotone_sampled = false;
  }

  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (!risk_subset(sum_sets(values[i], values[j]), evaluate(a, RandomPortfolio(xs[i] + xs[j]))))
        report.subadditive = false;
      for (const auto& t : weights) {
        const RiskSet left = sum_sets(scale_set(values[i], t), scale_set(values[j], 1 - t));
        const RiskSet right = evaluate(a, RandomPortfolio(t * xs[i] + (1 - t) * xs[j]));
        for (const auto& piece : left.pieces) {
          auto witness = uncovered_point(piece, right.pieces);
          if (!witness) continue;
          report.convex_sampled = false;
          if (!report.counterexample) report.counterexample = ConvexityCounterexample{xs[i], xs[j], t, *witness};
          break;
        }
      }
    }
  return report;
}

}  // namespace setrisk
