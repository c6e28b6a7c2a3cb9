#include "setrisk/market.hpp"

#include "setrisk/linalg.hpp"

namespace setrisk {

ScenarioSpace ScenarioSpace::uniform(Index n) {
  if (n < 1) throw DimensionMismatch("a scenario space needs at least one scenario");
  Vector p(n);
  for (Index i = 0; i < n; ++i) p[i] = Rational(1, n);
  return {p};
}

EligibleSpace EligibleSpace::full(Index d) { return {Matrix::Identity(d, d)}; }

Matrix EligibleSpace::complement() const { return nullspace(Matrix(basis.transpose())); }

Vector EligibleSpace::project(const Vector& x) const {
  // x = B c + r with B^T r = 0, so B^T B c = B^T x.
  const Matrix gram = basis.transpose() * basis;
  const Vector c = *solve_linear(gram, Vector(basis.transpose() * x));
  return basis * c;
}

std::optional<Vector> EligibleSpace::coordinates(const Vector& x) const {
  if (x.size() != d()) throw DimensionMismatch("coordinates: vector length differs from asset count");
  return solve_linear(basis, x);
}

std::vector<std::string> solvency_cone_violations(const Polyhedron& k, const std::string& name) {
  std::vector<std::string> out;
  const Polyhedron c = canonical(k);
  if (!c.is_cone()) {
    out.push_back(name + ": not a nonempty convex cone");
    return out;
  }
  if (!subset(Polyhedron::orthant(c.dim()), c)) out.push_back(name + ": R^d_+ subset of K violated");
  if (c == Polyhedron::whole_space(c.dim())) out.push_back(name + ": K != R^d violated");
  return out;
}

std::vector<std::string> validate_market(const OnePeriodMarket& m) {
  std::vector<std::string> out;
  auto add = [&](std::vector<std::string> more) { out.insert(out.end(), more.begin(), more.end()); };

  const Vector& p = m.space.probs;
  if (p.size() < 1) out.push_back("probabilities: at least one scenario required");
  Rational total = 0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) out.push_back("probabilities: P(w" + std::to_string(i + 1) + ") must be positive");
    total += p[i];
  }
  if (p.size() >= 1 && total != 1) out.push_back("probabilities: sum is " + to_string(total) + ", not 1");

  const Index d = m.k_initial.dim();
  add(solvency_cone_violations(m.k_initial, "K_I"));
  if (static_cast<Index>(m.k_terminal.size()) != p.size())
    out.push_back("K_T: " + std::to_string(m.k_terminal.size()) + " cones for " + std::to_string(p.size()) +
                  " scenarios");
  for (std::size_t w = 0; w < m.k_terminal.size(); ++w) {
    const std::string name = "K_T(w" + std::to_string(w + 1) + ")";
    if (m.k_terminal[w].dim() != d) {
      out.push_back(name + ": dimension differs from K_I");
      continue;
    }
    add(solvency_cone_violations(m.k_terminal[w], name));
  }

  const Matrix& b = m.eligible.basis;
  if (b.rows() != d || b.cols() < 1) {
    out.push_back("M: basis must be a d x m matrix with m >= 1");
    return out;
  }
  if (rank(b) != b.cols()) {
    out.push_back("M: basis columns are linearly dependent");
    return out;
  }
  const Polyhedron m_plus = preimage(Polyhedron::orthant(d), b);
  if (m_plus.vrep().rays.empty() && m_plus.vrep().lineality.empty())
    out.push_back("M: M intersected with R^d_+ is {0}");
  if (canonical(m.k_initial).is_cone()) {
    const Polyhedron kim = preimage(m.k_initial, b);
    if (kim.vrep().rays.empty() && kim.vrep().lineality.empty()) out.push_back("M: K_I^M = {0}");
  }
  return out;
}

void require_valid(const OnePeriodMarket& m) {
  auto violations = validate_market(m);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

Polyhedron frictionless_cone(const Vector& prices) {
  if (prices.size() < 1) throw DimensionMismatch("frictionless_cone: no prices");
  for (Index i = 0; i < prices.size(); ++i)
    if (prices[i] <= 0) throw NonpositivePrice("price of asset " + std::to_string(i + 1) + " is " + to_string(prices[i]));
  return Polyhedron::cone_from_inequalities(prices.size(), {prices});
}

Polyhedron bidask_cone(const Matrix& pi, const std::vector<std::pair<Index, Index>>& illiquid) {
  const Index d = pi.rows();
  if (d < 1 || pi.cols() != d) throw DimensionMismatch("bidask_cone: rate matrix must be square");
  auto is_illiquid = [&](Index i, Index j) {
    for (const auto& [a, b] : illiquid)
      if (a == i && b == j) return true;
    return false;
  };
  std::vector<Vector> gens;
  for (Index i = 0; i < d; ++i) {
    if (pi(i, i) != 1) throw InvalidRates("diagonal rate pi_" + std::to_string(i + 1) + std::to_string(i + 1) + " must be 1");
    gens.push_back(unit(d, i));
  }
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      if (i == j || is_illiquid(i, j)) continue;
      if (pi(i, j) <= 0)
        throw InvalidRates("rate pi_" + std::to_string(i + 1) + std::to_string(j + 1) + " must be positive");
      Vector g = pi(i, j) * unit(d, i);
      g[j] -= 1;
      gens.push_back(std::move(g));
    }
  return Polyhedron::cone(d, std::move(gens));
}

EligibleCone eligible_initial_cone(const OnePeriodMarket& m) {
  const Matrix& b = m.eligible.basis;
  if (b.rows() != m.d()) throw DimensionMismatch("eligible basis has wrong ambient dimension");
  const Polyhedron cone = preimage(m.k_initial, b);
  if (cone.vrep().rays.empty() && cone.vrep().lineality.empty())
    throw DegenerateEligibleCone("K_I intersected with M is {0}");
  const Polyhedron ambient = image(cone, b);
  const Polyhedron dual_ambient = dual_cone(ambient, b);

  // (K_I^+ + M-perp) intersected with M must agree with the dual taken inside M.
  const Matrix perp = m.eligible.complement();
  std::vector<Vector> perp_cols, m_cols;
  for (Index k = 0; k < perp.cols(); ++k) perp_cols.push_back(perp.col(k));
  for (Index k = 0; k < b.cols(); ++k) m_cols.push_back(b.col(k));
  const Polyhedron widened = minkowski_sum(dual_cone(m.k_initial), Polyhedron::cone(m.d(), {}, perp_cols));
  const Polyhedron restricted = intersect(widened, Polyhedron::cone(m.d(), {}, m_cols));
  if (!(restricted == dual_ambient)) throw std::logic_error("eligible dual cone consistency check failed");

  return {cone, ambient, preimage(dual_ambient, b), dual_ambient};
}

Polyhedron scenario_cone(const OnePeriodMarket& m) { return cartesian_product(m.k_terminal); }

Polyhedron scenario_dual_cone(const OnePeriodMarket& m) {
  std::vector<Polyhedron> duals;
  for (const auto& k : m.k_terminal) duals.push_back(dual_cone(k));
  return cartesian_product(duals);
}

Matrix repeat_rows(const Matrix& block, Index n) {
  Matrix out(block.rows() * n, block.cols());
  for (Index w = 0; w < n; ++w) out.middleRows(w * block.rows(), block.rows()) = block;
  return out;
}

void check_shape(const OnePeriodMarket& m, const RandomPortfolio& x) {
  if (x.rows() != m.n() || x.cols() != m.d())
    throw ShapeMismatch("portfolio is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                        ", market expects " + std::to_string(m.n()) + "x" + std::to_string(m.d()));
}

Vector expectation(const ScenarioSpace& s, const Matrix& x) {
  if (x.rows() != s.n()) throw ShapeMismatch("expectation: row count differs from scenario count");
  Vector e = Vector::Zero(x.cols());
  for (Index w = 0; w < x.rows(); ++w) e += s.probs[w] * Vector(x.row(w).transpose());
  return e;
}

}  // namespace setrisk
