#include "setrisk/superhedge.hpp"

#include "setrisk/lp.hpp"

#include <algorithm>
#include <numeric>

namespace setrisk {

std::vector<std::size_t> ScenarioTree::children(std::size_t node) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].parent == node) out.push_back(k);
  return out;
}

Index ScenarioTree::depth(std::size_t node) const {
  Index t = 0;
  for (auto p = nodes.at(node).parent; p; p = nodes.at(*p).parent) ++t;
  return t;
}

Index ScenarioTree::horizon() const {
  Index t = 0;
  for (std::size_t l : leaves()) t = std::max(t, depth(l));
  return t;
}

std::vector<std::size_t> ScenarioTree::leaves() const {
  std::vector<bool> inner(nodes.size(), false);
  for (const auto& n : nodes)
    if (n.parent && *n.parent < nodes.size()) inner[*n.parent] = true;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (!inner[k]) out.push_back(k);
  return out;
}

Rational ScenarioTree::path_probability(std::size_t node) const {
  Rational p = 1;
  for (std::optional<std::size_t> k = node; nodes.at(*k).parent; k = nodes.at(*k).parent) p *= nodes[*k].prob;
  return p;
}

std::vector<std::size_t> ScenarioTree::path(std::size_t node) const {
  std::vector<std::size_t> out;
  for (std::optional<std::size_t> k = node; k; k = nodes.at(*k).parent) out.push_back(*k);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::string> validate_tree(const ScenarioTree& tree) {
  std::vector<std::string> out;
  if (tree.nodes.empty()) return {"tree: no nodes"};
  if (tree.d < 1) out.push_back("tree: at least one asset required");
  if (tree.nodes.front().parent) out.push_back("node 0: the root must not have a parent");
  bool linked = true;
  for (std::size_t k = 1; k < tree.size(); ++k) {
    const auto& p = tree.nodes[k].parent;
    if (!p) {
      out.push_back("node " + std::to_string(k) + ": only node 0 may be a root");
      linked = false;
    } else if (*p >= k) {
      out.push_back("node " + std::to_string(k) + ": parent " + std::to_string(*p) + " does not precede it");
      linked = false;
    } else if (tree.nodes[k].prob <= 0) {
      out.push_back("node " + std::to_string(k) + ": branch probability must be positive");
    }
  }
  for (std::size_t k = 0; k < tree.size(); ++k) {
    const std::string name = "K(node " + std::to_string(k) + ")";
    if (tree.nodes[k].cone.dim() != tree.d) {
      out.push_back(name + ": dimension " + std::to_string(tree.nodes[k].cone.dim()) + ", expected " +
                    std::to_string(tree.d));
      continue;
    }
    for (auto& v : solvency_cone_violations(tree.nodes[k].cone, name)) out.push_back(std::move(v));
  }
  if (!linked || tree.nodes.front().parent) return out;
  for (std::size_t k = 0; k < tree.size(); ++k) {
    const auto cs = tree.children(k);
    if (cs.empty()) continue;
    Rational total = 0;
    for (std::size_t c : cs) total += tree.nodes[c].prob;
    if (total != 1)
      out.push_back("node " + std::to_string(k) + ": children probabilities sum to " + to_string(total));
  }
  const Index horizon = tree.horizon();
  for (std::size_t l : tree.leaves())
    if (tree.depth(l) != horizon)
      out.push_back("node " + std::to_string(l) + ": leaf at depth " + std::to_string(tree.depth(l)) +
                    ", expected " + std::to_string(horizon));
  return out;
}

void require_valid_tree(const ScenarioTree& tree) {
  auto violations = validate_tree(tree);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

ScenarioTree one_period_tree(const OnePeriodMarket& m) {
  ScenarioTree tree;
  tree.d = m.d();
  tree.nodes.push_back({std::nullopt, 1, m.k_initial});
  for (Index w = 0; w < m.n(); ++w)
    tree.nodes.push_back({std::size_t{0}, m.space.probs[w], m.k_terminal[static_cast<std::size_t>(w)]});
  return tree;
}

namespace {

void check_claim(const ScenarioTree& tree, const RandomPortfolio& claim) {
  const auto ls = tree.leaves();
  if (claim.rows() != static_cast<Index>(ls.size()) || claim.cols() != tree.d)
    throw ShapeMismatch("claim must be " + std::to_string(ls.size()) + " x " + std::to_string(tree.d) +
                        " (leaves x assets)");
}

// For every node, the leaves below it with their conditional probabilities.
std::vector<std::vector<std::pair<std::size_t, Rational>>> conditional_leaves(const ScenarioTree& tree) {
  const auto ls = tree.leaves();
  std::vector<std::vector<std::pair<std::size_t, Rational>>> out(tree.size());
  for (std::size_t j = 0; j < ls.size(); ++j) {
    const Rational leaf = tree.path_probability(ls[j]);
    for (std::size_t k : tree.path(ls[j])) out[k].emplace_back(j, leaf / tree.path_probability(k));
  }
  return out;
}

// Pricing processes parametrised by the leaf values Z_T (leaf-major); rows from cone rays come first.
struct CppSystem {
  HRep h;
  std::size_t strict_rows = 0;
};

CppSystem cpp_system(const ScenarioTree& tree) {
  const Index d = tree.d;
  const auto below = conditional_leaves(tree);
  const Index dim = static_cast<Index>(tree.leaves().size()) * d;
  CppSystem sys;
  sys.h.dim = dim;
  auto lifted = [&](std::size_t node, const Vector& g) {
    Vector row = Vector::Zero(dim);
    for (const auto& [j, p] : below[node]) row.segment(static_cast<Index>(j) * d, d) = p * g;
    return row;
  };
  for (std::size_t k = 0; k < tree.size(); ++k) {
    const Polyhedron cone = canonical(tree.nodes[k].cone);
    for (const auto& r : cone.vrep().rays) sys.h.add_inequality(lifted(k, r));
    for (const auto& l : cone.vrep().lineality) sys.h.add_equality(lifted(k, l));
  }
  sys.strict_rows = sys.h.inequalities.size();
  return sys;
}

PricingProcess process_from_leaves(const ScenarioTree& tree, const Vector& leaf_values) {
  const auto below = conditional_leaves(tree);
  PricingProcess z;
  for (std::size_t k = 0; k < tree.size(); ++k) {
    Vector v = Vector::Zero(tree.d);
    for (const auto& [j, p] : below[k]) v += p * leaf_values.segment(static_cast<Index>(j) * tree.d, tree.d);
    z.z.push_back(std::move(v));
  }
  return z;
}

}  // namespace

SelfFinancingCone selffinancing_cone(const ScenarioTree& tree) {
  require_valid_tree(tree);
  const Index d = tree.d;
  const Index n = static_cast<Index>(tree.size());
  std::vector<Polyhedron> blocks{Polyhedron::whole_space(d)};
  for (const auto& node : tree.nodes) blocks.push_back(node.cone);
  const auto ls = tree.leaves();
  Matrix terminal = Matrix::Zero(static_cast<Index>(ls.size()) * d, d + n * d);
  for (std::size_t j = 0; j < ls.size(); ++j) {
    const Index row = static_cast<Index>(j) * d;
    terminal.block(row, 0, d, d) = Matrix::Identity(d, d);
    for (std::size_t k : tree.path(ls[j]))
      terminal.block(row, d + static_cast<Index>(k) * d, d, d) = -Matrix::Identity(d, d);
  }
  return {cartesian_product(blocks), std::move(terminal)};
}

Polyhedron superhedge_set(const ScenarioTree& tree, const RandomPortfolio& claim) {
  require_valid_tree(tree);
  check_claim(tree, claim);
  const auto ls = tree.leaves();
  // Positions at a node that superhedge the claim from there on: K(n) + intersection over children.
  std::vector<std::optional<Polyhedron>> hedge(tree.size());
  for (std::size_t j = 0; j < ls.size(); ++j)
    hedge[ls[j]] = translate(tree.nodes[ls[j]].cone, Vector(claim.row(static_cast<Index>(j)).transpose()));
  for (std::size_t k = tree.size(); k-- > 0;) {
    if (hedge[k]) continue;
    std::optional<Polyhedron> meet;
    for (std::size_t c : tree.children(k)) meet = meet ? intersect(*meet, *hedge[c]) : *hedge[c];
    hedge[k] = canonical(minkowski_sum(tree.nodes[k].cone, *meet));
  }
  return *hedge[0];
}

std::vector<PricingProcess> consistent_pricing_generators(const ScenarioTree& tree) {
  require_valid_tree(tree);
  const Polyhedron cone = canonical(Polyhedron(cpp_system(tree).h));
  std::vector<PricingProcess> out;
  for (const auto& r : cone.vrep().rays) out.push_back(process_from_leaves(tree, r));
  return out;
}

std::optional<PricingProcess> strict_cpp(const ScenarioTree& tree) {
  require_valid_tree(tree);
  const CppSystem sys = cpp_system(tree);
  std::vector<std::size_t> strict(sys.strict_rows);
  std::iota(strict.begin(), strict.end(), std::size_t{0});
  const auto point = strict_feasible(sys.h, strict);
  if (!point) return std::nullopt;
  return process_from_leaves(tree, *point);
}

bool strict_cpp_exists(const ScenarioTree& tree) { return strict_cpp(tree).has_value(); }

Polyhedron superhedge_dual(const ScenarioTree& tree, const RandomPortfolio& claim) {
  require_valid_tree(tree);
  check_claim(tree, claim);
  if (!strict_cpp_exists(tree))
    throw NoArbitrageViolated("no strictly consistent pricing process exists; the dual description is not exact");
  const auto ls = tree.leaves();
  HRep h;
  h.dim = tree.d;
  for (const auto& z : consistent_pricing_generators(tree)) {
    Rational value = 0;
    for (std::size_t j = 0; j < ls.size(); ++j)
      value += tree.path_probability(ls[j]) * claim.row(static_cast<Index>(j)).dot(z.z[ls[j]].transpose());
    h.add_inequality(z.z[0], value);
  }
  return canonical(Polyhedron(h));
}

void check_process(const ScenarioTree& tree, const PricingProcess& z) {
  require_valid_tree(tree);
  if (z.z.size() != tree.size())
    throw InvalidProcess("process has " + std::to_string(z.z.size()) + " nodes, tree has " +
                         std::to_string(tree.size()));
  for (std::size_t k = 0; k < tree.size(); ++k) {
    const std::string at = "node " + std::to_string(k);
    if (z.z[k].size() != tree.d) throw InvalidProcess(at + ": wrong number of assets");
    if (!contains(dual_cone(tree.nodes[k].cone), z.z[k])) throw InvalidProcess(at + ": Z is not in K^+");
    const auto cs = tree.children(k);
    if (cs.empty()) continue;
    Vector mean = Vector::Zero(tree.d);
    for (std::size_t c : cs) mean += tree.nodes[c].prob * z.z[c];
    if (!equal(mean, z.z[k])) throw InvalidProcess(at + ": martingale property fails");
  }
  if (is_zero(z.z[0])) throw InvalidProcess("node 0: Z_0 = 0");
}

DualPair cpp_to_dualpair(const ScenarioTree& tree, const PricingProcess& z) {
  check_process(tree, z);
  const auto ls = tree.leaves();
  DualPair pair{Matrix(static_cast<Index>(ls.size()), tree.d), z.z[0]};
  for (std::size_t j = 0; j < ls.size(); ++j) {
    const Rational p = tree.path_probability(ls[j]);
    for (Index i = 0; i < tree.d; ++i)
      pair.q(static_cast<Index>(j), i) = pair.w[i] == 0 ? p : p * z.z[ls[j]][i] / pair.w[i];
  }
  const PricingProcess back = dualpair_to_cpp(tree, pair);
  for (std::size_t k = 0; k < tree.size(); ++k)
    if (!equal(back.z[k], z.z[k]))
      throw InvalidProcess("node " + std::to_string(k) + ": E[diag(w) dQ/dP | F_t] does not reproduce Z_t");
  return pair;
}

PricingProcess dualpair_to_cpp(const ScenarioTree& tree, const DualPair& pair) {
  require_valid_tree(tree);
  const auto ls = tree.leaves();
  if (pair.q.rows() != static_cast<Index>(ls.size()) || pair.q.cols() != tree.d || pair.w.size() != tree.d)
    throw ShapeMismatch("dual pair does not match the tree");
  Vector leaf_values(static_cast<Index>(ls.size()) * tree.d);
  for (std::size_t j = 0; j < ls.size(); ++j) {
    const Rational p = tree.path_probability(ls[j]);
    for (Index i = 0; i < tree.d; ++i)
      leaf_values[static_cast<Index>(j) * tree.d + i] = pair.w[i] * pair.q(static_cast<Index>(j), i) / p;
  }
  return process_from_leaves(tree, leaf_values);
}

}  // namespace setrisk
