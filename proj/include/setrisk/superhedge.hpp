#ifndef SETRISK_SUPERHEDGE_HPP
#define SETRISK_SUPERHEDGE_HPP

#include "setrisk/market.hpp"
#include "setrisk/polyhedra.hpp"
#include "setrisk/riskmeasure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace setrisk {

/// One node of a scenario tree: branch probability given the parent and the solvency cone K_t there.
struct TreeNode {
  std::optional<std::size_t> parent;  // none for the root
  Rational prob = 1;                  // ignored at the root
  Polyhedron cone = Polyhedron::orthant(1);
};

/// Finite filtration as a tree. Node 0 is the root; parents precede their children.
struct ScenarioTree {
  Index d = 0;
  std::vector<TreeNode> nodes;

  std::size_t size() const { return nodes.size(); }
  std::vector<std::size_t> children(std::size_t node) const;
  Index depth(std::size_t node) const;
  /// Horizon T (depth of the leaves).
  Index horizon() const;
  /// Leaves in node order; claims are indexed by this order.
  std::vector<std::size_t> leaves() const;
  /// Unconditional probability of reaching the node.
  Rational path_probability(std::size_t node) const;
  /// Nodes from the root down to `node`, inclusive.
  std::vector<std::size_t> path(std::size_t node) const;
};

/// Every structural violation; empty when the tree is valid.
std::vector<std::string> validate_tree(const ScenarioTree& tree);
/// Throws ValidationError listing every violation.
void require_valid_tree(const ScenarioTree& tree);

/// Root with cone K_I and one leaf per scenario with K_T(w). The eligible space is ignored.
ScenarioTree one_period_tree(const OnePeriodMarket& m);

/// K_t^+-valued martingale, one vector per node.
struct PricingProcess {
  std::vector<Vector> z;
};

/// Self-financing strategies as a lifted cone.
///
/// Variables are (u, k_0, ..., k_{N-1}) with u the initial endowment and k_n in K(n) the
/// amount disposed of at node n. The terminal map sends them to the leaf payoffs
/// u - sum of k over the path, stacked leaf-major.
struct SelfFinancingCone {
  Polyhedron cone;  // R^d x prod_n K(n)
  Matrix terminal;  // (leaves * d) x (d + nodes * d)
};

SelfFinancingCone selffinancing_cone(const ScenarioTree& tree);

/// Initial endowments u with u + V_T = C along every path for some self-financing V.
/// The claim has one row per leaf. Throws ShapeMismatch.
Polyhedron superhedge_set(const ScenarioTree& tree, const RandomPortfolio& claim);

/// Extreme rays of the cone of consistent pricing processes (possibly none).
std::vector<PricingProcess> consistent_pricing_generators(const ScenarioTree& tree);

/// A pricing process with Z_t in the relative interior of K_t^+ at every node, if one exists.
std::optional<PricingProcess> strict_cpp(const ScenarioTree& tree);
bool strict_cpp_exists(const ScenarioTree& tree);

/// Intersection over consistent pricing processes of {u : E[C^T Z_T] <= u . Z_0}.
/// Throws NoArbitrageViolated unless a strictly consistent pricing process exists.
Polyhedron superhedge_dual(const ScenarioTree& tree, const RandomPortfolio& claim);

/// Throws InvalidProcess unless z is a K^+-valued martingale with Z_0 != 0.
void check_process(const ScenarioTree& tree, const PricingProcess& z);
/// (Q, w) over the leaves with w = Z_0 and dQ_i/dP = (Z_T)_i / w_i (Q_i = P when w_i = 0).
/// Verifies that E[diag(w) dQ/dP | F_t] reproduces z at every node; throws InvalidProcess.
DualPair cpp_to_dualpair(const ScenarioTree& tree, const PricingProcess& z);
/// Z_T = diag(w) dQ/dP and Z_t its conditional expectations.
PricingProcess dualpair_to_cpp(const ScenarioTree& tree, const DualPair& pair);

}  // namespace setrisk

#endif  // SETRISK_SUPERHEDGE_HPP
