#include "setrisk/model_io.hpp"

#include <algorithm>

namespace setrisk {

using nlohmann::json;

namespace {

const std::vector<std::string> kTaskKinds{"validate", "risk", "dual", "scalarize", "superhedge"};
const std::vector<std::string> kMeasures{"solvency", "worst-case", "orthant", "var", "avar"};

bool one_of(const std::string& s, const std::vector<std::string>& options) {
  return std::find(options.begin(), options.end(), s) != options.end();
}

std::string listed(const std::vector<std::string>& options) {
  std::string out;
  for (const auto& o : options) out += (out.empty() ? "" : ", ") + o;
  return out;
}

// ------------------------------------------------------------------ reading

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_.empty() ? "/" : path_, what); }

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  Reader at(const std::string& key) const {
    if (!node_.is_object()) fail("expected an object");
    if (!node_.contains(key)) Reader(node_, path_ + "/" + key).fail("missing field");
    return {node_.at(key), path_ + "/" + key};
  }
  Reader at(std::size_t k) const { return {node_.at(k), path_ + "/" + std::to_string(k)}; }
  bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

  void only_keys(const std::vector<std::string>& allowed) const {
    if (!node_.is_object()) fail("expected an object");
    for (const auto& [key, value] : node_.items())
      if (!one_of(key, allowed)) Reader(value, path_ + "/" + key).fail("unknown field (allowed: " + listed(allowed) + ")");
  }

  std::size_t array_size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  Rational rational() const {
    if (!node_.is_string()) fail("rationals are written as strings such as \"1/3\"");
    try {
      return parse_rational(node_.get<std::string>());
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  Index index() const {
    if (!node_.is_number_integer() || node_.get<long long>() < 0) fail("expected a nonnegative integer");
    return static_cast<Index>(node_.get<long long>());
  }

  bool boolean() const {
    if (!node_.is_boolean()) fail("expected true or false");
    return node_.get<bool>();
  }

  Vector vector(std::optional<Index> expected = std::nullopt) const {
    const std::size_t n = array_size();
    if (expected && static_cast<Index>(n) != *expected)
      fail("expected " + std::to_string(*expected) + " entries, found " + std::to_string(n));
    Vector v(static_cast<Index>(n));
    for (std::size_t k = 0; k < n; ++k) v[static_cast<Index>(k)] = at(k).rational();
    return v;
  }

  /// Rows of equal length `cols`.
  Matrix rows(Index cols) const {
    const std::size_t n = array_size();
    Matrix m(static_cast<Index>(n), cols);
    for (std::size_t k = 0; k < n; ++k) m.row(static_cast<Index>(k)) = at(k).vector(cols).transpose();
    return m;
  }

 private:
  const json& node_;
  std::string path_;
};

std::vector<Vector> vector_list(const Reader& r, Index d) {
  std::vector<Vector> out;
  for (std::size_t k = 0; k < r.array_size(); ++k) out.push_back(r.at(k).vector(d));
  return out;
}

Polyhedron read_cone(const Reader& r, Index d) {
  if (r.has("generators")) {
    r.only_keys({"generators"});
    const Reader g = r.at("generators");
    g.only_keys({"rays", "lineality"});
    const auto rays = g.has("rays") ? vector_list(g.at("rays"), d) : std::vector<Vector>{};
    const auto lin = g.has("lineality") ? vector_list(g.at("lineality"), d) : std::vector<Vector>{};
    return canonical(Polyhedron::cone(d, rays, lin));
  }
  r.only_keys({"inequalities", "equalities"});
  if (!r.has("inequalities") && !r.has("equalities")) r.fail("a cone needs \"inequalities\" or \"generators\"");
  HRep h;
  h.dim = d;
  if (r.has("inequalities"))
    for (auto& a : vector_list(r.at("inequalities"), d)) h.add_inequality(std::move(a));
  if (r.has("equalities"))
    for (auto& a : vector_list(r.at("equalities"), d)) h.add_equality(std::move(a));
  return canonical(Polyhedron(h));
}

Index read_assets(const Reader& r) {
  const Index d = r.at("assets").index();
  if (d < 1) r.at("assets").fail("at least one asset required");
  return d;
}

OnePeriodMarket read_market(const Reader& r) {
  r.only_keys({"assets", "probabilities", "initial", "terminal"});
  const Index d = read_assets(r);
  OnePeriodMarket m;
  m.space.probs = r.at("probabilities").vector();
  if (m.space.probs.size() == 0) r.at("probabilities").fail("at least one scenario required");
  m.k_initial = read_cone(r.at("initial"), d);
  const Reader terminal = r.at("terminal");
  for (std::size_t k = 0; k < terminal.array_size(); ++k) m.k_terminal.push_back(read_cone(terminal.at(k), d));
  m.eligible = EligibleSpace::full(d);
  return m;
}

ScenarioTree read_tree(const Reader& r) {
  r.only_keys({"assets", "nodes"});
  ScenarioTree tree;
  tree.d = read_assets(r);
  const Reader nodes = r.at("nodes");
  for (std::size_t k = 0; k < nodes.array_size(); ++k) {
    const Reader n = nodes.at(k);
    n.only_keys({"parent", "probability", "cone"});
    TreeNode node;
    const Reader parent = n.at("parent");
    if (!parent.node().is_null()) node.parent = static_cast<std::size_t>(parent.index());
    node.prob = node.parent ? n.at("probability").rational() : Rational(1);
    node.cone = read_cone(n.at("cone"), tree.d);
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

Task read_task(const Reader& r, Index d) {
  r.only_keys({"kind", "claim", "measure", "alpha", "lambda", "v", "augment"});
  Task t;
  t.kind = r.at("kind").string();
  if (!one_of(t.kind, kTaskKinds)) r.at("kind").fail("unknown task kind (expected " + listed(kTaskKinds) + ")");
  if (t.kind != "validate") t.claim = r.at("claim").string();
  if (t.kind == "risk" || t.kind == "dual" || t.kind == "scalarize") {
    t.measure = r.at("measure").string();
    if (!one_of(t.measure, kMeasures)) r.at("measure").fail("unknown measure (expected " + listed(kMeasures) + ")");
    if (t.measure == "var") t.alpha = r.at("alpha").rational();
    if (t.measure == "avar") t.lambda = r.at("lambda").vector(d);
  }
  if (t.kind == "scalarize" || r.has("v")) t.v = r.at("v").vector(d);
  if (r.has("augment")) t.augment = r.at("augment").boolean();
  return t;
}

void check_document(const ModelDocument& doc) {
  std::vector<std::string> violations;
  if (doc.market) violations = validate_market(*doc.market);
  if (doc.tree) violations = validate_tree(*doc.tree);
  const Index rows = doc.market ? doc.market->n() : static_cast<Index>(doc.tree->leaves().size());
  const std::string rows_name = doc.market ? "scenarios" : "leaves";
  for (const auto& [name, x] : doc.claims)
    if (x.rows() != rows)
      violations.push_back("claim " + name + ": " + std::to_string(x.rows()) + " rows for " + std::to_string(rows) +
                           " " + rows_name);
  for (std::size_t k = 0; k < doc.tasks.size(); ++k) {
    const Task& t = doc.tasks[k];
    const std::string at = "task " + std::to_string(k) + " (" + t.kind + ")";
    if (!t.claim.empty() && !doc.claims.contains(t.claim)) violations.push_back(at + ": unknown claim " + t.claim);
    if (t.kind == "superhedge" && !doc.tree) violations.push_back(at + ": needs a tree block");
    if ((t.kind == "risk" || t.kind == "dual" || t.kind == "scalarize") && !doc.market)
      violations.push_back(at + ": needs a market block");
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

// ------------------------------------------------------------------ writing

json vector_list_json(const std::vector<Vector>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

json rows_json(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

json cone_json(const Polyhedron& p) {
  const HRep& h = p.hrep();
  std::vector<Vector> ineq, eq;
  for (const auto& c : h.inequalities) ineq.push_back(c.normal);
  for (const auto& c : h.equalities) eq.push_back(c.normal);
  json out{{"inequalities", vector_list_json(ineq)}};
  if (!eq.empty()) out["equalities"] = vector_list_json(eq);
  return out;
}

json task_json(const Task& t) {
  json out{{"kind", t.kind}};
  if (!t.claim.empty()) out["claim"] = t.claim;
  if (!t.measure.empty()) out["measure"] = t.measure;
  if (t.alpha) out["alpha"] = to_json(*t.alpha);
  if (t.lambda) out["lambda"] = to_json(*t.lambda);
  if (t.v) out["v"] = to_json(*t.v);
  if (t.augment) out["augment"] = true;
  return out;
}

bool same_optional_vector(const std::optional<Vector>& a, const std::optional<Vector>& b) {
  return a.has_value() == b.has_value() && (!a || equal(*a, *b));
}

// Boundary of a planar polyhedron as chains of vertices; see to_json(Polyhedron).
json planar_walk(const Polyhedron& p) {
  const VRep& v = p.vrep();
  json walk = json::array();
  auto chain = [](const std::vector<Vector>& pts, const Vector* from, const Vector* to, bool closed) {
    return json{{"closed", closed},
                {"from", from ? to_json(*from) : json(nullptr)},
                {"to", to ? to_json(*to) : json(nullptr)},
                {"vertices", vector_list_json(pts)}};
  };
  if (p.affine_dim() < 2) {
    // Point, segment, ray or line.
    const Vector* forward = !v.rays.empty() ? &v.rays.front() : !v.lineality.empty() ? &v.lineality.front() : nullptr;
    std::optional<Vector> backward;
    if (!v.lineality.empty()) backward = Vector(-v.lineality.front());
    walk.push_back(chain(v.vertices, backward ? &*backward : nullptr, forward, false));
    return walk;
  }
  std::vector<Vector> dirs = v.rays;
  for (const auto& l : v.lineality) {
    dirs.push_back(l);
    dirs.push_back(-l);
  }
  struct Edge {
    std::vector<Vector> pts;
    std::optional<Vector> from, to;
  };
  std::vector<Edge> edges;
  for (const auto& c : p.hrep().inequalities) {
    // Interior on the left when moving along e.
    const Vector e = vector_of({c.normal[1], -c.normal[0]});
    Edge edge;
    for (const auto& x : v.vertices)
      if (c.normal.dot(x) == c.offset) edge.pts.push_back(x);
    std::sort(edge.pts.begin(), edge.pts.end(), [&](const Vector& a, const Vector& b) { return e.dot(a) < e.dot(b); });
    for (const auto& d : dirs) {
      if (c.normal.dot(d) != 0) continue;
      if (e.dot(d) > 0) edge.to = d;
      if (e.dot(d) < 0) edge.from = d;
    }
    edges.push_back(std::move(edge));
  }
  std::vector<bool> used(edges.size(), false);
  auto next_edge = [&](const Vector& q) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (!used[k] && !edges[k].from && !edges[k].pts.empty() && equal(edges[k].pts.front(), q)) return k;
    return std::nullopt;
  };
  auto follow = [&](std::size_t start) {
    std::vector<Vector> pts;
    std::size_t k = start;
    for (;;) {
      used[k] = true;
      for (const auto& x : edges[k].pts)
        if (pts.empty() || !equal(pts.back(), x)) pts.push_back(x);
      if (edges[k].to) return std::make_pair(pts, edges[k].to);
      const auto nk = next_edge(edges[k].pts.back());
      if (!nk) return std::make_pair(pts, std::optional<Vector>{});
      k = *nk;
    }
  };
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (used[k] || !edges[k].from) continue;
    const auto [pts, to] = follow(k);
    walk.push_back(chain(pts, &*edges[k].from, to ? &*to : nullptr, false));
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (used[k]) continue;
    auto [pts, to] = follow(k);
    if (pts.size() > 1 && equal(pts.front(), pts.back())) pts.pop_back();
    walk.push_back(chain(pts, nullptr, nullptr, true));
  }
  return walk;
}

}  // namespace

// ------------------------------------------------------------------ documents

ModelDocument parse_model(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const std::string_view before = text.substr(0, offset);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(before.begin(), before.end(), '\n'));
    const std::size_t nl = before.rfind('\n');
    const std::size_t column = nl == std::string_view::npos ? offset + 1 : offset - nl;
    throw ParseError(std::to_string(line) + ":" + std::to_string(column), "invalid JSON");
  }
  const Reader r(root, "");
  r.only_keys({"version", "market", "tree", "eligible", "claims", "tasks"});
  ModelDocument doc;
  doc.version = r.at("version").string();
  if (doc.version != kFormatVersion) r.at("version").fail("unsupported version (expected \"" + std::string(kFormatVersion) + "\")");
  if (r.has("market") == r.has("tree")) r.fail("exactly one of \"market\" and \"tree\" is required");
  Index d = 0;
  if (r.has("market")) {
    doc.market = read_market(r.at("market"));
    d = doc.market->d();
    if (r.has("eligible")) {
      const Reader e = r.at("eligible");
      e.only_keys({"basis"});
      const auto cols = vector_list(e.at("basis"), d);
      if (cols.empty()) e.at("basis").fail("at least one basis vector required");
      Matrix b(d, static_cast<Index>(cols.size()));
      for (std::size_t k = 0; k < cols.size(); ++k) b.col(static_cast<Index>(k)) = cols[k];
      doc.market->eligible = {b};
    }
  } else {
    if (r.has("eligible")) r.at("eligible").fail("superhedging uses M = R^d; remove the eligible block");
    doc.tree = read_tree(r.at("tree"));
    d = doc.tree->d;
  }
  if (r.has("claims")) {
    const Reader claims = r.at("claims");
    if (!claims.node().is_object()) claims.fail("expected an object of named claims");
    for (const auto& [name, value] : claims.node().items()) doc.claims[name] = claims.at(name).rows(d);
  }
  if (r.has("tasks")) {
    const Reader tasks = r.at("tasks");
    for (std::size_t k = 0; k < tasks.array_size(); ++k) doc.tasks.push_back(read_task(tasks.at(k), d));
  }
  check_document(doc);
  return doc;
}

std::string serialize_model(const ModelDocument& doc) {
  json root{{"version", doc.version}};
  if (doc.market) {
    const OnePeriodMarket& m = *doc.market;
    json terminal = json::array();
    for (const auto& k : m.k_terminal) terminal.push_back(cone_json(canonical(k)));
    root["market"] = {{"assets", m.d()},
                      {"probabilities", to_json(m.space.probs)},
                      {"initial", cone_json(canonical(m.k_initial))},
                      {"terminal", terminal}};
    std::vector<Vector> cols;
    for (Index c = 0; c < m.eligible.basis.cols(); ++c) cols.push_back(m.eligible.basis.col(c));
    root["eligible"] = {{"basis", vector_list_json(cols)}};
  }
  if (doc.tree) {
    json nodes = json::array();
    for (const auto& n : doc.tree->nodes) {
      json node{{"parent", n.parent ? json(*n.parent) : json(nullptr)}, {"cone", cone_json(canonical(n.cone))}};
      if (n.parent) node["probability"] = to_json(n.prob);
      nodes.push_back(std::move(node));
    }
    root["tree"] = {{"assets", doc.tree->d}, {"nodes", nodes}};
  }
  json claims = json::object();
  for (const auto& [name, x] : doc.claims) claims[name] = rows_json(x);
  root["claims"] = claims;
  json tasks = json::array();
  for (const auto& t : doc.tasks) tasks.push_back(task_json(t));
  root["tasks"] = tasks;
  return serialize_result(root);
}

bool same_document(const ModelDocument& a, const ModelDocument& b) {
  if (a.version != b.version || a.market.has_value() != b.market.has_value() ||
      a.tree.has_value() != b.tree.has_value() || a.claims.size() != b.claims.size() || a.tasks.size() != b.tasks.size())
    return false;
  if (a.market) {
    const OnePeriodMarket &x = *a.market, &y = *b.market;
    if (x.d() != y.d() || !equal(x.space.probs, y.space.probs) || !(x.k_initial == y.k_initial) ||
        x.k_terminal.size() != y.k_terminal.size() || x.eligible.basis != y.eligible.basis)
      return false;
    for (std::size_t k = 0; k < x.k_terminal.size(); ++k)
      if (!(x.k_terminal[k] == y.k_terminal[k])) return false;
  }
  if (a.tree) {
    const ScenarioTree &x = *a.tree, &y = *b.tree;
    if (x.d != y.d || x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x.nodes[k].parent != y.nodes[k].parent || x.nodes[k].prob != y.nodes[k].prob ||
          !(x.nodes[k].cone == y.nodes[k].cone))
        return false;
  }
  for (const auto& [name, x] : a.claims) {
    const auto it = b.claims.find(name);
    if (it == b.claims.end() || x.rows() != it->second.rows() || x.cols() != it->second.cols() || x != it->second)
      return false;
  }
  for (std::size_t k = 0; k < a.tasks.size(); ++k) {
    const Task &s = a.tasks[k], &t = b.tasks[k];
    if (s.kind != t.kind || s.claim != t.claim || s.measure != t.measure || s.alpha != t.alpha ||
        !same_optional_vector(s.lambda, t.lambda) || !same_optional_vector(s.v, t.v) || s.augment != t.augment)
      return false;
  }
  return true;
}

AcceptanceSet acceptance_for(const OnePeriodMarket& m, const Task& task) {
  AcceptanceSet a = [&] {
    if (task.measure == "solvency") return solvency_acceptance(m);
    if (task.measure == "worst-case") return worst_case_acceptance(m);
    if (task.measure == "orthant") return orthant_acceptance(m);
    if (task.measure == "var") {
      if (!task.alpha) throw std::invalid_argument("var needs alpha");
      return var_acceptance(m, *task.alpha);
    }
    if (task.measure == "avar") {
      if (!task.lambda) throw std::invalid_argument("avar needs lambda");
      return avar_acceptance(m, *task.lambda);
    }
    throw std::invalid_argument("unknown measure '" + task.measure + "'");
  }();
  if (!task.augment) return a;
  return a.is_union() ? augment_union(a) : augment(a);
}

// ------------------------------------------------------------------ results

json to_json(const Rational& x) { return to_string(x); }

json to_json(const Vector& v) {
  json out = json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(to_string(v[k]));
  return out;
}

json to_json(const Extended& x) { return to_string(x); }

json to_json(const Polyhedron& poly) {
  const Polyhedron p = canonical(poly);
  if (p.is_empty()) return {{"dim", p.dim()}, {"empty", true}};
  json ineq = json::array(), eq = json::array();
  for (const auto& c : p.hrep().inequalities) ineq.push_back({{"normal", to_json(c.normal)}, {"offset", to_json(c.offset)}});
  for (const auto& c : p.hrep().equalities) eq.push_back({{"normal", to_json(c.normal)}, {"offset", to_json(c.offset)}});
  const VRep& v = p.vrep();
  json out{{"dim", p.dim()},
           {"empty", false},
           {"hrep", {{"inequalities", ineq}, {"equalities", eq}}},
           {"vrep",
            {{"vertices", vector_list_json(v.vertices)},
             {"rays", vector_list_json(v.rays)},
             {"lineality", vector_list_json(v.lineality)}}}};
  if (p.dim() == 2) out["walk"] = planar_walk(p);
  return out;
}

json to_json(const RiskSet& r) {
  json pieces = json::array();
  for (const auto& p : r.pieces) pieces.push_back(to_json(p));
  std::vector<Vector> cols;
  for (Index c = 0; c < r.basis.cols(); ++c) cols.push_back(r.basis.col(c));
  return {{"basis", vector_list_json(cols)}, {"union", r.is_union()}, {"empty", r.is_empty()}, {"pieces", pieces}};
}

json to_json(const AxiomReport& r) {
  json flags = json::object();
  for (const auto& [name, value] : r.entries()) flags[name] = value;
  return {{"flags", flags}, {"acceptance_set", r.acceptance_set()}, {"market_compatible", r.market_compatible()}};
}

json to_json(const PrimalDualReport& r) {
  json primal = json::array(), dual = json::array();
  for (const auto& s : r.primal) primal.push_back(to_json(s));
  for (const auto& s : r.dual) dual.push_back(to_json(s));
  return {{"equal", r.all_equal()}, {"mismatches", r.mismatches}, {"primal", primal}, {"dual", dual}};
}

std::string serialize_result(const json& value) { return value.dump(2) + "\n"; }

}  // namespace setrisk
