// setrisk: validate market models and evaluate set-valued risk measures.
//
// Usage:
//   setrisk validate MODEL
//   setrisk risk MODEL [--claim X] [--measure worst-case] [--v 1 1] [--augment]
//   setrisk dual|scalarize|var|avar|superhedge|check MODEL [...]
//   setrisk explain TOPIC
//
// Exit status: 0 success, 1 I/O or usage error, 2 invalid model, 3 hypotheses of the
// requested representation fail (the answer would not be exact).
#include "setrisk/model_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace setrisk;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kIo = 1, kInvalid = 2, kRefused = 3 };

struct Options {
  std::string command;
  std::string model;
  std::string claim;
  std::string measure;
  std::string alpha;
  std::vector<std::string> lambda;
  std::vector<std::string> v;
  bool augment = false;
  bool primal_dual = false;
  bool axioms = false;
  std::string output;
  std::string format = "json";
  std::string topic;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool verbose() {
  const char* v = std::getenv("SETRISK_VERBOSE");
  return v && *v && std::string(v) != "0";
}

void note(const std::string& msg) {
  if (verbose()) std::cerr << "setrisk: " << msg << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Vector parse_vector(const std::vector<std::string>& items, const std::string& flag) {
  Vector v(static_cast<Index>(items.size()));
  for (std::size_t k = 0; k < items.size(); ++k) {
    try {
      v[static_cast<Index>(k)] = parse_rational(items[k]);
    } catch (const std::exception& e) {
      throw UsageError(flag + ": " + e.what());
    }
  }
  return v;
}

// ---------------------------------------------------------------- text output

std::string term(const Rational& c, const std::string& var, bool first) {
  if (c == 0) return "";
  std::string out = first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
  const Rational a = c < 0 ? Rational(-c) : c;
  if (a != 1) out += to_string(a) + " ";
  return out + var;
}

std::string linear(const Vector& a, const std::string& prefix) {
  std::string out;
  for (Index i = 0; i < a.size(); ++i) {
    const std::string t = term(a[i], prefix + std::to_string(i + 1), out.empty());
    out += t;
  }
  return out.empty() ? "0" : out;
}

std::string vec(const Vector& v) {
  std::string out = "(";
  for (Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

void describe(std::ostream& os, const Polyhedron& poly, const std::string& indent) {
  const Polyhedron p = canonical(poly);
  if (p.is_empty()) {
    os << indent << "empty set\n";
    return;
  }
  if (p.hrep().inequalities.empty() && p.hrep().equalities.empty()) os << indent << "all of R^" << p.dim() << "\n";
  for (const auto& c : p.hrep().equalities) os << indent << linear(c.normal, "u") << " = " << to_string(c.offset) << "\n";
  for (const auto& c : p.hrep().inequalities) os << indent << linear(c.normal, "u") << " >= " << to_string(c.offset) << "\n";
  const VRep& v = p.vrep();
  for (const auto& x : v.vertices) os << indent << "vertex    " << vec(x) << "\n";
  for (const auto& x : v.rays) os << indent << "ray       " << vec(x) << "\n";
  for (const auto& x : v.lineality) os << indent << "lineality " << vec(x) << "\n";
}

void describe(std::ostream& os, const RiskSet& r, const std::string& indent) {
  if (r.is_empty()) {
    os << indent << "empty set\n";
    return;
  }
  for (std::size_t k = 0; k < r.pieces.size(); ++k) {
    if (r.is_union()) os << indent << "piece " << k + 1 << ":\n";
    describe(os, r.pieces[k], r.is_union() ? indent + "  " : indent);
  }
}

// ---------------------------------------------------------------- tasks

struct Result {
  json data;
  std::string text;
};

Task resolve_task(const ModelDocument& doc, const Options& o, const std::string& kind, const std::string& measure) {
  Task t;
  for (const auto& candidate : doc.tasks)
    if (candidate.kind == kind && (measure.empty() || candidate.measure == measure)) {
      t = candidate;
      break;
    }
  t.kind = kind;
  if (!measure.empty()) t.measure = measure;
  if (!o.measure.empty()) t.measure = o.measure;
  if (!o.claim.empty()) t.claim = o.claim;
  if (!o.alpha.empty()) {
    try {
      t.alpha = parse_rational(o.alpha);
    } catch (const std::exception& e) {
      throw UsageError(std::string("--alpha: ") + e.what());
    }
  }
  if (!o.lambda.empty()) t.lambda = parse_vector(o.lambda, "--lambda");
  if (!o.v.empty()) t.v = parse_vector(o.v, "--v");
  if (o.augment) t.augment = true;
  if (t.claim.empty()) {
    if (doc.claims.size() != 1) throw UsageError("choose a claim with --claim");
    t.claim = doc.claims.begin()->first;
  }
  if (!doc.claims.contains(t.claim)) throw UsageError("unknown claim '" + t.claim + "'");
  if (kind != "superhedge") {
    if (!doc.market) throw UsageError(kind + " needs a model with a market block");
    if (t.measure.empty()) t.measure = "worst-case";
    const Index d = doc.market->d();
    if (t.v && t.v->size() != d) throw UsageError("--v needs " + std::to_string(d) + " entries");
    if (t.lambda && t.lambda->size() != d) throw UsageError("--lambda needs " + std::to_string(d) + " entries");
    if (t.measure == "var" && !t.alpha) throw UsageError("var needs --alpha");
    if (t.measure == "avar" && !t.lambda) throw UsageError("avar needs --lambda");
    if (kind == "scalarize" && !t.v) throw UsageError("scalarize needs --v");
  } else if (!doc.tree) {
    throw UsageError("superhedge needs a model with a tree block");
  }
  return t;
}

json task_header(const Task& t) {
  json out{{"kind", t.kind}, {"claim", t.claim}};
  if (!t.measure.empty()) out["measure"] = t.measure;
  if (t.alpha) out["alpha"] = to_json(*t.alpha);
  if (t.lambda) out["lambda"] = to_json(*t.lambda);
  if (t.v) out["v"] = to_json(*t.v);
  if (t.augment) out["augment"] = true;
  return out;
}

std::string headline(const Task& t) {
  std::string out = t.kind + " of claim " + t.claim;
  if (!t.measure.empty()) out += " under " + t.measure + (t.augment ? " (augmented)" : "");
  if (t.alpha) out += ", alpha = " + to_string(*t.alpha);
  if (t.lambda) out += ", lambda = " + vec(*t.lambda);
  return out + "\n";
}

Result run_validate(const ModelDocument& doc) {
  std::ostringstream os;
  json out{{"valid", true}};
  if (doc.market) {
    const bool na = no_arbitrage(*doc.market);
    out["model"] = "market";
    out["scenarios"] = doc.market->n();
    out["assets"] = doc.market->d();
    out["eligible_dim"] = doc.market->eligible.m();
    out["no_arbitrage"] = na;
    os << "valid market: " << doc.market->n() << " scenarios, " << doc.market->d() << " assets, dim M = "
       << doc.market->eligible.m() << "\n"
       << "no arbitrage: " << (na ? "yes" : "no") << "\n";
  } else {
    const bool strict = strict_cpp_exists(*doc.tree);
    out["model"] = "tree";
    out["nodes"] = doc.tree->size();
    out["leaves"] = doc.tree->leaves().size();
    out["horizon"] = doc.tree->horizon();
    out["assets"] = doc.tree->d;
    out["strict_cpp"] = strict;
    os << "valid tree: " << doc.tree->size() << " nodes, " << doc.tree->leaves().size() << " leaves, horizon "
       << doc.tree->horizon() << ", " << doc.tree->d << " assets\n"
       << "strictly consistent pricing process: " << (strict ? "exists" : "none") << "\n";
  }
  out["claims"] = doc.claims.size();
  out["tasks"] = doc.tasks.size();
  return {out, os.str()};
}

Result run_risk(const ModelDocument& doc, const Task& t) {
  const OnePeriodMarket& m = *doc.market;
  const RandomPortfolio& x = doc.claims.at(t.claim);
  const AcceptanceSet a = acceptance_for(m, t);
  const RiskSet r = evaluate(a, x);
  std::ostringstream os;
  os << headline(t) << "accepted: " << (accepts(a, x) ? "yes" : "no") << "\nrisk set:\n";
  describe(os, r, "  ");
  json out{{"task", task_header(t)}, {"accepted", accepts(a, x)}, {"risk_set", to_json(r)}};
  if (t.v) {
    const Extended s = scalarize(a, x, *t.v);
    out["scalarization"] = to_json(s);
    os << "scalarization with v = " << vec(*t.v) << ": " << to_string(s) << "\n";
  }
  return {out, os.str()};
}

Result run_scalarize(const ModelDocument& doc, const Task& t) {
  const AcceptanceSet a = acceptance_for(*doc.market, t);
  const Extended s = scalarize(a, doc.claims.at(t.claim), *t.v);
  return {{{"task", task_header(t)}, {"value", to_json(s)}},
          headline(t) + "scalarization with v = " + vec(*t.v) + ": " + to_string(s) + "\n"};
}

Result run_dual(const ModelDocument& doc, const Task& t) {
  const OnePeriodMarket& m = *doc.market;
  const RandomPortfolio& x = doc.claims.at(t.claim);
  const AcceptanceSet a = acceptance_for(m, t);
  const PrimalDualReport report = primal_dual_check(a, {x});
  const DualFamily family = dual_family(a);
  json pairs = json::array();
  for (std::size_t k = 0; k < family.pairs.size(); ++k) {
    const DualPair& p = family.pairs[k];
    json q = json::array();
    for (Index w = 0; w < p.q.rows(); ++w) q.push_back(to_json(Vector(p.q.row(w).transpose())));
    const PenaltyValue& pen = family.penalties[k];
    json penalty = pen.kind == PenaltyValue::Kind::halfspace ? json{{"halfspace", to_json(pen.offset)}}
                   : pen.kind == PenaltyValue::Kind::whole_m ? json("whole")
                                                             : json("empty");
    pairs.push_back({{"w", to_json(p.w)}, {"q", q}, {"penalty", penalty}});
  }
  json limits = json::array();
  for (const auto& l : family.limits) {
    json eta = json::array();
    for (Index w = 0; w < l.eta.rows(); ++w) eta.push_back(to_json(Vector(l.eta.row(w).transpose())));
    limits.push_back({{"eta", eta}, {"offset", to_json(l.offset)}});
  }
  std::ostringstream os;
  os << headline(t) << "dual family: " << family.pairs.size() << " pairs, " << family.limits.size() << " limits\n";
  for (const auto& p : family.pairs) os << "  w = " << vec(p.w) << "\n";
  os << "dual risk set:\n";
  describe(os, report.dual.front(), "  ");
  os << "primal and dual: " << (report.all_equal() ? "equal" : "differ") << "\n";
  return {{{"task", task_header(t)},
           {"pairs", pairs},
           {"limits", limits},
           {"risk_set", to_json(report.dual.front())},
           {"equal_to_primal", report.all_equal()}},
          os.str()};
}

Result run_superhedge(const ModelDocument& doc, const Task& t) {
  const ScenarioTree& tree = *doc.tree;
  const RandomPortfolio& c = doc.claims.at(t.claim);
  const Polyhedron primal = superhedge_set(tree, c);
  note("primal superhedging set computed");
  const Polyhedron dual = superhedge_dual(tree, c);
  std::ostringstream os;
  os << "superhedging prices of claim " << t.claim << ":\n";
  describe(os, primal, "  ");
  os << "consistent pricing processes: " << consistent_pricing_generators(tree).size() << " generators\n"
     << "primal and dual: " << (primal == dual ? "equal" : "differ") << "\n";
  return {{{"task", task_header(t)},
           {"superhedging_set", to_json(primal)},
           {"dual_set", to_json(dual)},
           {"equal", primal == dual}},
          os.str()};
}

Result run_check(const ModelDocument& doc, const Task& t, const Options& o) {
  const OnePeriodMarket& m = *doc.market;
  const AcceptanceSet a = acceptance_for(m, t);
  json out{{"task", task_header(t)}};
  std::ostringstream os;
  os << headline(t);
  if (o.primal_dual) {
    const PrimalDualReport r = primal_dual_check(a, {doc.claims.at(t.claim)});
    out["primal_dual"] = to_json(r);
    os << "primal and dual: " << (r.all_equal() ? "equal" : "differ") << "\nprimal:\n";
    describe(os, r.primal.front(), "  ");
    os << "dual:\n";
    describe(os, r.dual.front(), "  ");
  }
  if (o.axioms || !o.primal_dual) {
    HarnessSamples samples;
    for (const auto& [name, x] : doc.claims) samples.portfolios.push_back(x);
    for (Index k = 0; k < m.eligible.m(); ++k) samples.shifts.push_back(unit(m.eligible.m(), k));
    samples.weights = {Rational(1, 2)};
    const HarnessReport h = axiom_harness(a, samples);
    json sampled{{"membership_roundtrip", h.membership_roundtrip},
                 {"translative", h.translative},
                 {"monotone", h.monotone_sampled},
                 {"subadditive", h.subadditive},
                 {"convex", h.convex_sampled}};
    json axioms{{"exact", to_json(h.axioms)}, {"sampled", sampled}};
    for (const auto& [name, value] : h.axioms.entries()) os << "  " << name << ": " << (value ? "yes" : "no") << "\n";
    for (const auto& [name, value] : sampled.items()) os << "  sampled " << name << ": " << (value.get<bool>() ? "yes" : "no") << "\n";
    if (h.counterexample) {
      const auto& c = *h.counterexample;
      json rows_x = json::array(), rows_y = json::array();
      for (Index w = 0; w < c.x.rows(); ++w) rows_x.push_back(to_json(Vector(c.x.row(w).transpose())));
      for (Index w = 0; w < c.x_prime.rows(); ++w) rows_y.push_back(to_json(Vector(c.x_prime.row(w).transpose())));
      axioms["counterexample"] = {{"x", rows_x}, {"x_prime", rows_y}, {"t", to_json(c.t)}, {"u", to_json(c.u)}};
      os << "  convexity counterexample: t = " << to_string(c.t) << ", u = " << vec(c.u) << "\n";
    }
    out["axioms"] = axioms;
  }
  return {out, os.str()};
}

std::string explain(const std::string& topic) {
  if (topic == "validate")
    return "validate: checks the model. Markets need probabilities summing to 1, solvency cones K with\n"
           "R^d_+ subset of K != R^d, and an eligible space M meeting R^d_+ with K_I^M != {0}. Trees also\n"
           "need consistent parents, branch probabilities and a common horizon.\n"
           "operations: parse_model, validate_market, validate_tree, no_arbitrage, strict_cpp_exists\n";
  if (topic == "risk" || topic == "var" || topic == "avar")
    return "risk: R_A(X) = {u in M : X + u 1 in A}, the eligible deposits making X acceptable.\n"
           "The acceptance set A is chosen by --measure: solvency (X(w) in K_T(w) for every w),\n"
           "worst-case (the smallest market-compatible set, A = L(K_T) + K_I^M 1), orthant, var\n"
           "(solvent with probability at least 1 - alpha) or avar (dual cone built from lambda).\n"
           "--augment replaces A by A + L(K_T) + K_I^M 1.\n"
           "operations: acceptance_for, evaluate, accepts, scalarize\n";
  if (topic == "scalarize")
    return "scalarize: phi(X) = inf { v . u : u in R_A(X) }, +inf for an empty risk set.\n"
           "For v in the dual of K_I^M this is a scalar multi-asset risk measure.\n"
           "operations: acceptance_for, scalarize\n";
  if (topic == "dual")
    return "dual: R_A(X) = intersection over dual pairs (Q, w) of\n"
           "  -alpha(Q, w) + (E^Q[-X] + G(w)) intersected with M,  G(w) = {x : w . x >= 0},\n"
           "for closed convex market-compatible A; alpha is the minimal penalty. The command prints\n"
           "the finite family of pairs and confirms equality with the primal risk set.\n"
           "operations: dual_family, dual_evaluate, primal_dual_check\n";
  if (topic == "superhedge")
    return "superhedge: u is a superhedging price of the claim C when u + V_T = C for a self-financing\n"
           "V with V_t - V_{t-1} in -K_t. Equivalently u . Z_0 >= E[C . Z_T] for every consistent\n"
           "pricing process Z (a K_t^+-valued martingale); the dual form needs a strictly\n"
           "consistent pricing process and is refused (exit 3) otherwise.\n"
           "operations: superhedge_set, consistent_pricing_generators, strict_cpp_exists, superhedge_dual\n";
  if (topic == "check")
    return "check: decides the acceptance-set axioms exactly and samples the correspondence between A and\n"
           "R_A (membership, translativity, monotonicity, subadditivity, convexity). --primal-dual\n"
           "compares the primal risk set with its dual intersection.\n"
           "operations: check_axioms, axiom_harness, primal_dual_check\n";
  throw UsageError("no explanation for '" + topic + "'");
}

int dispatch(const Options& o) {
  if (o.command == "explain") {
    std::cout << explain(o.topic);
    return kOk;
  }
  const auto start = std::chrono::steady_clock::now();
  const ModelDocument doc = parse_model(read_file(o.model));
  note("parsed " + o.model);
  Result result;
  if (o.command == "validate") {
    result = run_validate(doc);
  } else if (o.command == "risk" || o.command == "var" || o.command == "avar") {
    const std::string measure = o.command == "risk" ? "" : o.command;
    result = run_risk(doc, resolve_task(doc, o, "risk", measure));
  } else if (o.command == "scalarize") {
    result = run_scalarize(doc, resolve_task(doc, o, "scalarize", ""));
  } else if (o.command == "dual") {
    result = run_dual(doc, resolve_task(doc, o, "dual", ""));
  } else if (o.command == "superhedge") {
    result = run_superhedge(doc, resolve_task(doc, o, "superhedge", ""));
  } else if (o.command == "check") {
    Task t = resolve_task(doc, o, "risk", "");
    result = run_check(doc, t, o);
  }
  const std::string text = o.format == "text" ? result.text : serialize_result(result.data);
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output, std::ios::binary);
    if (!out || !(out << text)) throw std::ios_base::failure("cannot write " + o.output);
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  note(o.command + " finished in " + std::to_string(ms.count()) + " ms");
  return kOk;
}

/// Refusals (3) mean the hypotheses behind an exact answer fail; anything else from the library is invalid input (2).
int exit_code(const Error& e) {
  if (dynamic_cast<const NoArbitrageViolated*>(&e) || dynamic_cast<const PreconditionViolated*>(&e) ||
      dynamic_cast<const EmptyDualSet*>(&e) || dynamic_cast<const EmptyDualFamily*>(&e) ||
      dynamic_cast<const UnionNotSupported*>(&e) || dynamic_cast<const NotACone*>(&e))
    return kRefused;
  return kInvalid;
}

void report(const std::string& format, const json& data, const std::string& text) {
  if (format == "text")
    std::cerr << text;
  else
    std::cout << serialize_result(data);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-valued risk measures on finite markets with transaction costs"};
  app.require_subcommand(1);
  Options o;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("model", o.model, "model file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o.output, "write results to this file instead of stdout");
    sub->add_option("-f,--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  auto add_task = [&](CLI::App* sub, bool measure) {
    sub->add_option("--claim", o.claim, "claim name (default: the only claim)");
    if (measure) {
      sub->add_option("--measure", o.measure, "solvency, worst-case, orthant, var or avar")
          ->check(CLI::IsMember({"solvency", "worst-case", "orthant", "var", "avar"}));
      sub->add_option("--alpha", o.alpha, "V@R level, e.g. 1/3");
      sub->add_option("--lambda", o.lambda, "AV@R levels, one per asset");
      sub->add_flag("--augment", o.augment, "use the market-compatible augmentation");
      sub->add_option("--v", o.v, "scalarization direction, one entry per asset");
    }
  };

  struct Sub {
    const char* name;
    const char* help;
    bool task;
    bool measure;
  };
  const Sub subs[] = {{"validate", "check the model and report its structure", false, false},
                      {"risk", "evaluate the risk set of a claim", true, true},
                      {"dual", "dual representation and its agreement with the primal set", true, true},
                      {"scalarize", "infimum of v . u over the risk set", true, true},
                      {"var", "risk set under vector V@R (needs --alpha)", true, true},
                      {"avar", "risk set under vector AV@R (needs --lambda)", true, true},
                      {"superhedge", "superhedging prices on a scenario tree", true, false},
                      {"check", "axiom checks; --primal-dual compares both representations", true, true}};
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_model(sub);
    if (s.task) add_task(sub, s.measure);
    if (std::string(s.name) == "check") {
      sub->add_flag("--primal-dual", o.primal_dual, "compare primal and dual risk sets");
      sub->add_flag("--axioms", o.axioms, "exact and sampled axiom checks (default)");
    }
    sub->callback([&o, name = std::string(s.name)] { o.command = name; });
  }
  CLI::App* ex = app.add_subcommand("explain", "describe what a subcommand computes");
  ex->add_option("topic", o.topic, "subcommand name")->required();
  ex->callback([&o] { o.command = "explain"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIo;
  }

  try {
    return dispatch(o);
  } catch (const ValidationError& e) {
    json v = json::array();
    std::string text = "invalid model:\n";
    for (const auto& s : e.violations()) {
      v.push_back(s);
      text += "  " + s + "\n";
    }
    report(o.format, {{"valid", false}, {"violations", v}}, text);
    return kInvalid;
  } catch (const ParseError& e) {
    report(o.format, {{"valid", false}, {"parse_error", {{"at", e.path()}, {"message", e.what()}}}},
           std::string(e.what()) + "\n");
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e);
  } catch (const UsageError& e) {
    std::cerr << "setrisk: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "setrisk: " << e.what() << "\n";
    return kIo;
  }
}
