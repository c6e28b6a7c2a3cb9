#include "doctest.h"

#include "setrisk/model_io.hpp"
#include "support/generators.hpp"
#include "support/markets.hpp"
#include "support/trees.hpp"

#include <fstream>
#include <sstream>

using namespace setrisk;
using namespace setrisk::testing;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) { return slurp(std::string(SETRISK_FIXTURES) + "/" + name); }
std::string test_data(const std::string& name) { return slurp(std::string(SETRISK_TEST_DATA) + "/" + name); }

std::string parse_error_at(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e.path();
  }
  return "no error";
}

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& messages, const std::string& needle) {
  for (const auto& m : messages)
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

Vector jvec(const json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Index>(k)] = parse_rational(j[k].get<std::string>());
  return v;
}

bool contains_vector(const json& list, const Vector& v) {
  for (const auto& x : list)
    if (equal(jvec(x), v)) return true;
  return false;
}

const char* kMinimalMarket = R"({
  "version": "1",
  "market": {
    "assets": 2,
    "probabilities": ["1/2", "1/2"],
    "initial": {"inequalities": [["1", "1"]]},
    "terminal": [{"inequalities": [["1", "1"]]}, {"inequalities": [["1", "1"]]}]
  },
  "claims": {"X": [["1", "0"], ["0", "1"]]},
  "tasks": []
})";

}  // namespace

TEST_CASE("toy fixture parses to the one-leading-currency market") {
  const ModelDocument doc = parse_model(fixture("toy.json"));
  REQUIRE(doc.market);
  CHECK_FALSE(doc.tree);
  const OnePeriodMarket expected = toy_market();
  CHECK(equal(doc.market->space.probs, expected.space.probs));
  CHECK(doc.market->k_initial == expected.k_initial);
  REQUIRE(doc.market->k_terminal.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(doc.market->k_terminal[k] == expected.k_terminal[k]);
  CHECK(doc.market->eligible.basis == expected.eligible.basis);
  CHECK(doc.claims.at("X") == toy_position());
  CHECK(doc.tasks.size() == 6);
  CHECK(doc.tasks[1].v);
}

TEST_CASE("probabilities stay exact") {
  const ModelDocument doc = parse_model(fixture("toy.json"));
  CHECK(doc.market->space.probs[0] == Rational(1, 3));
  CHECK(doc.market->space.probs.sum() == 1);
  const std::string text = serialize_model(doc);
  CHECK(text.find("\"1/3\"") != std::string::npos);
}

TEST_CASE("decimal literals are read exactly") {
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("-2.25") == Rational(-9, 4));
  std::string text = kMinimalMarket;
  text.replace(text.find("[\"1/2\", \"1/2\"]"), 14, "[\"0.3\", \"0.7\"]");
  const ModelDocument doc = parse_model(text);
  CHECK(doc.market->space.probs[0] == Rational(3, 10));
}

TEST_CASE("parse and serialize round trip on every fixture") {
  for (const char* name : {"toy.json", "illiq.json", "bin2.json"}) {
    CAPTURE(name);
    const ModelDocument doc = parse_model(fixture(name));
    const std::string once = serialize_model(doc);
    const ModelDocument again = parse_model(once);
    CHECK(same_document(doc, again));
    CHECK(serialize_model(again) == once);
  }
}

TEST_CASE("random markets and trees survive a round trip") {
  Gen g(0x10ad);
  for (int trial = 0; trial < 15; ++trial) {
    ModelDocument doc;
    if (trial % 3 == 2) {
      doc.tree = random_tree(g, 2, 2, 2);
      doc.claims["C"] = random_claim(g, *doc.tree);
      doc.tasks.push_back({"superhedge", "C", "", {}, {}, {}, false});
    } else {
      doc.market = random_market(g, 3, 2 + trial % 2, trial % 2 == 0);
      doc.claims["X"] = random_portfolio(g, 3, doc.market->d());
      Task t{"risk", "X", "var", Rational(1, 3), {}, {}, trial % 4 == 0};
      t.v = Vector::Constant(doc.market->d(), Rational(1));
      doc.tasks.push_back(t);
    }
    const ModelDocument back = parse_model(serialize_model(doc));
    CHECK(same_document(doc, back));
  }
}

TEST_CASE("same_document notices changes") {
  const ModelDocument doc = parse_model(fixture("toy.json"));
  ModelDocument other = doc;
  other.claims.at("X")(0, 0) = -15;
  CHECK_FALSE(same_document(doc, other));
  other = doc;
  other.tasks[5].alpha = Rational(1, 4);
  CHECK_FALSE(same_document(doc, other));
  other = doc;
  other.market->k_terminal[0] = halfspace_cone({1, 3});
  CHECK_FALSE(same_document(doc, other));
}

TEST_CASE("generator form and inequality form describe the same cone") {
  std::string text = kMinimalMarket;
  const std::string h = R"({"inequalities": [["1", "1"]]})";
  text.replace(text.find(h), h.size(), R"({"generators": {"rays": [["1", "0"]], "lineality": [["1", "-1"]]}})");
  const ModelDocument a = parse_model(kMinimalMarket);
  const ModelDocument b = parse_model(text);
  CHECK(a.market->k_initial == b.market->k_initial);
}

TEST_CASE("malformed JSON reports line and column") {
  CHECK(parse_error_at(test_data("malformed.json")) == "6:3");
  CHECK(parse_error_at("{\n  \"version\": \"1\",\n  oops\n}") == "3:3");
}

TEST_CASE("schema errors report a JSON pointer") {
  CHECK(parse_error_at(test_data("bad_rational.json")) == "/market/probabilities/1");
  std::string text = kMinimalMarket;
  text.replace(text.find("\"version\": \"1\""), 14, "\"version\": \"9\"");
  CHECK(parse_error_at(text) == "/version");
  text = kMinimalMarket;
  text.replace(text.find("[\"0\", \"1\"]"), 10, "[\"0\"]");
  CHECK(parse_error_at(text) == "/claims/X/1");
  text = kMinimalMarket;
  text.replace(text.find("\"tasks\": []"), 11, "\"tasks\": [{\"kind\": \"guess\"}]");
  CHECK(parse_error_at(text) == "/tasks/0/kind");
  text = kMinimalMarket;
  text.replace(text.find("\"assets\""), 8, "\"asets\"");
  CHECK(parse_error_at(text).rfind("/market", 0) == 0);
}

TEST_CASE("invalid models raise ValidationError") {
  SUBCASE("K_I = R^d") {
    CHECK(mentions(violations_of(test_data("unbounded_initial.json")), "K != R^d violated"));
  }
  SUBCASE("probabilities") {
    std::string text = kMinimalMarket;
    text.replace(text.find("[\"1/2\", \"1/2\"]"), 14, "[\"1/2\", \"1/3\"]");
    CHECK(!violations_of(text).empty());
  }
  SUBCASE("wrong number of claim rows") {
    std::string text = kMinimalMarket;
    text.replace(text.find("[[\"1\", \"0\"], [\"0\", \"1\"]]"), 24, "[[\"1\", \"0\"]]");
    CHECK(mentions(violations_of(text), "X"));
  }
  SUBCASE("task naming an unknown claim") {
    std::string text = kMinimalMarket;
    text.replace(text.find("\"tasks\": []"), 11, R"("tasks": [{"kind": "risk", "claim": "Y", "measure": "orthant"}])");
    CHECK(mentions(violations_of(text), "Y"));
  }
  SUBCASE("superhedging without a tree") {
    std::string text = kMinimalMarket;
    text.replace(text.find("\"tasks\": []"), 11, R"("tasks": [{"kind": "superhedge", "claim": "X"}])");
    CHECK(!violations_of(text).empty());
  }
  SUBCASE("tree probabilities") {
    std::string text = fixture("bin2.json");
    text.replace(text.find("\"probability\": \"1/2\""), 20, "\"probability\": \"1/3\"");
    CHECK(mentions(violations_of(text), "sum to"));
  }
}

TEST_CASE("risk set of the toy claim serializes with its generators") {
  const ModelDocument doc = parse_model(fixture("toy.json"));
  const AcceptanceSet wc = acceptance_for(*doc.market, doc.tasks[1]);
  const json j = to_json(evaluate(wc, doc.claims.at("X")));
  CHECK(j["union"] == false);
  CHECK(j["empty"] == false);
  REQUIRE(j["pieces"].size() == 1);
  const json& p = j["pieces"][0];
  REQUIRE(p["hrep"]["inequalities"].size() == 1);
  const Vector normal = jvec(p["hrep"]["inequalities"][0]["normal"]);
  const Rational offset = parse_rational(p["hrep"]["inequalities"][0]["offset"].get<std::string>());
  CHECK(normal[0] == normal[1]);
  CHECK(offset == 10 * normal[0]);
  REQUIRE(p["vrep"]["lineality"].size() == 1);
  const Vector l = jvec(p["vrep"]["lineality"][0]);
  CHECK((equal(l, vector_of({1, -1})) || equal(l, vector_of({-1, 1}))));
  REQUIRE(p["vrep"]["rays"].size() == 1);
  const Vector r = jvec(p["vrep"]["rays"][0]);
  CHECK(r.sum() > 0);
}

TEST_CASE("empty sets serialize as empty") {
  const json j = to_json(Polyhedron::empty(3));
  CHECK(j["empty"] == true);
  CHECK(j["dim"] == 3);
  CHECK_FALSE(j.contains("hrep"));
}

TEST_CASE("planar walk of the toy solvency risk set") {
  const ModelDocument doc = parse_model(fixture("toy.json"));
  const RiskSet r = evaluate(solvency_acceptance(*doc.market), doc.claims.at("X"));
  const json j = to_json(r.pieces.front());
  CHECK(contains_vector(j["vrep"]["vertices"], vector_of({4, 6})));
  CHECK(contains_vector(j["vrep"]["rays"], vector_of({2, -1})));
  CHECK(contains_vector(j["vrep"]["rays"], vector_of({-1, 2})));
  REQUIRE(j["walk"].size() == 1);
  const json& chain = j["walk"][0];
  CHECK(chain["closed"] == false);
  CHECK(equal(jvec(chain["from"]), vector_of({-1, 2})));
  CHECK(equal(jvec(chain["to"]), vector_of({2, -1})));
  REQUIRE(chain["vertices"].size() == 1);
  CHECK(equal(jvec(chain["vertices"][0]), vector_of({4, 6})));
}

TEST_CASE("planar walk of a bounded set is closed and counterclockwise") {
  HRep h;
  h.dim = 2;
  h.add_inequality(vector_of({1, 0}), 0);
  h.add_inequality(vector_of({0, 1}), 0);
  h.add_inequality(vector_of({-1, -1}), -2);
  const json j = to_json(Polyhedron(h));
  REQUIRE(j["walk"].size() == 1);
  const json& chain = j["walk"][0];
  CHECK(chain["closed"] == true);
  CHECK(chain["from"].is_null());
  REQUIRE(chain["vertices"].size() == 3);
  const Vector a = jvec(chain["vertices"][0]), b = jvec(chain["vertices"][1]), c = jvec(chain["vertices"][2]);
  const Rational cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  CHECK(cross > 0);
}

TEST_CASE("planar walk of a line, a ray and a point") {
  const json line = to_json(Polyhedron::cone(2, {}, {vector_of({1, -1})}));
  CHECK(equal(jvec(line["walk"][0]["from"]), Vector(-jvec(line["walk"][0]["to"]))));
  const json ray = to_json(Polyhedron::cone(2, {vector_of({0, 1})}));
  CHECK(ray["walk"][0]["from"].is_null());
  CHECK(equal(jvec(ray["walk"][0]["to"]), vector_of({0, 1})));
  const json point = to_json(Polyhedron::cone(2, {}));
  CHECK(point["walk"][0]["vertices"].size() == 1);
}

TEST_CASE("results serialize deterministically") {
  const ModelDocument doc = parse_model(fixture("illiq.json"));
  const AcceptanceSet a = acceptance_for(*doc.market, doc.tasks[1]);
  const std::string first = serialize_result(evaluate(a, doc.claims.at("X")));
  const std::string second = serialize_result(evaluate(a, doc.claims.at("X")));
  CHECK(first == second);
  CHECK(first.back() == '\n');
  const json report = to_json(check_axioms(a));
  CHECK(report["flags"]["convex"] == true);
}

TEST_CASE("acceptance_for honours the measure and the augment flag") {
  const ModelDocument doc = parse_model(fixture("toy.json"));
  const RandomPortfolio& x = doc.claims.at("X");
  Task t{"risk", "X", "solvency", {}, {}, {}, false};
  const RiskSet plain = evaluate(acceptance_for(*doc.market, t), x);
  t.augment = true;
  const RiskSet augmented = evaluate(acceptance_for(*doc.market, t), x);
  CHECK_FALSE(plain.pieces.front() == augmented.pieces.front());
  t = {"risk", "X", "var", {}, {}, {}, false};
  CHECK_THROWS_AS(acceptance_for(*doc.market, t), std::invalid_argument);
  t.measure = "median";
  CHECK_THROWS_AS(acceptance_for(*doc.market, t), std::invalid_argument);
}
