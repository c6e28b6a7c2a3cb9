#ifndef SETRISK_MODEL_IO_HPP
#define SETRISK_MODEL_IO_HPP

#include "setrisk/acceptance.hpp"
#include "setrisk/riskmeasure.hpp"
#include "setrisk/superhedge.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace setrisk {

inline constexpr const char* kFormatVersion = "1";

/// One requested computation.
struct Task {
  std::string kind;     // validate | risk | dual | scalarize | superhedge
  std::string claim;    // key into ModelDocument::claims; empty for validate
  std::string measure;  // solvency | worst-case | orthant | var | avar (risk, dual, scalarize)
  std::optional<Rational> alpha;
  std::optional<Vector> lambda;
  std::optional<Vector> v;  // scalarization direction; required for scalarize
  bool augment = false;  // replace the acceptance set by its market-compatible augmentation
};

/// A parsed model file: a one-period market or a scenario tree, named claims and tasks.
struct ModelDocument {
  std::string version = kFormatVersion;
  std::optional<OnePeriodMarket> market;
  std::optional<ScenarioTree> tree;
  std::map<std::string, RandomPortfolio> claims;
  std::vector<Task> tasks;
};

/// Exact equality; cones are compared as point sets.
bool same_document(const ModelDocument& a, const ModelDocument& b);

/// Throws ParseError (JSON pointer or line:column) for malformed text and
/// ValidationError for a well-formed document describing an invalid model.
ModelDocument parse_model(std::string_view text);
/// Canonical text; parse_model(serialize_model(doc)) reproduces doc.
std::string serialize_model(const ModelDocument& doc);

/// The acceptance set a task asks for.
AcceptanceSet acceptance_for(const OnePeriodMarket& m, const Task& task);

nlohmann::json to_json(const Rational& x);
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Extended& x);
/// H- and V-representation blocks; "empty": true for the empty set. Planar sets add a boundary walk.
nlohmann::json to_json(const Polyhedron& p);
nlohmann::json to_json(const RiskSet& r);
nlohmann::json to_json(const AxiomReport& r);
nlohmann::json to_json(const PrimalDualReport& r);

/// Deterministic text: two-space indentation, sorted keys, trailing newline.
std::string serialize_result(const nlohmann::json& value);
template <class T>
std::string serialize_result(const T& value) {
  return serialize_result(to_json(value));
}

}  // namespace setrisk

#endif  // SETRISK_MODEL_IO_HPP
