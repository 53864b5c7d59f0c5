#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wao/obstr.hpp"

namespace wao {

using Json = nlohmann::ordered_json;

/// Malformed scenario input; path names the offending field, e.g. "module.relations[1]".
class ScenarioError : public PreconditionError {
 public:
  ScenarioError(std::string path, const std::string& msg)
      : PreconditionError(path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Scenario {
  std::string name;
  Json datum_spec;
  DatumPtr datum;
  ModulePtr module;
  /// Named place sets; "empty" is always present.
  std::map<std::string, std::vector<std::string>> sets;
  std::string default_set = "empty";
  /// Named local class tuples, kept raw until a Ch group is available.
  std::map<std::string, Json> tuples;
  std::optional<ModuleMap> character_map;  // Ghat -> M for units-pic
  ChLevel level = ChLevel::Provider;
  long long bound = 50;
};

Scenario parse_scenario(const Json& j);
Scenario load_scenario(const std::string& path);

DatumPtr parse_datum(const Json& j, const std::string& path);
ModulePtr parse_module(const Json& j, const FinGroupPtr& g, const std::string& path);
Json module_to_json(const GammaModule& m);

/// Tuple JSON: {"set": name, "classes": {label: {"kummer": [ints]} | {"cocycle": [[...], ...]} | {"coords": [...]}}}.
LocalClassTuple parse_tuple(const Json& t, const ChGroup& ch, const std::string& path);

/// Integers that fit in 53 bits as JSON numbers, larger ones as strings.
Json int_json(const Int& x);
Json ints_json(const IntVec& v);
std::string fraction_string(const mpq_class& q);

}  // namespace wao
