#pragma once
// Config-driven experiment runner behind the nilspace-lab command line.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "nilspace/abelian.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/error.hpp"
#include "nilspace/free_nilspace.hpp"
#include "nilspace/gowers.hpp"

namespace nilspace::harness {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";

/// Schema violation; location is a JSON pointer into the config.
class ConfigError : public Error {
 public:
  ConfigError(std::string location, const std::string& what)
      : Error(location + ": " + what), location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

// Descriptor parsing. `path` is the JSON pointer of `j`, used in errors.
const Json& field(const Json& obj, const char* key, const std::string& path);
Int get_int(const Json& obj, const char* key, const std::string& path);
Int get_int(const Json& obj, const char* key, const std::string& path, Int fallback);
double get_double(const Json& obj, const char* key, const std::string& path, double fallback);
std::string join(const std::string& path, const std::string& key);

FinAbGroup parse_group(const Json& j, const std::string& path);
Cubespace parse_space(const Json& j, const std::string& path);
PointMap parse_map(const Json& j, const std::string& path, std::size_t size, std::size_t target_size);
Phase parse_phase(const Json& j, const std::string& path);
PolyMap::MultiIndex parse_multi_index(const std::string& text, const std::string& path);
PolyMap parse_polymap(const Json& j, const std::string& path);
BinomialPhase parse_binomial_phase(const Json& j, const std::string& path, int arity);
Character parse_character(const Json& j, const std::string& path, const FinAbGroup& g);
/// Explicit values, phases, coefficient form, constant, or seeded random.
/// A coefficient form is also returned so decompositions can use it.
GroupFunction parse_function(const Json& j, const std::string& path, std::uint64_t seed,
                             std::optional<PhaseCoeffs>* form = nullptr);
GroupExtension parse_group_extension(const Json& j, const std::string& path);

Json group_json(const FinAbGroup& g);
Json phases_json(const std::vector<Phase>& p);
Json values_json(const GroupFunction& f);
Json form_json(const BinomialPhase& b);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<unsigned> threads;
};

struct RunResult {
  int exit_code = 0;
  Json report;
};

/// Never throws for bad input: schema violations give exit code 1 with the
/// location in the report.
RunResult run(const Json& config, const RunOptions& opts = {});

/// "path,value" rows for every scalar leaf of report["results"].
std::string results_csv(const Json& report);

}  // namespace nilspace::harness
