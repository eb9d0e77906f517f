#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bcvhelix/bcv_space.hpp"
#include "bcvhelix/numerics.hpp"

namespace bcvapp {

using Json = nlohmann::ordered_json;

enum class Command { Classify, Chart, Cmc, Minimal, Deform, Verify, Export };

std::optional<Command> parse_command(std::string_view s);
std::string_view to_string(Command c);

enum class Family { CmcCase, MinimalCase, Explicit };

// U for explicit seeds:
//   sqrt-quadratic  U = sqrt(alpha u^2 + beta)
//   polynomial      U = sum coefficients[k] u^k
// plus perturbation * u on top.
struct ExplicitProfile {
  std::string kind = "sqrt-quadratic";
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<double> coefficients;
  double perturbation = 0.0;
};

struct SeedConfig {
  Family family = Family::Explicit;
  double m = 1.0;
  double a = 0.0;
  double H = 0.0;
  double c = 0.0;
  std::optional<bcv::Interval> u_range;  // required for explicit seeds
  ExplicitProfile profile;
};

struct GridConfig {
  int nu = 41;
  int nt = 41;
  bcv::Interval t_range{-3.141592653589793, 3.141592653589793};
  bool raw = false;       // (u, theta) instead of the natural (u, t)
  double margin = 0.02;   // fraction of the domain left out at each end
};

struct Checks {
  double cmc_residual = 1e-8;
  double mean_curvature = 1e-4;
  double first_form = 1e-6;
  double isometry = 1e-6;
  int samples = 50;  // u-samples for residual checks
};

struct OutputConfig {
  std::string stem = "surface";
  std::vector<std::string> formats{"json"};

  bool wants(std::string_view f) const;
};

struct JobConfig {
  bcv::BcvSpace space{0, 0};
  std::optional<Command> mode;
  SeedConfig seed;
  bool seed_given = false;
  std::vector<double> sweep;  // values of a
  GridConfig grid;
  bcv::Tolerances tolerances;
  Checks checks;
  OutputConfig output;
};

/// Problems with a config document, with a location: "line L, column C" for
/// syntax errors, a dotted field path for schema errors.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies "a.b.c=value" to the document. The value is read as JSON when it
/// parses as JSON and as a string otherwise.
void apply_override(Json& doc, std::string_view assignment);

Json parse_document(std::string_view text);
JobConfig parse_config(const Json& doc);
JobConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// Normalized form of the effective config, echoed into reports.
Json to_json(const JobConfig& cfg);

}  // namespace bcvapp
