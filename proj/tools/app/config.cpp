#include "config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace bcvapp {

namespace {

constexpr std::array<std::pair<std::string_view, Command>, 7> kCommands{{
    {"classify", Command::Classify},
    {"chart", Command::Chart},
    {"cmc", Command::Cmc},
    {"minimal", Command::Minimal},
    {"deform", Command::Deform},
    {"verify", Command::Verify},
    {"export", Command::Export},
}};

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

// Rejects keys outside `allowed` so that typos do not pass silently.
void only_keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [k, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == k;
    if (!ok) fail(join(path, k), "unknown field");
  }
}

double number(const Json& obj, const std::string& path, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(join(path, key), "must be finite");
  return x;
}

int integer(const Json& obj, const std::string& path, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<int>();
}

double positive(const Json& obj, const std::string& path, const std::string& key, double fallback) {
  const double x = number(obj, path, key, fallback);
  if (!(x > 0)) fail(join(path, key), "must be positive");
  return x;
}

bcv::Interval interval(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(path, "expected [lo, hi]");
  }
  const bcv::Interval r{v[0].get<double>(), v[1].get<double>()};
  if (!(r.lo < r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) fail(path, "need finite lo < hi");
  return r;
}

std::vector<double> numbers(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

ExplicitProfile parse_profile(const Json& p, const std::string& path) {
  only_keys(p, path, {"kind", "alpha", "beta", "coefficients", "perturbation"});
  ExplicitProfile out;
  if (p.contains("kind")) {
    if (!p["kind"].is_string()) fail(path + ".kind", "expected a string");
    out.kind = p["kind"].get<std::string>();
  }
  if (out.kind == "sqrt-quadratic") {
    out.alpha = number(p, path, "alpha", 1.0);
    out.beta = number(p, path, "beta", 1.0);
  } else if (out.kind == "polynomial") {
    if (!p.contains("coefficients")) fail(path + ".coefficients", "required for a polynomial profile");
    out.coefficients = numbers(p["coefficients"], path + ".coefficients");
    if (out.coefficients.empty()) fail(path + ".coefficients", "must not be empty");
  } else {
    fail(path + ".kind", "expected \"sqrt-quadratic\" or \"polynomial\"");
  }
  out.perturbation = number(p, path, "perturbation", 0.0);
  return out;
}

SeedConfig parse_seed(const Json& s) {
  only_keys(s, "seed", {"family", "m", "a", "H", "c", "u_range", "profile"});
  SeedConfig out;
  if (!s.contains("family") || !s["family"].is_string()) fail("seed.family", "required string");
  const auto fam = s["family"].get<std::string>();
  if (fam == "cmc-case") {
    out.family = Family::CmcCase;
  } else if (fam == "minimal-case") {
    out.family = Family::MinimalCase;
  } else if (fam == "explicit") {
    out.family = Family::Explicit;
  } else {
    fail("seed.family", "expected cmc-case, minimal-case or explicit");
  }
  out.m = number(s, "seed", "m", 1.0);
  if (out.m == 0.0) fail("seed.m", "must be nonzero");
  out.a = number(s, "seed", "a", 0.0);
  out.H = number(s, "seed", "H", 0.0);
  out.c = number(s, "seed", "c", 0.0);
  if (s.contains("u_range")) out.u_range = interval(s["u_range"], "seed.u_range");
  if (out.family == Family::Explicit) {
    if (!out.u_range) fail("seed.u_range", "required for explicit seeds");
    if (!s.contains("profile")) fail("seed.profile", "required for explicit seeds");
    out.profile = parse_profile(s["profile"], "seed.profile");
  } else if (s.contains("profile")) {
    fail("seed.profile", "only explicit seeds take a profile");
  }
  if (out.family == Family::MinimalCase && out.H != 0.0) fail("seed.H", "minimal seeds have H = 0");
  return out;
}

GridConfig parse_grid(const Json& g) {
  only_keys(g, "grid", {"nu", "nt", "t_range", "parametrization", "margin"});
  GridConfig out;
  out.nu = integer(g, "grid", "nu", out.nu);
  out.nt = integer(g, "grid", "nt", out.nt);
  if (out.nu < 2) fail("grid.nu", "must be at least 2");
  if (out.nt < 2) fail("grid.nt", "must be at least 2");
  if (g.contains("t_range")) out.t_range = interval(g["t_range"], "grid.t_range");
  if (g.contains("parametrization")) {
    const Json& p = g["parametrization"];
    if (p == "natural") {
      out.raw = false;
    } else if (p == "raw") {
      out.raw = true;
    } else {
      fail("grid.parametrization", "expected \"natural\" or \"raw\"");
    }
  }
  out.margin = number(g, "grid", "margin", out.margin);
  if (!(out.margin >= 0 && out.margin < 0.5)) fail("grid.margin", "must lie in [0, 0.5)");
  return out;
}

bcv::Tolerances parse_tolerances(const Json& t) {
  bcv::Tolerances out;
  const std::map<std::string, double*, std::less<>> reals{
      {"quad_abs", &out.quad_abs},
      {"quad_rel", &out.quad_rel},
      {"fd_first", &out.fd_first},
      {"fd_second", &out.fd_second},
      {"fd_min", &out.fd_min},
      {"christoffel_step", &out.christoffel_step},
      {"brioschi_step", &out.brioschi_step},
      {"min_scale", &out.min_scale},
      {"axis_r_min", &out.axis_r_min},
      {"radicand_eps", &out.radicand_eps},
      {"arclength_tol", &out.arclength_tol},
      {"case_eps", &out.case_eps},
      {"bisection_tol", &out.bisection_tol},
  };
  const std::map<std::string, int*, std::less<>> ints{
      {"quad_max_panels", &out.quad_max_panels},
      {"domain_scan_samples", &out.domain_scan_samples},
  };
  if (!t.is_object()) fail("tolerances", "expected an object");
  for (const auto& [k, v] : t.items()) {
    if (auto it = reals.find(k); it != reals.end()) {
      *it->second = positive(t, "tolerances", k, 0);
    } else if (auto jt = ints.find(k); jt != ints.end()) {
      *jt->second = integer(t, "tolerances", k, 0);
      if (*jt->second < 1) fail("tolerances." + k, "must be positive");
    } else {
      fail("tolerances." + k, "unknown tolerance");
    }
  }
  return out;
}

Checks parse_checks(const Json& c) {
  only_keys(c, "checks", {"cmc_residual", "mean_curvature", "first_form", "isometry", "samples"});
  Checks out;
  out.cmc_residual = positive(c, "checks", "cmc_residual", out.cmc_residual);
  out.mean_curvature = positive(c, "checks", "mean_curvature", out.mean_curvature);
  out.first_form = positive(c, "checks", "first_form", out.first_form);
  out.isometry = positive(c, "checks", "isometry", out.isometry);
  out.samples = integer(c, "checks", "samples", out.samples);
  if (out.samples < 2) fail("checks.samples", "must be at least 2");
  return out;
}

OutputConfig parse_output(const Json& o) {
  only_keys(o, "output", {"stem", "formats"});
  OutputConfig out;
  if (o.contains("stem")) {
    if (!o["stem"].is_string() || o["stem"].get<std::string>().empty()) fail("output.stem", "non-empty string");
    out.stem = o["stem"].get<std::string>();
    if (out.stem.find('/') != std::string::npos) fail("output.stem", "must be a file name, not a path");
  }
  if (o.contains("formats")) {
    const Json& f = o["formats"];
    if (!f.is_array()) fail("output.formats", "expected an array");
    out.formats.clear();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string p = "output.formats[" + std::to_string(i) + "]";
      if (!f[i].is_string()) fail(p, "expected a string");
      const auto s = f[i].get<std::string>();
      if (s != "csv" && s != "obj" && s != "json") fail(p, "expected csv, obj or json");
      out.formats.push_back(s);
    }
  }
  return out;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::optional<Command> parse_command(std::string_view s) {
  for (const auto& [name, c] : kCommands) {
    if (name == s) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Command c) {
  for (const auto& [name, k] : kCommands) {
    if (k == c) return name;
  }
  return "?";
}

bool OutputConfig::wants(std::string_view f) const {
  for (const auto& x : formats) {
    if (x == f) return true;
  }
  return false;
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "': expected key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  Json* node = &doc;
  std::stringstream ss(key);
  std::string part, path;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError("override '" + key + "': empty path component");
    parts.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    path = join(path, parts[i]);
    if (!node->contains(parts[i])) (*node)[parts[i]] = Json::object();
    node = &(*node)[parts[i]];
    if (!node->is_object()) throw ConfigError("override '" + key + "': " + path + " is not an object");
  }
  (*node)[parts.back()] = std::move(value);
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string what = e.what();
    // drop the library's own "[json.exception.parse_error.101] parse error at ..." prefix
    if (auto p = what.find(": "); p != std::string::npos) what = what.substr(p + 2);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }
}

JobConfig parse_config(const Json& doc) {
  only_keys(doc, "", {"space", "mode", "seed", "sweep", "grid", "tolerances", "checks", "output"});
  JobConfig cfg;
  if (doc.contains("space")) {
    const Json& s = doc["space"];
    only_keys(s, "space", {"kappa", "tau"});
    cfg.space = bcv::BcvSpace(number(s, "space", "kappa", 0.0), number(s, "space", "tau", 0.0));
  }
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) fail("mode", "expected a string");
    cfg.mode = parse_command(doc["mode"].get<std::string>());
    if (!cfg.mode) fail("mode", "unknown command");
  }
  if (doc.contains("seed")) cfg.seed = parse_seed(doc["seed"]);
  if (doc.contains("sweep")) {
    const Json& s = doc["sweep"];
    only_keys(s, "sweep", {"parameter", "values"});
    if (s.contains("parameter") && s["parameter"] != "a") fail("sweep.parameter", "only \"a\" can be swept");
    if (!s.contains("values")) fail("sweep.values", "required");
    cfg.sweep = numbers(s["values"], "sweep.values");
    if (cfg.sweep.empty()) fail("sweep.values", "must not be empty");
  }
  if (doc.contains("grid")) cfg.grid = parse_grid(doc["grid"]);
  if (doc.contains("tolerances")) cfg.tolerances = parse_tolerances(doc["tolerances"]);
  if (doc.contains("checks")) cfg.checks = parse_checks(doc["checks"]);
  if (doc.contains("output")) cfg.output = parse_output(doc["output"]);
  if (!doc.contains("seed") && doc.contains("sweep")) fail("seed", "a sweep needs a seed");
  cfg.seed_given = doc.contains("seed");
  return cfg;
}

JobConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  Json doc;
  try {
    doc = parse_document(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

Json to_json(const JobConfig& cfg) {
  Json j;
  j["space"] = {{"kappa", cfg.space.kappa()}, {"tau", cfg.space.tau()}};
  if (cfg.seed_given) {
    const SeedConfig& s = cfg.seed;
    Json seed;
    seed["family"] = s.family == Family::CmcCase ? "cmc-case" : s.family == Family::MinimalCase ? "minimal-case" : "explicit";
    seed["m"] = s.m;
    seed["a"] = s.a;
    seed["H"] = s.H;
    seed["c"] = s.c;
    if (s.u_range) seed["u_range"] = {s.u_range->lo, s.u_range->hi};
    if (s.family == Family::Explicit) {
      Json p;
      p["kind"] = s.profile.kind;
      if (s.profile.kind == "polynomial") {
        p["coefficients"] = s.profile.coefficients;
      } else {
        p["alpha"] = s.profile.alpha;
        p["beta"] = s.profile.beta;
      }
      p["perturbation"] = s.profile.perturbation;
      seed["profile"] = p;
    }
    j["seed"] = seed;
  }
  if (!cfg.sweep.empty()) j["sweep"] = {{"parameter", "a"}, {"values", cfg.sweep}};
  j["grid"] = {{"nu", cfg.grid.nu},
               {"nt", cfg.grid.nt},
               {"t_range", {cfg.grid.t_range.lo, cfg.grid.t_range.hi}},
               {"parametrization", cfg.grid.raw ? "raw" : "natural"},
               {"margin", cfg.grid.margin}};
  const bcv::Tolerances& t = cfg.tolerances;
  j["tolerances"] = {{"quad_abs", t.quad_abs},
                     {"quad_rel", t.quad_rel},
                     {"quad_max_panels", t.quad_max_panels},
                     {"fd_first", t.fd_first},
                     {"fd_second", t.fd_second},
                     {"fd_min", t.fd_min},
                     {"christoffel_step", t.christoffel_step},
                     {"brioschi_step", t.brioschi_step},
                     {"min_scale", t.min_scale},
                     {"axis_r_min", t.axis_r_min},
                     {"radicand_eps", t.radicand_eps},
                     {"arclength_tol", t.arclength_tol},
                     {"case_eps", t.case_eps},
                     {"bisection_tol", t.bisection_tol},
                     {"domain_scan_samples", t.domain_scan_samples}};
  j["checks"] = {{"cmc_residual", cfg.checks.cmc_residual},
                 {"mean_curvature", cfg.checks.mean_curvature},
                 {"first_form", cfg.checks.first_form},
                 {"isometry", cfg.checks.isometry},
                 {"samples", cfg.checks.samples}};
  j["output"] = {{"stem", cfg.output.stem}, {"formats", cfg.output.formats}};
  return j;
}

}  // namespace bcvapp
