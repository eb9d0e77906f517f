#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/output.hpp"
#include "bcvhelix/errors.hpp"
#include "doctest.h"

using namespace bcvapp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bcvhelix_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_real(const std::string& s) {
  double x = 0;
  std::from_chars(s.data(), s.data() + s.size(), x);
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

JobConfig config(const char* text) { return parse_config(parse_document(text)); }

const char* kNilMinimal = R"({
  "space": {"kappa": 0, "tau": 0.5},
  "seed": {"family": "minimal-case", "m": 1, "a": 0.5, "c": 1, "u_range": [-3, 3]},
  "grid": {"nu": 21, "nt": 21},
  "output": {"stem": "nil", "formats": ["json", "csv", "obj"]}
})";

const char* kHelicoid = R"({
  "seed": {"family": "explicit", "m": 1, "a": 1, "u_range": [0.2, 2],
           "profile": {"kind": "sqrt-quadratic"}},
  "grid": {"nu": 2, "nt": 2, "t_range": [0, 1], "margin": 0},
  "output": {"stem": "hel", "formats": ["csv", "obj", "json"]}
})";

}  // namespace

TEST_CASE("real formatting: 17 significant digits, exact round trip") {
  CHECK(format_real(1.0) == "1.0000000000000000e+00");
  CHECK(format_real(-0.125) == "-1.2500000000000000e-01");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(-INFINITY) == "-inf");
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20000; ++i) {
    const double x = std::bit_cast<double>(rng());
    if (!std::isfinite(x)) continue;
    const std::string s = format_real(x);
    CHECK(std::bit_cast<std::uint64_t>(parse_real(s)) == std::bit_cast<std::uint64_t>(x));
    const auto mant = s.substr(0, s.find('e'));
    int digits = 0;
    for (char ch : mant) digits += std::isdigit(static_cast<unsigned char>(ch)) != 0;
    CHECK(digits == 17);
  }
}

TEST_CASE("mesh CSV and OBJ layout") {
  bcv::MeshGrid m;
  m.nu = 3;
  m.nt = 2;
  m.u = {0.0, 1.0, 2.0};
  m.t = {0.0, 0.5};
  for (int i = 0; i < 6; ++i) {
    m.vertices.push_back({0.1 * i, 1.0 / (i + 3), -i * 1e-9});
    m.H_ext.push_back(i == 4 ? std::nan("") : 1e-7 * i);
    m.K.push_back(-1.0 / 3 * i);
  }
  const std::string csv = mesh_csv(m, {1e-17, 2.5, -3.0});
  const auto lines = split(csv, '\n');
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "u,t,x,y,z,H_ext,K,cmc_residual");
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.back() == '\n');
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto f = split(lines[k], ',');
    REQUIRE(f.size() == 8);
    const std::size_t v = k - 1;
    CHECK(parse_real(f[2]) == m.vertices[v].x());
    CHECK(parse_real(f[3]) == m.vertices[v].y());
    CHECK(parse_real(f[4]) == m.vertices[v].z());
    if (v != 4) CHECK(parse_real(f[5]) == m.H_ext[v]);
    CHECK(parse_real(f[6]) == m.K[v]);
  }
  CHECK(split(lines[5], ',')[5] == "nan");

  const std::string obj = mesh_obj(m, {0.0, 2.0});
  const auto ol = split(obj, '\n');
  int nv = 0, nf = 0;
  for (const auto& l : ol) {
    nv += l.rfind("v ", 0) == 0;
    nf += l.rfind("f ", 0) == 0;
  }
  CHECK(nv == 6);
  CHECK(nf == 4);
  CHECK(ol[6] == "f 1 2 4");
  CHECK(ol[7] == "f 1 4 3");

  // a dropped middle row leaves a gap, not a bridge
  bcv::MeshGrid g = m;
  g.u = {0.0, 2.0};
  g.vertices.resize(4);
  g.H_ext.resize(4);
  g.K.resize(4);
  g.dropped_rows = 1;
  CHECK(mesh_obj(g, {0.0, 2.0}).find("f ") == std::string::npos);
}

TEST_CASE("profile CSV") {
  const std::string s = profile_csv({{0.5, 1.0, 2.0, -3.0, 4.0}});
  CHECK(s ==
        "u,xi1,xi2,theta0,U\n5.0000000000000000e-01,1.0000000000000000e+00,2.0000000000000000e+00,"
        "-3.0000000000000000e+00,4.0000000000000000e+00\n");
}

TEST_CASE("config parsing and diagnostics") {
  const JobConfig c = config(kNilMinimal);
  CHECK(c.space.tau() == 0.5);
  CHECK(c.seed.family == Family::MinimalCase);
  CHECK(c.seed.u_range->hi == 3);
  CHECK(c.output.wants("obj"));
  CHECK_FALSE(config("{}").output.wants("csv"));

  auto message = [](const char* text) {
    try {
      config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"seed": {"family": "cmc-case", "m": 0}})").rfind("seed.m:", 0) == 0);
  CHECK(message(R"({"sed": {}})").rfind("sed:", 0) == 0);
  CHECK(message(R"({"output": {"formats": ["csv", "png"]}})").rfind("output.formats[1]:", 0) == 0);
  CHECK(message(R"({"grid": {"nu": 1}})").rfind("grid.nu:", 0) == 0);
  CHECK(message(R"({"seed": {"family": "explicit", "m": 1}})").rfind("seed.u_range:", 0) == 0);
  CHECK(message(R"({"tolerances": {"quad_abs": -1}})").rfind("tolerances.quad_abs:", 0) == 0);
  CHECK(message(R"({"tolerances": {"quad_absolute": 1}})").rfind("tolerances.quad_absolute:", 0) == 0);
  CHECK(message(R"({"sweep": {"parameter": "m", "values": [1]}})").rfind("sweep.parameter:", 0) == 0);

  try {
    parse_document("{\n  \"space\": {\"kappa\": 0,,\n}");
    FAIL("expected a syntax error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("line 2, column", 0) == 0);
  }
}

TEST_CASE("overrides") {
  Json doc = parse_document(kNilMinimal);
  apply_override(doc, "seed.a=0.25");
  apply_override(doc, "grid.t_range=[0,1]");
  apply_override(doc, "output.stem=frame");
  apply_override(doc, "tolerances.quad_abs=1e-12");
  const JobConfig c = parse_config(doc);
  CHECK(c.seed.a == 0.25);
  CHECK(c.grid.t_range.hi == 1);
  CHECK(c.output.stem == "frame");
  CHECK(c.tolerances.quad_abs == 1e-12);
  CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "seed.a.b=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "a..b=1"), ConfigError);
}

TEST_CASE("verify verdicts") {
  const auto dir = scratch("verify");
  auto nil = run(Command::Verify, config(kNilMinimal), dir);
  CHECK(nil.passed);
  CHECK(nil.report["max_abs_H_ext"].get<double>() < 1e-4);

  const auto unduloid = config(R"({"seed": {"family": "cmc-case", "m": 1, "a": 0, "H": 1, "c": 0},
                                  "grid": {"nu": 15, "nt": 15}})");
  CHECK(run(Command::Verify, unduloid, dir).passed);

  const auto perturbed = config(R"({"seed": {"family": "explicit", "m": 1, "u_range": [-2, 2],
      "profile": {"kind": "sqrt-quadratic", "perturbation": 0.01}}, "grid": {"nu": 9, "nt": 9}})");
  const auto bad = run(Command::Verify, perturbed, dir);
  CHECK_FALSE(bad.passed);
  CHECK(bad.report["checks"][0]["name"] == "cmc_residual");
  CHECK(bad.report["checks"][0]["value"].get<double>() > 1e-3);
  fs::remove_all(dir);
}

TEST_CASE("deform") {
  const auto dir = scratch("deform");
  const auto single = config(R"({"space": {"kappa": 0, "tau": 0.5},
      "seed": {"family": "explicit", "m": 1, "u_range": [-3, 3], "profile": {"kind": "polynomial", "coefficients": [1, 0, 0.5]}},
      "sweep": {"values": [0.5]}, "grid": {"nu": 9, "nt": 9}, "output": {"formats": ["obj"]}})");
  const auto one = run(Command::Deform, single, dir);
  CHECK(one.passed);
  CHECK(one.report["isometry_deviation"] == Json::parse("[[0.0]]"));
  CHECK(one.files == std::vector<std::string>{"surface_a0.5.obj"});

  const auto sweep = config(R"({"seed": {"family": "explicit", "m": 1, "u_range": [0.1, 2], "profile": {"kind": "sqrt-quadratic"}},
      "sweep": {"values": [0, 0.5, 1]}, "grid": {"nu": 11, "nt": 11}, "output": {"formats": ["csv"]}})");
  const auto three = run(Command::Deform, sweep, dir);
  CHECK(three.passed);
  CHECK(three.files.size() == 3);
  for (const auto& row : three.report["isometry_deviation"]) {
    for (const auto& d : row) CHECK(d.get<double>() < 1e-6);
  }

  // a frame outside the seed's validity is reported, the others still written
  const auto partly = config(R"({"seed": {"family": "explicit", "m": 1, "u_range": [0.1, 2], "profile": {"kind": "sqrt-quadratic"}},
      "sweep": {"values": [0, 5]}, "grid": {"nu": 5, "nt": 5}, "output": {"stem": "p", "formats": ["csv"]}})");
  const auto p = run(Command::Deform, partly, dir);
  CHECK_FALSE(p.passed);
  CHECK(p.files == std::vector<std::string>{"p_a0.csv"});
  CHECK(p.report["frames"][1].contains("error"));
  fs::remove_all(dir);
}

TEST_CASE("export: helicoid corners and byte-identical reruns") {
  const auto a = scratch("export_a"), b = scratch("export_b");
  const auto cfg = config(kHelicoid);
  const auto r1 = run(Command::Export, cfg, a);
  run(Command::Export, cfg, b);
  CHECK(r1.files == std::vector<std::string>{"hel.csv", "hel.obj", "hel_profile.csv", "hel_report.json"});
  for (const auto& f : r1.files) CHECK(slurp(a / f) == slurp(b / f));
  const std::string obj = slurp(a / "hel.obj");
  CHECK(std::count(obj.begin(), obj.end(), 'v') == 4);
  CHECK(split(obj, '\n').size() == 6);

  // the corners of [0.2, 2] x [0, 1] on the helicoid (u cos t, u sin t, t)
  const auto lines = split(slurp(a / "hel.csv"), '\n');
  REQUIRE(lines.size() == 5);
  for (std::size_t k = 1; k < 5; ++k) {
    const auto f = split(lines[k], ',');
    const double u = parse_real(f[0]), t = parse_real(f[1]);
    CHECK(std::abs(parse_real(f[2]) - u * std::cos(t)) < 1e-12);
    CHECK(std::abs(parse_real(f[3]) - u * std::sin(t)) < 1e-12);
    CHECK(std::abs(parse_real(f[4]) - t) < 1e-12);
  }

  const auto verify_a = scratch("verify_a"), verify_b = scratch("verify_b");
  const auto v = config(kNilMinimal);
  const auto v1 = run(Command::Verify, v, verify_a);
  run(Command::Verify, v, verify_b);
  for (const auto& f : v1.files) CHECK(slurp(verify_a / f) == slurp(verify_b / f));
  for (const auto& d : {a, b, verify_a, verify_b}) fs::remove_all(d);
}

TEST_CASE("failures leave no files behind") {
  const auto dir = scratch("rollback");
  fs::create_directories(dir / "hel_report.json");  // the last write cannot be renamed into place
  try {
    run(Command::Export, config(kHelicoid), dir);
    FAIL("expected an I/O error");
  } catch (const bcv::Error& e) {
    CHECK(e.code() == bcv::ErrorCode::IoError);
  }
  std::vector<std::string> left;
  for (const auto& e : fs::directory_iterator(dir)) left.push_back(e.path().filename().string());
  CHECK(left == std::vector<std::string>{"hel_report.json"});
  fs::remove_all(dir);

  const auto d2 = scratch("rollback2");
  CHECK_THROWS_AS(run(Command::Cmc, config(R"({"seed": {"family": "explicit", "m": 1, "u_range": [0, 1],
      "profile": {"kind": "polynomial", "coefficients": [1]}}})"), d2), ConfigError);
  CHECK_THROWS_AS(run(Command::Verify, config(R"({"mode": "export"})"), d2), ConfigError);
  fs::remove_all(d2);
}

TEST_CASE("classify and chart reports") {
  const auto dir = scratch("classify");
  const auto r = run(Command::Classify, config(R"({"space": {"kappa": -1, "tau": 0.5}})"), dir);
  CHECK(r.passed);
  CHECK(r.report["class"] == "SL2R-cover");
  CHECK(r.report["radius_bound"].get<double>() == 2.0);

  const auto c = run(Command::Chart, config(R"({"space": {"kappa": 0, "tau": 0.5},
      "seed": {"family": "explicit", "m": 1, "a": 0.5, "u_range": [-3, 3], "profile": {"kind": "polynomial", "coefficients": [1, 0, 0.5]}},
      "grid": {"nu": 13, "margin": 0}, "output": {"formats": ["csv"]}})"), dir);
  CHECK(c.passed);
  const auto lines = split(slurp(dir / "surface_profile.csv"), '\n');
  REQUIRE(lines.size() == 14);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto f = split(lines[k], ',');
    const double u = parse_real(f[0]);
    CHECK(std::abs(parse_real(f[1]) - std::sqrt(u * u + 1)) < 1e-8);
    CHECK(std::abs(parse_real(f[2]) - (u + std::atan(u)) / 2) < 1e-8);
    CHECK(std::abs(parse_real(f[3]) - (-std::atan(u) + std::sqrt(2.0) * std::atan(u / std::sqrt(2.0)))) < 1e-8);
    CHECK(std::abs(parse_real(f[4]) - (u * u + 2) / 2) < 1e-8);
  }
  fs::remove_all(dir);
}
