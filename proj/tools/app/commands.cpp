#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "bcvhelix/bour.hpp"
#include "bcvhelix/cmc.hpp"
#include "bcvhelix/errors.hpp"
#include "bcvhelix/oracle.hpp"
#include "bcvhelix/orbit_geometry.hpp"
#include "output.hpp"

namespace bcvapp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Seed {
  bcv::BourSeed bour;
  double H = 0.0;
  Json info;
};

std::string family_name(Family f) {
  switch (f) {
    case Family::CmcCase:
      return "cmc-case";
    case Family::MinimalCase:
      return "minimal-case";
    case Family::Explicit:
      return "explicit";
  }
  return "?";
}

bcv::MetricProfile explicit_profile(const ExplicitProfile& p) {
  const double eps = p.perturbation;
  if (p.kind == "polynomial") {
    const auto c = p.coefficients;
    return {[c, eps](double u) {
              double v = 0;
              for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
              return v + eps * u;
            },
            [c, eps](double u) {
              double v = 0;
              for (std::size_t k = c.size(); k-- > 1;) v = v * u + static_cast<double>(k) * c[k];
              return v + eps;
            },
            [c](double u) {
              double v = 0;
              for (std::size_t k = c.size(); k-- > 2;) v = v * u + static_cast<double>(k * (k - 1)) * c[k];
              return v;
            }};
  }
  const double al = p.alpha, be = p.beta;
  return {[al, be, eps](double u) { return std::sqrt(al * u * u + be) + eps * u; },
          [al, be, eps](double u) { return al * u / std::sqrt(al * u * u + be) + eps; },
          [al, be](double u) { return al * be / std::pow(al * u * u + be, 1.5); }};
}

Seed make_seed(const JobConfig& cfg) {
  if (!cfg.seed_given) throw ConfigError("seed: required for this command");
  const SeedConfig& s = cfg.seed;
  Seed out;
  out.info["family"] = family_name(s.family);
  switch (s.family) {
    case Family::CmcCase: {
      const auto fam = bcv::cmc_U(cfg.space, s.m, s.a, s.H, s.c, cfg.tolerances, s.u_range);
      out.bour = fam.seed;
      out.H = s.H;
      const auto& k = fam.constants;
      out.info["case"] = std::string(bcv::to_string(fam.which));
      Json cj = {{"b", k.b}, {"b1", k.b1}};
      if (k.has_b2) cj["b2"] = k.b2;
      cj["b3"] = k.b3;
      cj["c1"] = k.c1;
      cj["c2"] = k.c2;
      out.info["constants"] = cj;
      break;
    }
    case Family::MinimalCase: {
      const auto fam = bcv::minimal_U(cfg.space, s.m, s.a, s.c, cfg.tolerances, s.u_range);
      out.bour = fam.seed;
      out.info["case"] = std::string(bcv::to_string(fam.space_class));
      break;
    }
    case Family::Explicit:
      out.bour = {explicit_profile(s.profile), s.m, s.a, *s.u_range};
      out.H = s.H;
      break;
  }
  out.info["m"] = s.m;
  out.info["a"] = s.a;
  out.info["H"] = out.H;
  out.info["c"] = s.c;
  return out;
}

Json interval_json(bcv::Interval r) { return Json::array({r.lo, r.hi}); }

bcv::Interval shrink(bcv::Interval r, double margin) {
  const double d = margin * r.width();
  return {r.lo + d, r.hi - d};
}

std::vector<double> linspace(bcv::Interval r, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = r.lo + r.width() * i / (n - 1);
  v.back() = r.hi;
  return v;
}

Json check(const std::string& name, double value, double tol) {
  return {{"name", name}, {"value", value}, {"tolerance", tol}, {"passed", std::isfinite(value) && value <= tol}};
}

bool all_passed(const Json& checks) {
  for (const auto& c : checks) {
    if (!c["passed"].get<bool>()) return false;
  }
  return true;
}

// max |f(u)| over u; a throwing f counts as a failure (+inf).
template <class F>
double max_abs(const std::vector<double>& us, F f) {
  double worst = 0;
  for (double u : us) {
    try {
      const double r = std::abs(f(u));
      worst = std::isnan(r) ? std::numeric_limits<double>::infinity() : std::max(worst, r);
    } catch (const bcv::Error&) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

std::vector<double> row_residuals(const JobConfig& cfg, const Seed& seed, const std::vector<double>& us) {
  std::vector<double> out;
  for (double u : us) {
    try {
      out.push_back(bcv::cmc_residual(cfg.space, seed.bour, seed.H, u, cfg.tolerances));
    } catch (const bcv::Error&) {
      out.push_back(kNaN);
    }
  }
  return out;
}

bcv::SurfaceChart surface(const JobConfig& cfg, const bcv::NaturalChart& chart, bcv::Interval range) {
  if (cfg.grid.raw) {
    return bcv::SurfaceChart::helicoidal(chart.action(), chart.profile(range), cfg.grid.t_range, cfg.tolerances);
  }
  return bcv::SurfaceChart::natural(chart, range, cfg.grid.t_range, cfg.tolerances);
}

Json mesh_json(const bcv::MeshGrid& m) {
  return {{"nu", m.nu},
          {"nt", m.nt},
          {"vertices", m.vertices.size()},
          {"dropped_rows", m.dropped_rows},
          {"diagnostic_failures", m.diagnostic_failures}};
}

void write_mesh(OutputSet& out, const JobConfig& cfg, const std::string& stem, const bcv::MeshGrid& mesh,
                const std::vector<double>& residual, bcv::Interval range) {
  if (cfg.output.wants("csv")) out.write(stem + ".csv", mesh_csv(mesh, residual));
  if (cfg.output.wants("obj")) out.write(stem + ".obj", mesh_obj(mesh, range));
}

// Shortest round-trip text of x, for file names.
std::string short_real(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

// Sign taking the chart normal to the orientation the reduced mean
// curvature formula uses, fixed at the chart's reference point.
double orientation_match(const bcv::NaturalChart& chart, const bcv::SurfaceChart& s) {
  const double u = s.u_range().midpoint();
  const double sg = std::sin(bcv::sigma_angle(chart.action(), chart.profile(s.u_range()), u, chart.tolerances()));
  return sg > 0 ? -1.0 : 1.0;
}

void cmd_classify(const JobConfig& cfg, Json& rep) {
  const bcv::BcvSpace& sp = cfg.space;
  rep["class"] = std::string(bcv::to_string(bcv::classify(sp, cfg.tolerances.case_eps)));
  rep["radius_bound"] = sp.kappa() < 0 ? Json(2 / std::sqrt(-sp.kappa())) : Json(nullptr);
  // frame orthonormality on a fixed set of points inside the metric domain
  const double rmax = sp.kappa() < 0 ? 1.8 / std::sqrt(-sp.kappa()) : 2.0;
  double worst = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double r = rmax * i / 4, th = 1.3 * j, z = 0.7 * j - 1.0;
      const bcv::AmbientPoint p{r * std::cos(th), r * std::sin(th), z};
      const auto e = bcv::orthonormal_frame(sp, p, cfg.tolerances.min_scale);
      const bcv::Mat3 g = bcv::metric_cartesian(sp, p, cfg.tolerances.min_scale);
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) worst = std::max(worst, std::abs(e[a].dot(g * e[b]) - (a == b ? 1.0 : 0.0)));
      }
    }
  }
  rep["checks"].push_back(check("frame_orthonormality", worst, 1e-12));
}

void cmd_chart(const JobConfig& cfg, OutputSet& out, Json& rep) {
  const Seed seed = make_seed(cfg);
  rep["seed"] = seed.info;
  const auto chart = bcv::build_chart(cfg.space, seed.bour, cfg.tolerances);
  rep["domain"] = interval_json(chart.domain());
  rep["u0"] = chart.u0();
  const auto range = shrink(chart.domain(), cfg.grid.margin);
  rep["sampled_u_range"] = interval_json(range);
  const auto us = linspace(range, cfg.grid.nu);
  const auto rows = chart.tabulate(us);
  const auto curve = chart.profile(range);
  const auto act = chart.action();
  rep["checks"].push_back(check("arclength_residual", max_abs(us, [&](double u) {
                                  return bcv::arclength_residual(act, curve, u, cfg.tolerances);
                                }),
                                cfg.tolerances.arclength_tol));
  if (cfg.output.wants("csv")) out.write(cfg.output.stem + "_profile.csv", profile_csv(rows));
}

void cmd_family(const JobConfig& cfg, bool minimal, OutputSet& out, Json& rep) {
  const Family need = minimal ? Family::MinimalCase : Family::CmcCase;
  if (!cfg.seed_given || cfg.seed.family != need) {
    throw ConfigError("seed.family: this command needs a " + family_name(need) + " seed");
  }
  const Seed seed = make_seed(cfg);
  rep["seed"] = seed.info;
  rep["domain"] = interval_json(seed.bour.u_domain);
  const auto range = shrink(seed.bour.u_domain, cfg.grid.margin);
  rep["sampled_u_range"] = interval_json(range);
  const auto us = linspace(range, cfg.checks.samples);
  const auto& tol = cfg.tolerances;
  const double c = cfg.seed.c;
  rep["checks"].push_back(check("cmc_residual", max_abs(us, [&](double u) {
                                  return bcv::cmc_residual(cfg.space, seed.bour, seed.H, u, tol);
                                }),
                                cfg.checks.cmc_residual));
  rep["checks"].push_back(check("first_integral", max_abs(us, [&](double u) {
                                  return bcv::first_integral_check(cfg.space, seed.bour, seed.H, c, u, tol);
                                }),
                                cfg.checks.cmc_residual));
  if (cfg.output.wants("csv")) {
    const auto chart = bcv::build_chart(cfg.space, seed.bour, tol);
    const auto r = shrink(chart.domain(), cfg.grid.margin);
    out.write(cfg.output.stem + "_profile.csv", profile_csv(chart.tabulate(linspace(r, cfg.grid.nu))));
  }
}

void cmd_verify(const JobConfig& cfg, OutputSet& out, Json& rep) {
  const Seed seed = make_seed(cfg);
  rep["seed"] = seed.info;
  const auto& tol = cfg.tolerances;
  const auto chart = bcv::build_chart(cfg.space, seed.bour, tol);
  rep["domain"] = interval_json(chart.domain());
  const auto range = shrink(chart.domain(), cfg.grid.margin);
  rep["sampled_u_range"] = interval_json(range);

  const auto us = linspace(range, cfg.checks.samples);
  rep["checks"].push_back(check("cmc_residual", max_abs(us, [&](double u) {
                                  return bcv::cmc_residual(cfg.space, seed.bour, seed.H, u, tol);
                                }),
                                cfg.checks.cmc_residual));

  // the oracle always works in natural coordinates here
  const auto s = bcv::SurfaceChart::natural(chart, range, cfg.grid.t_range, tol);
  const auto mesh = bcv::sample_mesh(s, cfg.grid.nu, cfg.grid.nt);
  rep["mesh"] = mesh_json(mesh);
  const double eps = orientation_match(chart, s);
  rep["orientation"] = eps;
  double h_dev = 0;
  for (double h : mesh.H_ext) h_dev = std::max(h_dev, std::abs(eps * h - seed.H));
  if (mesh.diagnostic_failures > 0 || mesh.dropped_rows > 0) h_dev = std::numeric_limits<double>::infinity();
  rep["max_abs_H_ext"] = [&] {
    double w = 0;
    for (double h : mesh.H_ext) w = std::max(w, std::abs(h));
    return w;
  }();
  rep["checks"].push_back(check("mean_curvature", h_dev, cfg.checks.mean_curvature));

  double ff = 0;
  for (double u : mesh.u) {
    const double U = seed.bour.U(u);
    for (double t : mesh.t) {
      try {
        const auto I = bcv::first_form_numeric(s, u, t);
        ff = std::max({ff, std::abs(I.E - 1), std::abs(I.F), std::abs(I.G - U * U)});
      } catch (const bcv::Error&) {
        ff = std::numeric_limits<double>::infinity();
      }
    }
  }
  rep["checks"].push_back(check("first_form", ff, cfg.checks.first_form));

  if (cfg.output.wants("csv") || cfg.output.wants("obj")) {
    const auto ms = cfg.grid.raw ? bcv::sample_mesh(surface(cfg, chart, range), cfg.grid.nu, cfg.grid.nt) : mesh;
    write_mesh(out, cfg, cfg.output.stem, ms, row_residuals(cfg, seed, ms.u), range);
  }
}

void cmd_export(const JobConfig& cfg, OutputSet& out, Json& rep) {
  const Seed seed = make_seed(cfg);
  rep["seed"] = seed.info;
  const auto chart = bcv::build_chart(cfg.space, seed.bour, cfg.tolerances);
  rep["domain"] = interval_json(chart.domain());
  const auto range = shrink(chart.domain(), cfg.grid.margin);
  rep["sampled_u_range"] = interval_json(range);
  const auto mesh = bcv::sample_mesh(surface(cfg, chart, range), cfg.grid.nu, cfg.grid.nt);
  rep["mesh"] = mesh_json(mesh);
  write_mesh(out, cfg, cfg.output.stem, mesh, row_residuals(cfg, seed, mesh.u), range);
  if (cfg.output.wants("csv")) {
    out.write(cfg.output.stem + "_profile.csv", profile_csv(chart.tabulate(linspace(range, cfg.grid.nu))));
  }
}

void cmd_deform(const JobConfig& cfg, OutputSet& out, Json& rep) {
  if (cfg.sweep.empty()) throw ConfigError("sweep.values: required for deform");
  const Seed seed = make_seed(cfg);
  rep["seed"] = seed.info;
  const auto& tol = cfg.tolerances;

  struct Frame {
    double a;
    std::optional<bcv::NaturalChart> chart;
  };
  std::vector<Frame> frames;
  Json frame_rep = Json::array();
  bool frames_ok = true;
  std::optional<bcv::Interval> common;
  for (double a : cfg.sweep) {
    bcv::BourSeed b = seed.bour;
    b.pitch = a;
    Json f = {{"a", a}};
    try {
      frames.push_back({a, bcv::build_chart(cfg.space, b, tol)});
      const auto d = frames.back().chart->domain();
      f["domain"] = interval_json(d);
      common = common ? bcv::Interval{std::max(common->lo, d.lo), std::min(common->hi, d.hi)} : d;
    } catch (const bcv::Error& e) {
      frames.push_back({a, std::nullopt});
      f["error"] = e.what();
      frames_ok = false;
    }
    frame_rep.push_back(f);
  }
  if (!common || !(common->lo < common->hi)) {
    rep["frames"] = frame_rep;
    rep["checks"].push_back(check("frames", std::numeric_limits<double>::infinity(), 0));
    return;
  }
  const auto range = shrink(*common, cfg.grid.margin);
  rep["common_u_range"] = interval_json(range);

  std::vector<std::optional<bcv::SurfaceChart>> surfaces;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    surfaces.emplace_back();
    if (!frames[i].chart) continue;
    try {
      const auto mesh = bcv::sample_mesh(surface(cfg, *frames[i].chart, range), cfg.grid.nu, cfg.grid.nt);
      frame_rep[i]["mesh"] = mesh_json(mesh);
      bcv::BourSeed b = seed.bour;
      b.pitch = frames[i].a;
      const Seed fs{b, seed.H, {}};
      write_mesh(out, cfg, cfg.output.stem + "_a" + short_real(frames[i].a), mesh, row_residuals(cfg, fs, mesh.u),
                 range);
      surfaces.back() = bcv::SurfaceChart::natural(*frames[i].chart, range, cfg.grid.t_range, tol);
    } catch (const bcv::Error& e) {
      frame_rep[i]["error"] = e.what();
      frames_ok = false;
    }
  }
  rep["frames"] = frame_rep;

  const auto us = linspace(range, std::min(cfg.grid.nu, 21));
  const auto ts = linspace(cfg.grid.t_range, std::min(cfg.grid.nt, 9));
  const std::size_t n = frames.size();
  Json matrix = Json::array();
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < n; ++j) {
      if (!surfaces[i] || !surfaces[j]) {
        row.push_back(nullptr);
        continue;
      }
      double d = 0;
      if (i != j) {
        try {
          d = bcv::isometry_deviation(*surfaces[i], *surfaces[j], us, ts);
        } catch (const bcv::Error&) {
          d = std::numeric_limits<double>::infinity();
        }
      }
      worst = std::max(worst, d);
      row.push_back(std::isfinite(d) ? Json(d) : Json(nullptr));
    }
    matrix.push_back(row);
  }
  rep["isometry_deviation"] = matrix;
  rep["checks"].push_back(check("frames", frames_ok ? 0.0 : std::numeric_limits<double>::infinity(), 0));
  rep["checks"].push_back(check("isometry", worst, cfg.checks.isometry));
}

}  // namespace

RunResult run(Command cmd, const JobConfig& cfg, const std::filesystem::path& out_dir) {
  if (cfg.mode && *cfg.mode != cmd) {
    throw ConfigError("mode: config is for '" + std::string(to_string(*cfg.mode)) + "', command is '" +
                      std::string(to_string(cmd)) + "'");
  }
  OutputSet out(out_dir);
  RunResult res;
  Json& rep = res.report;
  rep["command"] = std::string(to_string(cmd));
  rep["config"] = to_json(cfg);
  rep["checks"] = Json::array();
  try {
    switch (cmd) {
      case Command::Classify:
        cmd_classify(cfg, rep);
        break;
      case Command::Chart:
        cmd_chart(cfg, out, rep);
        break;
      case Command::Cmc:
        cmd_family(cfg, false, out, rep);
        break;
      case Command::Minimal:
        cmd_family(cfg, true, out, rep);
        break;
      case Command::Deform:
        cmd_deform(cfg, out, rep);
        break;
      case Command::Verify:
        cmd_verify(cfg, out, rep);
        break;
      case Command::Export:
        cmd_export(cfg, out, rep);
        break;
    }
    res.passed = all_passed(rep["checks"]);
    rep["files"] = out.written();
    rep["passed"] = res.passed;
    if (cfg.output.wants("json")) out.write(cfg.output.stem + "_report.json", json_text(rep));
  } catch (...) {
    out.rollback();
    throw;
  }
  res.files = out.written();
  return res;
}

}  // namespace bcvapp
