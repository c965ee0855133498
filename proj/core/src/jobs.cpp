#include "cgholo/jobs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cgholo/asym.hpp"
#include "cgholo/energy.hpp"
#include "cgholo/error.hpp"
#include "cgholo/hmap.hpp"

namespace cgholo {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

struct SampleRow {
  std::string job, series;
  double param, value;
};

struct PlotSeries {
  std::string job, name;
  std::vector<std::pair<double, double>> points;  // log-log for decay plots
};

struct RunState {
  std::vector<Claim> claims;
  std::vector<SampleRow> samples;
  std::vector<PlotSeries> plots;
};

// ---- setup from config ---------------------------------------------------

Signature parse_signature(const std::string& s, int n) {
  Signature sig{0, 0};
  for (char c : s) {
    if (c == '+') ++sig.p;
    else if (c == '-') ++sig.q;
    else throw ConfigError("signature must be a string of + and - characters");
  }
  if (sig.p + sig.q != n) throw ConfigError("signature length does not match dimension");
  return sig;
}

std::shared_ptr<const ChartMetric> build_chart(const Config& cfg,
                                               const std::vector<Vec>& override_samples) {
  const ConfigSection* ms = cfg.find("metric");
  if (!ms) throw ConfigError("config needs a [metric] section");
  int n = ms->get_int("dimension", 2);

  ChartMetric chart = [&]() {
    if (auto builtin = ms->get("builtin")) {
      if (*builtin == "euclidean") return ChartMetric::euclidean(n);
      if (*builtin == "minkowski") return ChartMetric::minkowski(n);
      if (*builtin == "hyperbolic_half_plane") return ChartMetric::hyperbolic_half_plane();
      if (*builtin == "sphere") return ChartMetric::round_sphere_polar(n);
      throw ConfigError("unknown builtin metric '" + *builtin + "'");
    }
    Signature sig{n, 0};
    if (ms->has("signature")) sig = parse_signature(ms->require("signature"), n);
    std::vector<std::string> comps;
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        comps.push_back(ms->require("g" + std::to_string(i) + std::to_string(j)));
    return ChartMetric::from_strings(n, comps, sig);
  }();

  if (ms->has("p11")) {
    if (n != 2) throw ConfigError("Schouten override keys apply to dimension 2 only");
    std::vector<Expr> P;
    std::vector<std::string> vars = chart.vars();
    for (const char* key : {"p11", "p12", "p22"}) P.push_back(Expr::parse(ms->require(key), vars));
    chart = schouten_override(chart, P, override_samples);
  }
  return std::make_shared<const ChartMetric>(std::move(chart));
}

struct CurveSetup {
  std::shared_ptr<const ExprCurve> curve;
  double t_lo = 0.0, t_hi = 1.0;
  int samples = 9;
  std::vector<double> sample_ts() const {
    std::vector<double> ts;
    for (int i = 0; i < samples; ++i)
      ts.push_back(t_lo + (t_hi - t_lo) * (i + 0.5) / samples);
    return ts;
  }
};

CurveSetup build_curve(const Config& cfg, int n) {
  const ConfigSection* cs = cfg.find("curve");
  if (!cs) throw ConfigError("config needs a [curve] section");
  CurveSetup out;
  std::vector<std::string> comps;
  for (int i = 1; i <= n; ++i) comps.push_back(cs->require("c" + std::to_string(i)));
  out.curve = std::make_shared<const ExprCurve>(ExprCurve::from_strings(comps));
  auto dom = cs->get_doubles("domain");
  if (dom.size() != 2 || dom[0] >= dom[1])
    throw ConfigError("[curve] domain must be two increasing numbers");
  out.t_lo = dom[0];
  out.t_hi = dom[1];
  out.samples = cs->get_int("samples", 9);
  if (out.samples < 1) throw ConfigError("[curve] samples must be positive");
  return out;
}

int domain_sign_from(const Config& cfg) {
  const ConfigSection* ds = cfg.find("domain");
  if (!ds) return 1;
  std::string type = ds->require("type");
  if (type == "H2") return 1;
  if (type == "AdS2") return -1;
  throw ConfigError("[domain] type must be H2 or AdS2");
}

CoefficientOverrides overrides_from(const ConfigSection& job, int n) {
  CoefficientOverrides ov;
  ov.x1_shift = job.get_double("x1_shift", 0.0);
  ov.x2 = job.get_double("x2", 0.0);
  ov.x3_shift = job.get_double("x3_shift", 0.0);
  ov.v0 = job.get_double("v0", 0.0);
  auto vec_key = [&](const char* key) -> std::optional<Vec> {
    if (!job.has(key)) return std::nullopt;
    auto vals = job.get_doubles(key);
    if (static_cast<int>(vals.size()) != n)
      throw ConfigError(std::string("key '") + key + "' needs " + std::to_string(n) +
                        " numbers");
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = vals[i];
    return v;
  };
  ov.y2_shift = vec_key("y2_shift");
  ov.y3 = vec_key("y3");
  ov.v = vec_key("v");
  return ov;
}

// ---- jobs -----------------------------------------------------------------

void job_curvature(const ConfigSection& job, const std::string& label,
                   const std::shared_ptr<const ChartMetric>& chart, const CurveSetup& cs,
                   const RunOptions& opts, RunState& st) {
  int count = job.get_int("points", 20);
  double tol = job.get_double("trace_tol", 1e-8);
  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> dist(cs.t_lo, cs.t_hi);
  double max_rel = 0.0;
  int n = chart->dim();
  for (int i = 0; i < count; ++i) {
    double t = dist(rng);
    Vec y = cs.curve->jets(t).gamma;
    CurvaturePoint cp = curvature_at(*chart, y);
    double trP = (cp.g_inv * cp.schouten).trace();
    double want = cp.scalar / (2.0 * (n - 1));
    double rel = std::abs(trP - want) / std::max(1.0, std::abs(want));
    max_rel = std::max(max_rel, rel);
    st.samples.push_back({label, "scalar_curvature", t, cp.scalar});
  }
  st.claims.push_back(
      {label, "trace_identity", "schouten-trace-identity", max_rel, tol, max_rel < tol});
}

void job_geodesic(const ConfigSection& job, const std::string& label,
                  const std::shared_ptr<const ChartMetric>& chart, const CurveSetup& cs,
                  const RunOptions&, RunState& st) {
  double t_start = job.get_double("t_start", 0.5 * (cs.t_lo + cs.t_hi));
  double tol = job.get_double("tol", 1e-10);
  double dev_tol = job.get_double("deviation_tol", 1e-8);
  double res_tol = job.get_double("residual_tol", 1e-8);

  CurveJets j0 = cs.curve->jets(t_start);
  CGState s0;
  s0.t = t_start;
  s0.gamma = j0.gamma;
  s0.v = j0.d1;
  s0.a = alpha_from_curve(*chart, j0, t_start);

  double max_dev = 0.0, max_res = 0.0;
  for (double t_final : {cs.t_hi, cs.t_lo}) {
    if (t_final == t_start) continue;
    Trajectory traj = integrate_cg(chart, s0, t_final, tol);
    for (double t : cs.sample_ts()) {
      bool inside = (t_final > t_start) ? (t >= t_start && t <= t_final)
                                        : (t <= t_start && t >= t_final);
      if (!inside) continue;
      CGState s = traj.state_at(t);
      double dev = (s.gamma - cs.curve->jets(t).gamma).norm();
      max_dev = std::max(max_dev, dev);
      double res = cg_residual_third_order(*chart, traj.jets(t), t).norm();
      max_res = std::max(max_res, res);
      st.samples.push_back({label, "deviation", t, dev});
    }
  }
  st.claims.push_back({label, "trajectory_matches_curve", "cg-system-closed-form", max_dev,
                       dev_tol, max_dev < dev_tol});
  st.claims.push_back({label, "residual_along_trajectory", "cg-third-order-residual", max_res,
                       res_tol, max_res < res_tol});
}

void job_verify(const ConfigSection& job, const std::string& label,
                const std::shared_ptr<const ChartMetric>& chart,
                const AmbientMetric& ambient, const CurveSetup& cs, int sign,
                const RunOptions& opts, RunState& st) {
  int k_min = job.get_int("ladder_min", 3);
  int k_max = job.get_int("ladder_max", opts.ladder_max_k);
  double noise_floor = job.get_double("noise_floor", 1e-12);
  double zero_tol = job.get_double("zero_tol", 1e-12);
  double tension_min = job.get_double("tension_slope", 3.5);
  double sff_min = job.get_double("sff_slope", 1.5);
  double pullback_min = job.get_double("pullback_slope", 0.5);
  double r2_min = job.get_double("r2_min", 0.999);

  CoefficientOverrides ov = overrides_from(job, chart->dim());
  ExpansionMap map(cs.curve, chart, sign, ov);

  std::vector<double> ts = cs.sample_ts();
  std::vector<std::pair<double, double>> tau_s, sff_s, pull_s;
  for (int k = k_min; k <= k_max; ++k) {
    double s = std::pow(2.0, -k);
    double mt = 0.0, ms = 0.0, mp = 0.0;
    for (double t : ts) {
      mt = std::max(mt, tension(map, ambient, s, t).cwiseAbs().maxCoeff());
      SffComponents f = second_fundamental_form(map, ambient, s, t);
      ms = std::max({ms, f.ss.cwiseAbs().maxCoeff(), f.tt.cwiseAbs().maxCoeff(),
                     f.st.cwiseAbs().maxCoeff()});
      PullbackComponents p = pullback(map, ambient, s, t);
      mp = std::max({mp, std::abs(p.ss), std::abs(p.st), std::abs(p.tt)});
    }
    tau_s.push_back({s, mt});
    sff_s.push_back({s, ms});
    pull_s.push_back({s, mp});
    st.samples.push_back({label, "tension_max", s, mt});
    st.samples.push_back({label, "sff_max", s, ms});
    st.samples.push_back({label, "pullback_max", s, mp});
  }

  auto slope_claim = [&](const std::vector<std::pair<double, double>>& series,
                         const std::string& base, const std::string& anchor, double slope_min) {
    OrderFit fit = estimate_order(series, noise_floor);
    if (fit.all_at_noise_floor) {
      double mx = 0.0;
      for (const auto& [s, v] : series) mx = std::max(mx, v);
      st.claims.push_back({label, base + "_zero", anchor, mx, zero_tol, mx < zero_tol});
    } else {
      bool pass = fit.slope >= slope_min && fit.r2 >= r2_min;
      st.claims.push_back({label, base + "_slope", anchor, fit.slope, slope_min, pass});
    }
    PlotSeries ps{label, base, {}};
    for (const auto& [s, v] : series)
      if (v > 0) ps.points.push_back({std::log2(s), std::log2(v)});
    st.plots.push_back(std::move(ps));
  };
  slope_claim(tau_s, "tension", "tension-vanishing-order", tension_min);
  slope_claim(sff_s, "sff", "sff-vanishing-order", sff_min);
  // pullback decays only on conformal geodesics; generically it is O(1)
  slope_claim(pull_s, "pullback", "pullback-decay", pullback_min);

  if (job.get_bool("check_coefficients", false)) {
    double t_mid = ts[ts.size() / 2];
    ExpansionMap::Coefficients c = map.coefficients_at(t_mid);

    // leading s-coefficient of the mixed second-fundamental-form component
    SffLeading pred =
        sff_leading_coefficients(*chart, *cs.curve, t_mid, sign, c.x3, c.y3);
    int n = chart->dim();
    double rel_err = 0.0;
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<double, double>> comp;
      for (int k = k_min; k <= k_max; ++k) {
        double s = std::pow(2.0, -k);
        comp.push_back({s, second_fundamental_form(map, ambient, s, t_mid).st[i + 1]});
      }
      double got = extract_coefficient(comp, 1).value;
      rel_err = std::max(rel_err, std::abs(got - pred.sti[i]) /
                                      std::max(1e-12, pred.sti.cwiseAbs().maxCoeff()));
    }
    st.claims.push_back({label, "sff_coefficient_match", "sff-leading-coefficients", rel_err,
                         job.get_double("coefficient_tol", 1e-4),
                         rel_err < job.get_double("coefficient_tol", 1e-4)});

    std::vector<std::pair<double, double>> ptts;
    for (int k = k_min; k <= k_max; ++k) {
      double s = std::pow(2.0, -k);
      ptts.push_back({s, pullback(map, ambient, s, t_mid).tt});
    }
    double got_tt = extract_coefficient(ptts, 0).value;
    double want_tt = pullback_tt_limit(*chart, *cs.curve, t_mid, sign, c.x3);
    double rel_tt = std::abs(got_tt - want_tt) / std::max(1e-12, std::abs(want_tt));
    st.claims.push_back({label, "pullback_tt_match", "pullback-limit-value", rel_tt,
                         job.get_double("coefficient_tol", 1e-4),
                         rel_tt < job.get_double("coefficient_tol", 1e-4)});
  }
}

void job_energy(const ConfigSection& job, const std::string& label,
                const std::shared_ptr<const ChartMetric>& chart,
                const AmbientMetric& ambient, const CurveSetup& cs, int sign, RunState& st) {
  EnergyWindow window;
  window.t0 = job.get_double("t0", cs.t_lo);
  window.t1 = job.get_double("t1", cs.t_hi);
  window.s_max = job.get_double("s_max", 1.0);
  CoefficientOverrides ov = overrides_from(job, chart->dim());
  ExpansionMap map(cs.curve, chart, sign, ov);

  std::vector<double> ladder;
  for (double f : {0.2, 0.1, 0.05, 0.025, 0.0125}) ladder.push_back(f * window.s_max);
  EnergyReport rep = renormalized_energy(map, ambient, window, ladder);
  for (std::size_t i = 0; i < rep.epsilons.size(); ++i)
    st.samples.push_back({label, "truncated_energy", rep.epsilons[i], rep.energies[i]});

  double fit_tol = 1e-4 * std::max(std::abs(rep.c1), 1.0);
  st.claims.push_back({label, "energy_fit_residual", "energy-expansion-fit", rep.fit_residual,
                       fit_tol, rep.fit_residual < fit_tol});
  if (job.has("expected_c1")) {
    double want = job.require_double("expected_c1");
    double tol = job.get_double("tol", 1e-8);
    double err = std::abs(rep.c1 - want);
    st.claims.push_back({label, "c1_match", "energy-pole-coefficient", err, tol, err < tol});
  }
  if (job.has("expected_eren")) {
    double want = job.require_double("expected_eren");
    double tol = job.get_double("tol", 1e-8);
    double err = std::abs(rep.e_ren - want);
    st.claims.push_back({label, "eren_match", "renormalized-energy-value", err, tol, err < tol});
  }
}

// ---- artifacts ------------------------------------------------------------

void write_report(const std::string& out_dir, const std::vector<Claim>& claims) {
  std::ofstream out(out_dir + "/report.json");
  if (!out) throw Error("cannot write report.json");
  out << "{\n  \"schema_version\": 1,\n  \"claims\": [\n";
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const Claim& c = claims[i];
    out << "    {\"job\": \"" << json_escape(c.job) << "\", \"name\": \"" << json_escape(c.name)
        << "\", \"anchor\": \"" << json_escape(c.anchor) << "\", \"value\": " << fmt17(c.value)
        << ", \"threshold\": " << fmt17(c.threshold) << ", \"pass\": "
        << (c.pass ? "true" : "false") << "}" << (i + 1 < claims.size() ? "," : "") << "\n";
  }
  int passed = 0;
  for (const Claim& c : claims) passed += c.pass ? 1 : 0;
  out << "  ],\n  \"summary\": {\"total\": " << claims.size() << ", \"passed\": " << passed
      << "}\n}\n";
}

void write_samples(const std::string& out_dir, const std::vector<SampleRow>& rows) {
  std::ofstream out(out_dir + "/samples.csv");
  if (!out) throw Error("cannot write samples.csv");
  out << "job,series,param,value\n";
  for (const auto& r : rows)
    out << r.job << ',' << r.series << ',' << fmt17(r.param) << ',' << fmt17(r.value) << '\n';
}

void write_plots(const std::string& out_dir, const std::vector<PlotSeries>& plots) {
  std::filesystem::create_directories(out_dir + "/plots");
  for (const auto& ps : plots) {
    const double W = 480, H = 320, M = 40;
    std::ofstream out(out_dir + "/plots/" + ps.job + "_" + ps.name + ".svg");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"10\" y=\"20\" font-size=\"12\">" << ps.job << " " << ps.name
        << " (log2-log2)</text>\n";
    if (ps.points.size() < 2) {
      out << "<text x=\"10\" y=\"40\" font-size=\"12\">series at noise floor</text>\n</svg>\n";
      continue;
    }
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto [x, y] : ps.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    out << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
    for (auto [x, y] : ps.points) {
      double px = M + (x - xmin) / (xmax - xmin) * (W - 2 * M);
      double py = H - M - (y - ymin) / (ymax - ymin) * (H - 2 * M);
      out << px << ',' << py << ' ';
    }
    out << "\"/>\n</svg>\n";
  }
}

}  // namespace

RunResult run_config(const Config& cfg, const std::string& out_dir, const RunOptions& opts) {
  std::filesystem::create_directories(out_dir);

  // curve first: its points double as Schouten-override validation samples
  const ConfigSection* ms = cfg.find("metric");
  if (!ms) throw ConfigError("config needs a [metric] section");
  int n = ms->get_int("dimension", 2);
  CurveSetup cs = build_curve(cfg, n);
  std::vector<Vec> validation_points;
  for (double t : cs.sample_ts()) validation_points.push_back(cs.curve->jets(t).gamma);
  auto chart = build_chart(cfg, validation_points);

  const ConfigSection* as = cfg.find("ambient");
  AmbientMetric ambient(chart, ambient_mode_from_string(
                                   as ? as->require("mode") : "hyperbolic_upper_half"));
  int sign = domain_sign_from(cfg);

  auto jobs = cfg.find_all("job");
  if (jobs.empty()) throw ConfigError("config has no [job] sections");

  RunState st;
  for (const ConfigSection* job : jobs) {
    std::string kind = job->require("name");
    std::string label = job->get("label").value_or(kind);
    if (kind == "curvature") {
      job_curvature(*job, label, chart, cs, opts, st);
    } else if (kind == "geodesic") {
      job_geodesic(*job, label, chart, cs, opts, st);
    } else if (kind == "verify") {
      job_verify(*job, label, chart, ambient, cs, sign, opts, st);
    } else if (kind == "energy") {
      job_energy(*job, label, chart, ambient, cs, sign, st);
    } else if (kind == "report") {
      st.claims.push_back({label, "jobs_completed", "artifact-summary",
                           static_cast<double>(st.claims.size()), 0.0, true});
    } else {
      throw ConfigError("unknown job kind '" + kind + "'");
    }
  }

  std::stable_sort(st.claims.begin(), st.claims.end(),
                   [](const Claim& a, const Claim& b) { return a.job < b.job; });

  write_report(out_dir, st.claims);
  write_samples(out_dir, st.samples);
  if (opts.plots) write_plots(out_dir, st.plots);

  RunResult res;
  res.claims = st.claims;
  res.exit_code = 0;
  for (const Claim& c : res.claims)
    if (!c.pass) res.exit_code = 1;
  return res;
}

RunResult run_config_file(const std::string& path, const std::string& out_dir,
                          const RunOptions& opts) {
  return run_config(Config::parse_file(path), out_dir, opts);
}

}  // namespace cgholo
