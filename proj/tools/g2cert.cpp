// g2cert: certification runs for the conformally parallel G2 catalog.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "g2cert/verify.hpp"

using namespace g2cert;

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2 };

struct Options {
  std::string m = "-1";
  double tol_float = 1e-7;
  std::uint64_t seed = kDefaultSeed;
  int points = 20;
  std::string kase;
  double tau_max = 0.5;
  double step = 1e-3;
  std::string json_path;
  std::string csv_path;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--m", o.m, "parameter m as p/q")->capture_default_str();
  app->add_option("--tol-float", o.tol_float, "floating-point tolerance")->capture_default_str();
  app->add_option("--seed", o.seed, "sampling seed (G2CERT_SEED overrides)")->capture_default_str();
  app->add_option("--points", o.points, "sample points per chart")->capture_default_str();
  app->add_option("--case", o.kase, "restrict to one algebra label");
  app->add_option("--tau-max", o.tau_max, "flow end time")->capture_default_str();
  app->add_option("--step", o.step, "flow step")->capture_default_str();
  app->add_option("--json", o.json_path, "write JSON here");
  app->add_option("--csv", o.csv_path, "write CSV here");
}

RunConfig make_config(const Options& o) {
  RunConfig cfg;
  try {
    cfg.m = parse_rational(o.m);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad --m: ") + e.what());
  }
  cfg.tol_float = o.tol_float;
  cfg.seed = o.seed;
  if (const char* env = std::getenv("G2CERT_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad G2CERT_SEED: ") + env);
    }
  }
  cfg.points = o.points;
  if (!o.kase.empty()) {
    try {
      cfg.case_filter = parse_case(o.kase);
    } catch (const UnknownCaseError& e) {
      throw ConfigError(e.what());
    }
  }
  cfg.tau_max = o.tau_max;
  cfg.step = o.step;
  cfg.json_path = o.json_path;
  cfg.csv_path = o.csv_path;
  cfg.validate();
  return cfg;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

void emit_json(const RunConfig& cfg, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.json_path.empty()) {
    std::cout << text;
  } else {
    write_file(cfg.json_path, text);
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Case> selected(const RunConfig& cfg, bool skip_flat = false) {
  std::vector<Case> out;
  for (Case c : kAllCases) {
    if (skip_flat && c == Case::Abelian && !cfg.case_filter) continue;
    if (cfg.selects(c)) out.push_back(c);
  }
  return out;
}

int run_verify(const RunConfig& cfg) {
  const Report rep = verify_all(cfg);
  for (const auto& r : rep.checks) std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << " [" << r.kase << "]\n";
  std::cout << (rep.all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
  if (!cfg.json_path.empty()) write_file(cfg.json_path, rep.dump());
  return rep.all_pass() ? kPass : kFail;
}

int run_catalog(const RunConfig& cfg) {
  std::cout << catalog_table(cfg.m);
  if (!cfg.json_path.empty()) write_file(cfg.json_path, catalog_json(cfg.m).dump(2) + "\n");
  return kPass;
}

int run_residuals(const RunConfig& cfg) {
  const G2Structure g2 = build_g2(standard_su3());
  Json out = Json::array();
  bool ok = true;
  for (Case c : selected(cfg)) {
    const Extension ext = catalog_extension(c, cfg.m);
    const TorsionReport t = torsion_forms(ext, g2);
    const HalfFlatReport h = is_half_flat(ext.base, standard_su3());
    const bool zero = t.residual_phi.is_zero() && t.residual_star_phi.is_zero();
    ok = ok && zero && h.half_flat;
    Json row{{"case", std::string(label(c))}, {"m", to_string(cfg.m)}, {"torsion", torsion_json(t)},
             {"d_psi_plus", form_json(h.d_psi_plus)}, {"d_omega2", form_json(h.d_omega2)}};
    out.push_back(std::move(row));
    std::cerr << (zero && h.half_flat ? "PASS " : "FAIL ") << label(c) << "\n";
  }
  emit_json(cfg, out);
  return ok ? kPass : kFail;
}

int run_curvature(const RunConfig& cfg) {
  const G2Structure g2 = build_g2(standard_su3());
  const auto pts = sample_points(cfg.seed, cfg.points);
  std::string csv = "case,point,x1,x2,x3,x4,x5,x6,t,max_abs_ric,holonomy_dim,phi_residual\n";
  Json out = Json::array();
  bool ok = true;
  for (Case c : selected(cfg)) {
    const Chart ch = make_chart(c, cfg.m);
    const ChartGeometry geo(ch);
    const ExprForm phi = conformal_phi(ch, g2.phi);
    const int expected = holonomy_dimension(holonomy(c));
    Json rows = Json::array();
    double worst = 0.0;
    for (std::size_t n = 0; n < pts.size(); ++n) {
      const Point& p = pts[n];
      const double ric = max_abs(geo.ricci(p));
      const HolonomyResult h = holonomy_lower_bound(geo, p, 1e-8);
      const double par = parallel_form_residual(geo, phi, p);
      worst = std::max(worst, ric);
      ok = ok && ric <= cfg.tol_float && par <= cfg.tol_float && h.stable && h.dimension == expected;
      rows.push_back(Json{{"point", std::vector<double>(p.begin(), p.end())},
                          {"max_abs_ric", ric},
                          {"holonomy_dim", h.dimension},
                          {"holonomy_stable", h.stable},
                          {"phi_residual", par}});
      csv += std::string(label(c)) + "," + std::to_string(n);
      for (double v : p) csv += "," + num(v);
      csv += "," + num(ric) + "," + std::to_string(h.dimension) + "," + num(par) + "\n";
    }
    out.push_back(Json{{"case", std::string(label(c))},
                       {"m", to_string(cfg.m)},
                       {"seed", cfg.seed},
                       {"expected_holonomy_dim", expected},
                       {"max_abs_ric", worst},
                       {"points", std::move(rows)}});
  }
  emit_json(cfg, out);
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, csv);
  return ok ? kPass : kFail;
}

int run_holonomy(const RunConfig& cfg) {
  const auto pts = sample_points(cfg.seed, cfg.points);
  Json out = Json::array();
  bool ok = true;
  for (Case c : selected(cfg)) {
    const ChartGeometry geo(make_chart(c, cfg.m));
    const int expected = holonomy_dimension(holonomy(c));
    Json dims = Json::array();
    bool case_ok = true;
    for (const auto& p : pts) {
      const HolonomyResult h = holonomy_lower_bound(geo, p, 1e-8);
      case_ok = case_ok && h.stable && h.dimension == expected;
      dims.push_back(h.dimension);
    }
    ok = ok && case_ok;
    std::cout << (case_ok ? "PASS " : "FAIL ") << label(c) << ": dim " << expected << " ("
              << holonomy_label(holonomy(c)) << ")\n";
    out.push_back(Json{{"case", std::string(label(c))},
                       {"group", std::string(holonomy_label(holonomy(c)))},
                       {"expected", expected},
                       {"dimensions", std::move(dims)}});
  }
  if (!cfg.json_path.empty()) write_file(cfg.json_path, out.dump(2) + "\n");
  return ok ? kPass : kFail;
}

int run_flow(const RunConfig& cfg) {
  const double m = to_double(cfg.m);
  std::string csv = "case,step,tau,u1,u2,compat_omega_psi,compat_volume";
  for (int i = 1; i <= 6; ++i) {
    for (int j = i; j <= 6; ++j) csv += ",g" + std::to_string(i) + std::to_string(j);
  }
  csv += "\n";
  Json out = Json::array();
  bool ok = true;
  for (Case c : selected(cfg, true)) {
    Json row{{"case", std::string(label(c))}, {"m", to_string(cfg.m)}};
    try {
      const FlowOde ode = reduce_to_ode(c, cfg.m);
      const auto traj = integrate(ode, ode.ansatz().initial(), cfg.tau_max, cfg.step);
      Json steps = Json::array();
      double worst = 0.0;
      for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& st = traj[k];
        const SU3D s = ode.ansatz().reconstruct(st.u);
        const auto [wp, vol] = compatibility_residuals(s);
        worst = std::max({worst, max_abs(wp), std::abs(vol)});
        const Mat6 g = hitchin_metric(s.omega, s.psi_plus).g;
        std::vector<double> u(st.u.data(), st.u.data() + st.u.size());
        Json metric = Json::array();
        for (int i = 0; i < 6; ++i) metric.push_back(std::vector<double>(g.row(i).data(), g.row(i).data() + 6));
        steps.push_back(Json{{"tau", st.tau}, {"u", u}, {"compatibility", {max_abs(wp), vol}}, {"metric", metric}});
        csv += std::string(label(c)) + "," + std::to_string(k) + "," + num(st.tau) + "," + num(u[0]) + "," +
               (u.size() > 1 ? num(u[1]) : std::string()) + "," + num(max_abs(wp)) + "," + num(vol);
        for (int i = 0; i < 6; ++i) {
          for (int j = i; j < 6; ++j) csv += "," + num(g(i, j));
        }
        csv += "\n";
      }
      bool case_ok = worst <= 1e-8;
      if (c != Case::Abelian) {
        const SU3D s = ode.ansatz().reconstruct(traj.back().u);
        const auto [w, p] = closed_form(c, cfg.tau_max, m);
        const double dev = std::max(max_abs(FormD(s.omega - w)), max_abs(FormD(s.psi_plus - p)));
        row["closed_form_deviation"] = dev;
        case_ok = case_ok && dev <= 1e-8;
      }
      row["max_compatibility"] = worst;
      row["steps"] = std::move(steps);
      ok = ok && case_ok;
      std::cerr << (case_ok ? "PASS " : "FAIL ") << label(c) << "\n";
    } catch (const FlowDomainError& e) {
      row["error"] = e.what();
      ok = false;
      std::cerr << "FAIL " << label(c) << ": " << e.what() << "\n";
    }
    out.push_back(std::move(row));
  }
  if (!cfg.json_path.empty()) write_file(cfg.json_path, out.dump(2) + "\n");
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, csv);
  if (cfg.json_path.empty() && cfg.csv_path.empty()) std::cout << csv;
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"g2cert: exact and numerical certification of conformally parallel G2 solvmanifolds"};
  app.require_subcommand(1);
  Options o;
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Sub subs[] = {
      {"verify", "run every check and report PASS/FAIL", run_verify},
      {"catalog", "list the seven algebras", run_catalog},
      {"residuals", "exact torsion and half-flat residuals", run_residuals},
      {"curvature", "Ricci, holonomy and parallel-form samples on the charts", run_curvature},
      {"holonomy", "holonomy algebra dimensions", run_holonomy},
      {"flow", "integrate the SU(3) evolution", run_flow},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, o);
    apps.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  try {
    const RunConfig cfg = make_config(o);
    for (std::size_t i = 0; i < apps.size(); ++i) {
      if (apps[i]->parsed()) return subs[i].run(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
