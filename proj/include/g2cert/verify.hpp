#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "g2cert/flow.hpp"
#include "g2cert/metrics.hpp"
#include "g2cert/serialize.hpp"

namespace g2cert {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

struct RunConfig {
  Rational m = Rational(-1);
  double tol_float = 1e-7;
  std::uint64_t seed = kDefaultSeed;
  int points = 20;
  std::optional<Case> case_filter;
  double tau_max = 0.5;
  double step = 1e-3;
  std::string json_path;
  std::string csv_path;

  void validate() const {
    if (m == 0) throw ConfigError("m must be nonzero");
    if (!(tol_float > 0.0)) throw ConfigError("float tolerance must be positive");
    if (points <= 0) throw ConfigError("point count must be positive");
    if (!(tau_max > 0.0)) throw ConfigError("tau-max must be positive");
    if (!(step > 0.0)) throw ConfigError("step must be positive");
  }

  bool selects(Case c) const { return !case_filter || *case_filter == c; }

  Json to_json() const {
    return Json{{"m", to_string(m)},
                {"tol_float", tol_float},
                {"seed", seed},
                {"points", points},
                {"case", case_filter ? std::string(label(*case_filter)) : std::string("all")},
                {"tau_max", tau_max},
                {"step", step}};
  }
};

struct CheckRecord {
  std::string id;
  int criterion = 0;
  std::string kase;
  bool pass = false;
  Json witness;
  std::string anchor;

  Json to_json() const {
    return Json{{"id", id},
                {"criterion", criterion},
                {"case", kase},
                {"status", pass ? "PASS" : "FAIL"},
                {"witness", witness},
                {"anchor", anchor}};
  }
};

struct Report {
  Json config;
  std::vector<CheckRecord> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.pass; });
  }

  /// PASS iff every record of the criterion passes; nullopt if none ran.
  std::optional<bool> criterion_status(int k) const {
    std::optional<bool> out;
    for (const auto& r : checks) {
      if (r.criterion != k) continue;
      out = out.value_or(true) && r.pass;
    }
    return out;
  }

  Json to_json() const {
    Json list = Json::array();
    int passed = 0;
    for (const auto& r : checks) {
      list.push_back(r.to_json());
      passed += r.pass ? 1 : 0;
    }
    const int total = static_cast<int>(checks.size());
    return Json{{"config", config},
                {"checks", std::move(list)},
                {"summary", {{"total", total}, {"passed", passed}, {"failed", total - passed}}}};
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }
};

namespace detail {

inline const char* const kAnchors[] = {
    "",
    "d(de^i) = 0 for i = 1..7",
    "dphi = 3m e^7 ^ phi, d*phi = 4m e^7 ^ *phi",
    "d^psi+ = 0, d^(omega^2) = 0 on the base",
    "eigenvalues of ad e_7 on n as multiples of m",
    "Ric(g) = 0",
    "dim hol(g) from the curvature-generated algebra",
    "nabla(exp(-3mt) phi) = 0, nabla dx2 = 0 (12+34), nabla dx1 = 0 (12,13)",
    "tau4 = m e^7, Phi = m psi-",
    "d^omega = 0 iff abelian; N_J != 0 iff non-abelian",
    "d^omega = d_tau psi+, d^psi- = -d_tau(omega^2/2), s = 1 - m tau",
    "g_7 = g_6(tau) + dtau^2 with tau = (1 - exp(-mt))/m",
    "L_Z g = c g with c constant, dZ^flat != 0",
};

inline Json rational_list(const std::vector<Rational>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(to_string(m));
  return out;
}

inline Json eigen_row_json(const std::vector<std::pair<Rational, int>>& row) {
  Json out = Json::array();
  for (const auto& [r, k] : row) out.push_back(Json{{"ratio", to_string(r)}, {"multiplicity", k}});
  return out;
}

/// Expected eigenvalues of ad(e_7) on n in units of m, with
/// multiplicities, ordered by decreasing ratio.
inline std::vector<std::pair<Rational, int>> eigenvalue_table(Case c) {
  auto q = [](std::int64_t p, std::int64_t d = 1) { return make_rational(p, d); };
  switch (c) {
    case Case::Abelian: return {{q(-1), 6}};
    case Case::H3: return {{q(-2, 3), 2}, {q(-1), 3}, {q(-4, 3), 1}};
    case Case::C12_34: return {{q(-3, 4), 4}, {q(-1), 1}, {q(-3, 2), 1}};
    case Case::C12_13_24: return {{q(-3, 5), 2}, {q(-4, 5), 2}, {q(-6, 5), 1}, {q(-7, 5), 1}};
    case Case::C12_13: return {{q(-1, 2), 1}, {q(-3, 4), 2}, {q(-1), 1}, {q(-5, 4), 2}};
    case Case::Iwasawa: return {{q(-2, 3), 4}, {q(-4, 3), 2}};
    case Case::C12_13_23: return {{q(-3, 5), 3}, {q(-6, 5), 3}};
  }
  return {};
}

/// Eigenvalue type read off the displayed algebra: c_j is the e^{j7}
/// coefficient of de^j, and ad(e_7) must act diagonally.
inline std::optional<std::vector<std::pair<Rational, int>>> displayed_eigenvalue_type(const LieAlgebra& alg,
                                                                                      const Rational& m) {
  const RMatrix ad = alg.ad(7);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i != j && ad(i, j) != 0) return std::nullopt;
    }
  }
  std::vector<Rational> c;
  for (int j = 1; j <= 6; ++j) c.push_back(alg.de(j).coefficient({j, 7}));
  const Extension ext{LieAlgebra("n", std::vector<Form>(6, Form(6, 2)), m), std::move(c), alg};
  return eigenvalue_type(ext);
}

class Verifier {
 public:
  explicit Verifier(const RunConfig& cfg) : cfg_(cfg) {
    std::set<Rational> ms = {Rational(-1), Rational(-2), Rational(-3), cfg.m};
    exact_ms_.assign(ms.rbegin(), ms.rend());
    g2_ = build_g2(standard_su3());
  }

  Report run() {
    Report rep;
    rep.config = cfg_.to_json();
    for (Case c : kAllCases) {
      if (!cfg_.selects(c)) continue;
      exact_checks(c);
    }
    if (!cfg_.case_filter) negative_controls();
    const auto pts = sample_points(cfg_.seed, cfg_.points);
    for (Case c : kAllCases) {
      if (!cfg_.selects(c)) continue;
      chart_checks(c, pts);
    }
    for (Case c : kAllCases) {
      if (!cfg_.selects(c)) continue;
      flow_checks(c, pts);
    }
    if (cfg_.selects(Case::C12_13_24)) homothety(pts);
    rep.checks = std::move(out_);
    return rep;
  }

 private:
  void add(int criterion, const std::string& name, const std::string& kase, bool pass, Json witness) {
    char id[64];
    std::snprintf(id, sizeof id, "ac%02d.%s", criterion, name.c_str());
    out_.push_back(CheckRecord{id, criterion, kase, pass, std::move(witness), kAnchors[criterion]});
  }

  void exact_checks(Case c) {
    const std::string lc(label(c));
    bool jac = true, disp = true, hf = true, tor = true;
    int jac_terms = 0, cp_terms = 0;
    for (const auto& m : exact_ms_) {
      const Extension ext = catalog_extension(c, m);
      disp = disp && ext.algebra.differentials() == displayed_extension(c, m).differentials();
      for (const auto& f : jacobi_check(displayed_extension(c, m))) jac_terms += static_cast<int>(f.size());
      jac = jac && is_lie_algebra(ext.algebra);
      const auto [r1, r2] = conformally_parallel_residual(ext, g2_, m);
      cp_terms += static_cast<int>(r1.size() + r2.size());
      const HalfFlatReport h = is_half_flat(ext.base, standard_su3());
      hf = hf && h.half_flat;
      const TorsionReport t = torsion_forms(ext, g2_);
      tor = tor && t.tau4 == m * Form::basis(7, 7) && t.torsion == m * embed(standard_su3().psi_minus, 7);
    }
    add(1, "jacobi", lc, jac && disp && jac_terms == 0,
        Json{{"m", rational_list(exact_ms_)}, {"nonzero_terms", jac_terms}, {"display_matches_extension", disp}});
    add(2, "conformally_parallel", lc, cp_terms == 0,
        Json{{"m", rational_list(exact_ms_)}, {"nonzero_terms", cp_terms}});
    add(3, "half_flat", lc, hf, Json{{"m", rational_list(exact_ms_)}, {"half_flat", hf}});

    bool ev_ok = true;
    Json measured = Json::array();
    for (const auto& m : exact_ms_) {
      const auto row = displayed_eigenvalue_type(displayed_extension(c, m), m);
      ev_ok = ev_ok && row && *row == eigenvalue_table(c);
      if (m == cfg_.m) measured = row ? eigen_row_json(*row) : Json("non-diagonal");
    }
    add(4, "eigenvalues", lc, ev_ok, Json{{"measured", measured}, {"expected", eigen_row_json(eigenvalue_table(c))}});

    const TorsionReport t = torsion_forms(catalog_extension(c, cfg_.m), g2_);
    add(8, "torsion", lc, tor,
        Json{{"m", rational_list(exact_ms_)}, {"tau1", to_string(t.tau1)}, {"tau4", to_string(t.tau4)},
             {"torsion", to_string(t.torsion)}});

    const LieAlgebra base = base_algebra(c, cfg_.m);
    const bool symp = is_symplectic(base, standard_su3().omega).symplectic;
    const bool integrable = is_zero(nijenhuis(base, standard_complex_structure()));
    const bool abelian = c == Case::Abelian;
    add(9, "symplectic_nijenhuis", lc, symp == abelian && integrable == abelian,
        Json{{"symplectic", symp}, {"nijenhuis_zero", integrable}});
  }

  void negative_controls() {
    const HalfFlatReport h = is_half_flat(h3_plus_h3(), standard_su3());
    const bool expected = !h.half_flat && h.d_psi_plus == Form::monomial(6, {1, 2, 3, 4}, Rational(-1));
    add(3, "half_flat_control", "h3+h3", expected,
        Json{{"half_flat", h.half_flat}, {"d_psi_plus", to_string(h.d_psi_plus)}});
  }

  void chart_checks(Case c, const std::vector<Point>& pts) {
    const std::string lc(label(c));
    const Chart ch = make_chart(c, cfg_.m);
    const ChartGeometry geo(ch);
    const double ric_tol = c == Case::Abelian ? std::min(cfg_.tol_float, 1e-12) : cfg_.tol_float;
    double ric = 0.0;
    for (const auto& p : pts) ric = std::max(ric, max_abs(geo.ricci(p)));
    add(5, "ricci_flat", lc, ric <= ric_tol, Json{{"max_abs_ric", ric}, {"tol", ric_tol}, {"points", cfg_.points}});

    const int expected = holonomy_dimension(holonomy(c));
    bool hol_ok = true;
    Json dims = Json::array();
    double gap = std::numeric_limits<double>::infinity();
    const std::size_t nh = std::min<std::size_t>(3, pts.size());
    for (std::size_t n = 0; n < nh; ++n) {
      const HolonomyResult r = holonomy_lower_bound(geo, pts[n], kHolonomyTol);
      hol_ok = hol_ok && r.stable && r.dimension == expected;
      gap = std::min(gap, r.worst_gap);
      dims.push_back(r.dimension);
    }
    add(6, "holonomy", lc, hol_ok,
        Json{{"dimensions", dims}, {"expected", expected}, {"group", std::string(holonomy_label(holonomy(c)))},
             {"worst_gap", std::isfinite(gap) ? Json(gap) : Json("inf")}});

    const ExprForm phi = conformal_phi(ch, g2_.phi);
    double par = 0.0;
    for (const auto& p : pts) par = std::max(par, parallel_form_residual(geo, phi, p));
    Json w{{"phi_residual", par}, {"tol", cfg_.tol_float}};
    bool ok = par <= cfg_.tol_float;
    const int flat_dir = c == Case::C12_34 ? 2 : c == Case::C12_13 ? 1 : 0;
    if (flat_dir != 0) {
      double r = 0.0;
      for (const auto& p : pts) r = std::max(r, parallel_form_residual(geo, ExprForm::basis(7, flat_dir, Expr(1)), p));
      w["dx" + std::to_string(flat_dir) + "_residual"] = r;
      ok = ok && r <= 1e-10;
    }
    add(7, "parallel_forms", lc, ok, std::move(w));
  }

  void flow_checks(Case c, const std::vector<Point>& pts) {
    const std::string lc(label(c));
    const double m = to_double(cfg_.m);
    if (c == Case::Abelian) return;
    try {
      const FlowOde ode = reduce_to_ode(c, cfg_.m);
      const auto traj = integrate(ode, ode.ansatz().initial(), cfg_.tau_max, cfg_.step);
      double compat = 0.0;
      for (const auto& st : traj) compat = std::max(compat, compatibility_error(ode.ansatz().reconstruct(st.u)));
      const SU3D s = ode.ansatz().reconstruct(traj.back().u);
      const auto [w, p] = closed_form(c, cfg_.tau_max, m);
      const double dev = std::max(max_abs(FormD(s.omega - w)), max_abs(FormD(s.psi_plus - p)));
      const double order = convergence_order(c, cfg_.m, cfg_.tau_max, {0.1, 0.05, 0.025});
      const double closure = hitchin_closure_residual(c, cfg_.m, 0.5 * cfg_.tau_max);
      add(10, "flow", lc, dev <= 1e-8 && compat <= 1e-8 && order >= 3.9 && closure <= 1e-7,
          Json{{"closed_form_deviation", dev}, {"compatibility", compat}, {"order", order},
               {"closure", closure}, {"steps", static_cast<int>(traj.size()) - 1}});
    } catch (const std::exception& e) {
      add(10, "flow", lc, false, Json{{"error", e.what()}});
    }

    try {
      const Chart ch = make_chart(c, cfg_.m);
      double worst = 0.0;
      const std::size_t nx = std::min<std::size_t>(5, pts.size());
      for (int k = 0; k <= 10; ++k) {
        const double t = -0.5 + 0.1 * k;
        for (std::size_t n = 0; n < nx; ++n) worst = std::max(worst, flow_metric_correspondence(ch, t, pts[n]));
      }
      add(11, "isometry", lc, worst <= 1e-10, Json{{"max_deviation", worst}, {"t_range", {-0.5, 0.5}}});
    } catch (const std::exception& e) {
      add(11, "isometry", lc, false, Json{{"error", e.what()}});
    }
  }

  void homothety(const std::vector<Point>& pts) {
    const Chart ch = make_chart(Case::C12_13_24, cfg_.m);
    const VectorField Z = homothety_field(cfg_.m);
    const HomothetyResult r = homothety_check(ch, Z, pts, cfg_.tol_float);
    const Expr dz = d_flat(ch, Z, kT, 0);
    double dz_max = 0.0;
    for (const auto& p : pts) dz_max = std::max(dz_max, std::abs(dz(p)));
    add(12, "homothety", std::string(label(Case::C12_13_24)), r.homothetic && dz_max > cfg_.tol_float,
        Json{{"c", r.c}, {"max_residual", r.max_residual}, {"dZflat_t_x1_max", dz_max}});
    // the displayed field with its m-dependent x2, x3 weights is homothetic at m = 5/3 only
    const Rational m53 = make_rational(5, 3);
    const HomothetyResult d = homothety_check(make_chart(Case::C12_13_24, m53), displayed_homothety_field(m53), pts,
                                              cfg_.tol_float);
    add(12, "homothety_displayed_field", std::string(label(Case::C12_13_24)), d.homothetic,
        Json{{"m", "5/3"}, {"c", d.c}, {"max_residual", d.max_residual}});
  }

  static constexpr double kHolonomyTol = 1e-8;

  RunConfig cfg_;
  std::vector<Rational> exact_ms_;
  G2Structure g2_;
  std::vector<CheckRecord> out_;
};

}  // namespace detail

inline Report verify_all(const RunConfig& cfg) {
  cfg.validate();
  return detail::Verifier(cfg).run();
}

}  // namespace g2cert
