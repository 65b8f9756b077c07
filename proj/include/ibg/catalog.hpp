#pragma once

#include "ibg/models.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <set>

namespace ibg {

using json = nlohmann::json;

struct ExpectedCheck {
  std::string kind;
  Real tol = 1e-8L;
  bool expect_pass = true;
  std::vector<int> grid;  // empty: kind default
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  json params = json::object();

  std::optional<WeylStructure> weyl;
  std::optional<MetricField> metric4;
  std::optional<HyperCRData> hypercr;
  std::optional<Monopole> monopole;
  std::optional<NahmField> nahm;
  std::pair<Real, Real> r_range{1, 2};
  std::optional<RiccatiSpace> riccati;
  std::optional<HitchinField> hitchin;
  Chart hitchin_chart;
  std::optional<HamiltonianNahm> sdiff;
  Chart sdiff_chart;
  std::optional<DiffNahm> diff_nahm;
  std::optional<FrameField4> frame;
  VolumeDensity volume;
  std::optional<PdeKind> pde;
  ScalarField u;
  std::optional<models::BianchiIX> bianchi;
  std::optional<Vec3> euler_f0;

  std::vector<ExpectedCheck> checks;
};

namespace detail {

inline void check_keys(const json& p, std::initializer_list<const char*> allowed) {
  if (!p.is_object()) throw Error(Errc::BadParams, "params must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : p.items())
    if (!ok.count(k)) throw Error(Errc::BadParams, "unknown parameter '" + k + "'");
}

inline Real num(const json& p, const char* key, Real def, Real lo, Real hi) {
  if (!p.contains(key)) return def;
  if (!p[key].is_number()) throw Error(Errc::BadParams, std::string(key) + " must be a number");
  const Real v = p[key].get<double>();
  if (!(v >= lo && v <= hi)) throw Error(Errc::BadParams, std::string(key) + " out of range");
  return v;
}

inline bool flag(const json& p, const char* key) {
  if (!p.contains(key)) return false;
  if (!p[key].is_boolean()) throw Error(Errc::BadParams, std::string(key) + " must be a boolean");
  return p[key].get<bool>();
}

inline std::string choice(const json& p, const char* key, const std::string& def, std::initializer_list<const char*> opts) {
  if (!p.contains(key)) return def;
  std::string v;
  if (p[key].is_string()) v = p[key].get<std::string>();
  else if (p[key].is_number()) v = p[key].dump();
  else throw Error(Errc::BadParams, std::string(key) + " must be a string");
  for (const char* o : opts)
    if (v == o) return v;
  throw Error(Errc::BadParams, std::string(key) + " = '" + v + "' not supported");
}

inline models::Holomorphic holomorphic(const std::string& h) {
  return {h == "z" ? models::HolKind::Zeta : models::HolKind::One};
}

inline ExpectedCheck chk(std::string kind, Real tol, bool pass = true, std::vector<int> grid = {}) {
  return {std::move(kind), tol, pass, std::move(grid)};
}

inline CatalogEntry make_flat3(const json& p) {
  check_keys(p, {});
  CatalogEntry e;
  e.summary = "flat R^3 with omega = 0";
  e.weyl = models::flat3();
  HyperCRData d;
  for (int i = 0; i < 3; ++i) d.chi[i] = [i](const Vec&) { Vec v = Vec::Zero(3); v(i) = 1; return v; };
  d.kappa = [](const Vec&) { return Real(0); };
  e.hypercr = d;
  e.checks = {chk("einstein_weyl", 1e-10L), chk("hypercr", 1e-10L)};
  return e;
}

inline CatalogEntry make_flat4(const json& p) {
  check_keys(p, {});
  CatalogEntry e;
  e.summary = "flat R^4 as the constant monopole over flat R^3";
  e.weyl = models::flat3();
  e.monopole = abelian([](const Vec&) { return Real(1); });
  e.metric4 = models::flat4();
  e.frame = models::coordinate_frame4();
  e.volume = [](const Vec&) { return Real(1); };
  e.checks = {chk("selfdual", 1e-8L), chk("mn_frame", 1e-10L), chk("hyperkahler", 1e-8L), chk("jones_tod", 1e-8L),
              chk("bogomolny", 1e-10L)};
  return e;
}

inline CatalogEntry make_gibbons_hawking(const json& p) {
  check_keys(p, {"m", "flip_orientation"});
  CatalogEntry e;
  e.summary = "Gibbons-Hawking metric of one positive-mass center";
  const Real m = num(p, "m", 0.5L, 1e-3L, 10);
  auto cs = models::gh_single(m);
  const bool flip = flag(p, "flip_orientation");
  Monopole mono = models::gh_monopole(cs);
  if (flip) {
    auto A = mono.A;
    mono.A = [A](const Vec& b, Real t) { return Vec(-A(b, t)); };
  }
  const Chart base = make_chart({"x", "y", "z"}, {{-3, 3}, {-3, 3}, {-3, 3}},
                                [cs](const Vec& x) { return models::near_gh_singularity(cs, x, 0.5L); });
  e.weyl = models::gh_base(cs, base);
  e.monopole = mono;
  e.metric4 = sd_from_ew_monopole(*e.weyl, mono, {-1, 1});
  if (flip) {
    e.checks = {chk("selfdual", 1e-6L, false)};
  } else {
    e.checks = {chk("selfdual", 1e-6L), chk("einstein_weyl", 1e-8L), chk("bogomolny", 1e-8L), chk("jones_tod", 1e-8L)};
  }
  return e;
}

inline CatalogEntry make_ewgs(const json& p) {
  check_keys(p, {"h", "zero_omega"});
  CatalogEntry e;
  const std::string h = choice(p, "h", "z", {"1", "z"});
  const bool zero = flag(p, "zero_omega");
  e.summary = "|h|^2 g_S2 + beta^2 over the 2-sphere, h = " + h;
  e.weyl = models::ewgs(holomorphic(h), zero);
  HyperCRData d = h == "1" ? models::ewgs_round_hypercr() : HyperCRData{};
  d.kappa_hat = models::ewgs_kappa_hat(holomorphic(h));
  e.hypercr = d;
  if (zero) {
    // with h = 1 omega vanishes already, so the control is only meaningful for h = z
    e.checks = {chk("einstein_weyl", 1e-2L, h == "1")};
  } else {
    e.checks = {chk("einstein_weyl", 1e-5L), chk("hypercr", 1e-5L)};
  }
  return e;
}

inline CatalogEntry make_hcrtoda(const json& p) {
  check_keys(p, {"h", "zero_omega"});
  CatalogEntry e;
  const std::string h = choice(p, "h", "z", {"1", "z"});
  const bool zero = flag(p, "zero_omega");
  e.summary = "(t + h)(t + conj h) g_S2 + dt^2, h = " + h;
  e.weyl = models::hcrtoda(holomorphic(h), zero);
  HyperCRData d;
  d.kappa_hat = models::hcrtoda_kappa_hat(holomorphic(h));
  e.hypercr = d;
  if (zero) {
    // h = 1 is flat space in polar form, which is Einstein-Weyl with omega = 0 as well
    e.checks = {chk("einstein_weyl", 1e-2L, h == "1")};
  } else {
    e.checks = {chk("einstein_weyl", 1e-5L), chk("hypercr", 1e-5L)};
  }
  return e;
}

inline CatalogEntry make_affine_hitchin(const json& p) {
  check_keys(p, {"zero_omega"});
  CatalogEntry e;
  e.summary = "aff(1) Hitchin field from a Laplace eigenfunction on the plane";
  e.hitchin = models::affine_hitchin();
  e.hitchin_chart = models::affine_chart();
  e.weyl = ew_from_sv_hitchin(*e.hitchin, e.hitchin_chart);
  e.hypercr = hypercr_from_hitchin(*e.hitchin);
  if (flag(p, "zero_omega")) {
    e.weyl->omega = {};
    e.checks = {chk("einstein_weyl", 1e-2L, false)};
  } else {
    e.checks = {chk("hitchin", 1e-8L), chk("einstein_weyl", 1e-5L), chk("hypercr", 1e-5L)};
  }
  return e;
}

inline CatalogEntry make_toda(const json& p) {
  check_keys(p, {"a", "b", "zero_omega"});
  CatalogEntry e;
  const Real a = num(p, "a", 1, 0.1L, 10), b = num(p, "b", 0, 0, 10);
  e.summary = "dispersionless Toda u = log(a z + b)";
  e.pde = PdeKind::Toda;
  e.u = models::toda_log_linear(a, b);
  e.weyl = dispersionless_ew(Dispersionless::Toda, e.u, models::toda_chart());
  if (flag(p, "zero_omega")) {
    e.weyl->omega = {};
    e.checks = {chk("einstein_weyl", 1e-2L, false)};
  } else {
    e.checks = {chk("toda", 1e-8L), chk("einstein_weyl", 1e-5L)};
  }
  return e;
}

inline CatalogEntry make_dkp(const json& p) {
  check_keys(p, {"zero_omega"});
  CatalogEntry e;
  e.summary = "dKP u = -x/t with its Lorentzian Einstein-Weyl structure";
  e.pde = PdeKind::DKP;
  e.u = models::dkp_rational();
  e.weyl = dispersionless_ew(Dispersionless::DKP, e.u, models::dkp_chart());
  if (flag(p, "zero_omega")) {
    // the metric dy^2 - 4 dx dt + 4 (x/t) dt^2 is flat, so omega = 0 also passes
    e.weyl->omega = {};
    e.checks = {chk("einstein_weyl", 1e-2L, true)};
  } else {
    e.checks = {chk("dkp", 1e-8L), chk("einstein_weyl", 1e-5L)};
  }
  return e;
}

inline CatalogEntry make_nahm_su2_pole(const json& p) {
  check_keys(p, {"perturb"});
  CatalogEntry e;
  const Real eps = num(p, "perturb", 0, 0, 0.5L);
  e.summary = "su(2) Nahm pole solution Phi_i = -e_i / r";
  NahmField nf = models::nahm_su2_pole();
  if (eps != 0) {
    auto f = nf.analytic;
    nf.analytic = [f, eps](Real r) {
      Triple t = f(r);
      t[0] *= (1 + eps);
      return t;
    };
  }
  e.nahm = nf;
  e.r_range = {0.5L, 2};
  if (eps != 0) e.checks = {chk("nahm", 1e-8L, false), chk("lax", 1e-3L, false)};
  else e.checks = {chk("nahm", 1e-12L), chk("lax", 1e-7L)};
  return e;
}

inline CatalogEntry make_euler_top(const json& p) {
  check_keys(p, {"f1", "f2", "f3"});
  CatalogEntry e;
  e.summary = "Euler top: su(2) Nahm field Phi_i = f_i e_i";
  e.euler_f0 = Vec3(num(p, "f1", 0.6L, -2, 2), num(p, "f2", 0.4L, -2, 2), num(p, "f3", 0.3L, -2, 2));
  e.r_range = {0, 1};
  e.checks = {chk("euler_drift", 1e-8L)};
  return e;
}

inline CatalogEntry make_riccati(RiccatiType t, const json& p) {
  check_keys(p, {"beta", "perturb"});
  CatalogEntry e;
  const Real beta = num(p, "beta", 0.5L, 1e-3L, 10);
  const Real eps = num(p, "perturb", 0, 0, 1);
  e.summary = std::string("closed-form Riccati space of type ") + riccati_type_name(t);
  RiccatiSpace rs = closed_form(t, t == RiccatiType::D ? 0 : beta);
  if (eps != 0) {
    auto f = rs.closed;
    CMat3 D = CMat3::Zero();
    D(0, 0) = 1;
    D(1, 1) = -1;
    rs.closed = [f, eps, D](Real r) { return CMat3(f(r) + eps * D); };
  }
  e.riccati = rs;
  e.r_range = {1, 2};
  if (eps != 0) e.checks = {chk("riccati", 1e-8L, false)};
  else e.checks = {chk("riccati", 1e-8L), chk("classify", 0.5L)};
  if (t == RiccatiType::D && eps == 0) e.checks.push_back(chk("riccati_rk4", 1e-8L));
  return e;
}

inline CatalogEntry make_bianchi(const json& p) {
  check_keys(p, {"w1", "w2", "w3", "A1", "A2", "A3"});
  CatalogEntry e;
  e.summary = "diagonal Bianchi IX metric on a Darboux-Halphen background";
  models::BianchiIX b;
  b.s0.w = Vec3(num(p, "w1", 1.0L, 0.1L, 10), num(p, "w2", 1.2L, 0.1L, 10), num(p, "w3", 0.8L, 0.1L, 10));
  b.s0.A = Vec3(num(p, "A1", 0.3L, -2, 2), num(p, "A2", -0.1L, -2, 2), num(p, "A3", 0.2L, -2, 2));
  e.bianchi = b;
  e.metric4 = models::bianchi_ix_metric(b);
  e.r_range = {-0.2L, 0.2L};
  e.checks = {chk("selfdual", 1e-4L, true, {3, 2, 3, 2}), chk("halphen", 1e-8L)};
  return e;
}

inline CatalogEntry make_ewggs(const json& p) {
  check_keys(p, {"family", "h"});
  CatalogEntry e;
  const std::string fam = choice(p, "family", "ewgs", {"ewgs", "hcrtoda"});
  const std::string h = choice(p, "h", "z", {"1", "z"});
  e.summary = "geodesic generalized symmetry over the round sphere (" + fam + ", h = " + h + ")";
  if (fam == "ewgs") {
    e.hitchin = models::ewgs_hitchin(holomorphic(h));
    e.hitchin_chart = models::ewgs_hitchin_chart(holomorphic(h));
  } else {
    e.hitchin = models::hcrtoda_hitchin(holomorphic(h));
    e.hitchin_chart = models::hcrtoda_hitchin_chart();
  }
  e.weyl = ew_from_sv_hitchin(*e.hitchin, e.hitchin_chart);
  HyperCRData d;
  d.kappa_hat = kappa_hat_from_hitchin(*e.hitchin);
  e.hypercr = d;
  e.checks = {chk("spinor_vortex", 1e-8L), chk("hitchin", 1e-8L), chk("einstein_weyl", 1e-5L), chk("hypercr", 1e-5L)};
  return e;
}

inline CatalogEntry make_sdiff_flat(const json& p) {
  check_keys(p, {});
  CatalogEntry e;
  e.summary = "SDiff(S^2) Nahm field from the rotation Hamiltonians, F = -x / r";
  e.sdiff = models::sdiff_rotation();
  e.sdiff_chart = models::sdiff_chart();
  e.diff_nahm = hamiltonian_vector_fields(*e.sdiff);
  e.weyl = ew_from_riccati_nahm(*e.diff_nahm, e.sdiff_chart);
  e.checks = {chk("sdiff_nahm", 1e-8L), chk("kappa", 1e-10L), chk("einstein_weyl", 1e-5L)};
  return e;
}

using Maker = CatalogEntry (*)(const json&);

inline const std::map<std::string, Maker>& registry() {
  static const std::map<std::string, Maker> r = {
      {"flat3", make_flat3},
      {"flat4", make_flat4},
      {"gibbons_hawking", make_gibbons_hawking},
      {"ewgs", make_ewgs},
      {"hcrtoda", make_hcrtoda},
      {"affine_hitchin", make_affine_hitchin},
      {"toda_log_linear", make_toda},
      {"dkp_rational", make_dkp},
      {"nahm_su2_pole", make_nahm_su2_pole},
      {"euler_top", make_euler_top},
      {"riccati_D", [](const json& p) { return make_riccati(RiccatiType::D, p); }},
      {"riccati_N", [](const json& p) { return make_riccati(RiccatiType::N, p); }},
      {"riccati_III", [](const json& p) { return make_riccati(RiccatiType::III, p); }},
      {"bianchi_ix_halphen", make_bianchi},
      {"ewggs", make_ewggs},
      {"sdiff_flat", make_sdiff_flat},
  };
  return r;
}

}  // namespace detail

inline std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::registry()) out.push_back(k);
  return out;
}

inline CatalogEntry catalog_get(const std::string& name, const json& params = json::object()) {
  const auto& r = detail::registry();
  auto it = r.find(name);
  if (it == r.end()) throw Error(Errc::UnknownEntry, "no catalog entry '" + name + "'");
  CatalogEntry e = it->second(params.is_null() ? json::object() : params);
  e.name = name;
  e.params = params.is_null() ? json::object() : params;
  return e;
}

// ---------- running checks ----------

inline const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> k = {
      "einstein_weyl", "selfdual", "hypercr", "toda", "dkp", "mn_frame", "hyperkahler", "nahm", "lax",
      "riccati", "riccati_rk4", "classify", "halphen", "euler_drift", "kappa", "sdiff_nahm", "hitchin",
      "spinor_vortex", "bogomolny", "jones_tod"};
  return k;
}

namespace detail {

inline std::vector<int> default_grid(const std::string& kind, int dim) {
  if (kind == "nahm" || kind == "riccati" || kind == "riccati_rk4" || kind == "classify" || kind == "halphen" ||
      kind == "euler_drift")
    return {11};
  if (kind == "lax") return {5, 4};
  if (kind == "spinor_vortex") return {5, 5};
  return std::vector<int>(dim, dim == 4 ? 3 : 4);
}

inline std::vector<Real> linspace(std::pair<Real, Real> r, int n) {
  std::vector<Real> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? (r.first + r.second) / 2 : r.first + (r.second - r.first) * i / (n - 1));
  return out;
}

template <class F>
VerificationReport sample_report(const std::string& kind, const GridSpec& g, Real tol, const std::vector<Vec>& pts,
                                 F&& f) {
  const auto vals = parallel_eval(pts, f);
  return make_report(kind, g, tol, pts, vals, 0);
}

inline std::vector<Vec> as_points(const std::vector<Real>& xs) {
  std::vector<Vec> pts;
  for (Real x : xs) pts.push_back(make_vec({x}));
  return pts;
}

template <class T>
const T& need(const std::optional<T>& o, const std::string& kind) {
  if (!o) throw Error(Errc::BadParams, "entry has no data for check '" + kind + "'");
  return *o;
}

// Lax spectral points chosen away from the base locus of the closed forms used here.
inline std::vector<Complex> lax_zetas(int n) {
  const std::vector<Complex> all = {{0.3L, 0.2L}, {-0.5L, 0.7L}, {1.1L, -0.4L}, {0.2L, -1.3L}, {-0.9L, -0.6L}, {1.7L, 0.9L}};
  if (n < 1 || n > static_cast<int>(all.size())) throw Error(Errc::BadParams, "lax grid uses 1..6 spectral points");
  return {all.begin(), all.begin() + n};
}

// ω, metric and monopole data of build-then-reduce, compared with the input in the same gauge.
inline Real jones_tod_point(const WeylStructure& w, const Monopole& m, const JonesTod& jt, const Vec& b) {
  const Mat g0 = w.metric.g(b), g1 = jt.weyl.metric.g(b);
  const Vec w0 = w.omega ? w.omega(b) : Vec(Vec::Zero(3));
  const Vec w1 = jt.weyl.omega(b);
  const Vec A0 = m.A ? m.A(b, 0) : Vec(Vec::Zero(3));
  const Real scale = std::max<Real>(1, g0.cwiseAbs().maxCoeff());
  Real r = (g1 - g0).cwiseAbs().maxCoeff() / scale;
  r = std::max(r, (w1 - w0).cwiseAbs().maxCoeff());
  r = std::max(r, std::abs(jt.monopole.Phi(b, 0) - m.Phi(b, 0)));
  r = std::max(r, (jt.monopole.A(b, 0) - A0).cwiseAbs().maxCoeff());
  return r;
}

}  // namespace detail

inline VerificationReport run_check(const CatalogEntry& e, const std::string& kind, Real tol,
                                    std::vector<int> grid = {}, const FDConfig& cfg = {}) {
  using namespace detail;
  auto dim_of = [&]() -> int {
    if (kind == "selfdual" || kind == "mn_frame" || kind == "hyperkahler") return 4;
    if (kind == "sdiff_nahm" || kind == "kappa" || kind == "hitchin") return 3;
    return e.weyl ? e.weyl->metric.chart.dim : 3;
  };
  if (grid.empty()) grid = default_grid(kind, dim_of());
  const GridSpec g{grid};
  if (kind == "einstein_weyl") return verify_geometry(GeometryKind::EinsteinWeyl, need(e.weyl, kind), g, tol, cfg);
  if (kind == "selfdual") return verify_geometry(GeometryKind::Selfdual, need(e.metric4, kind), g, tol, cfg);
  if (kind == "hypercr") return hypercr_check(need(e.weyl, kind), need(e.hypercr, kind), g, tol, cfg);
  if (kind == "toda" || kind == "dkp") {
    const PdeKind pk = kind == "toda" ? PdeKind::Toda : PdeKind::DKP;
    if (!e.pde || *e.pde != pk) throw Error(Errc::BadParams, "entry has no data for check '" + kind + "'");
    return pde_residual(pk, e.u.eval, need(e.weyl, kind).metric.chart, g, tol, cfg);
  }
  if (kind == "mn_frame") return pde_residual(need(e.frame, kind), g, tol, cfg);
  if (kind == "hyperkahler") {
    const FrameField4& ff = need(e.frame, kind);
    if (!e.volume) throw Error(Errc::BadParams, "entry has no volume form");
    int skipped = 0;
    const auto pts = grid_points(ff.chart, g, cfg, &skipped, 1);
    const auto vals = parallel_eval(pts, [&](const Vec& p) {
      const auto r = hypercomplex_from_frame(ff, p, e.volume, cfg, tol);
      return std::max({r.lie[0], r.lie[1], r.lie[2], r.lie[3]});
    });
    return make_report(kind, g, tol, pts, vals, skipped);
  }
  if (kind == "nahm" || kind == "lax") {
    const NahmField& nf = need(e.nahm, kind);
    if (kind == "nahm") {
      const auto pts = as_points(linspace(e.r_range, grid.at(0)));
      return sample_report(kind, g, tol, pts, [&](const Vec& p) { return nahm_residual(nf, p(0), cfg.h); });
    }
    if (grid.size() != 2) throw Error(Errc::BadParams, "lax grid is [n_r, n_zeta]");
    std::vector<Vec> pts;
    for (Real r : linspace(e.r_range, grid[0]))
      for (Complex z : lax_zetas(grid[1])) pts.push_back(make_vec({r, z.real(), z.imag()}));
    return sample_report(kind, g, tol, pts,
                         [&](const Vec& p) { return lax_residual_at(nf, Complex(p(1), p(2)), p(0), cfg.h); });
  }
  if (kind == "riccati" || kind == "classify" || kind == "riccati_rk4") {
    const RiccatiSpace& rs = need(e.riccati, kind);
    const auto pts = as_points(linspace(e.r_range, grid.at(0)));
    if (kind == "riccati")
      return sample_report(kind, g, tol, pts, [&](const Vec& p) { return riccati_residual(rs, p(0)); });
    if (kind == "classify")
      return sample_report(kind, g, tol, pts,
                           [&](const Vec& p) { return Real(analyze(rs.at(p(0))).type == rs.type ? 0 : 1); });
    const int steps = 2000;
    const RiccatiSpace num = solve(rs.at(e.r_range.first), e.r_range, steps);
    std::vector<Vec> node_pts;
    for (int k = 0; k < grid.at(0); ++k) {
      const int i = grid[0] == 1 ? steps : k * steps / (grid[0] - 1);
      node_pts.push_back(make_vec({num.r[i]}));
    }
    return sample_report(kind, g, tol, node_pts, [&](const Vec& p) { return (num.at(p(0)) - rs.at(p(0))).norm(); });
  }
  if (kind == "halphen") {
    const auto& b = need(e.bianchi, kind);
    const auto pts = as_points(linspace(e.r_range, grid.at(0)));
    return sample_report(kind, g, tol, pts, [&](const Vec& p) {
      const BianchiState s = b.at(p(0));
      const auto J = halphen_jet(s.A);
      // the integrated A must follow the Halphen flow; compare the FD derivative with the flow
      const Vec3 dA = fd1([&](Real t) { return Vec3(b.at(t).A); }, p(0), 1e-3L, 6);
      Real r = (dA - J[1]).cwiseAbs().maxCoeff();
      const Vec3 dw = fd1([&](Real t) { return Vec3(b.at(t).w); }, p(0), 1e-3L, 6);
      r = std::max(r, (dw - bianchi_rhs(s).w).cwiseAbs().maxCoeff());
      return r;
    });
  }
  if (kind == "euler_drift") {
    const Vec3 f0 = need(e.euler_f0, kind);
    const int steps = static_cast<int>(std::lround((e.r_range.second - e.r_range.first) / 1e-3L));
    const NahmField nf = solve_nahm(models::euler_top_initial(f0), closed_form(RiccatiType::Zero), su2_algebra(),
                                    e.r_range, steps);
    const Real i1 = f0(0) * f0(0) - f0(1) * f0(1), i2 = f0(1) * f0(1) - f0(2) * f0(2);
    std::vector<Vec> pts;
    for (int k = 0; k < grid.at(0); ++k) pts.push_back(make_vec({nf.r[grid[0] == 1 ? steps : k * steps / (grid[0] - 1)]}));
    return sample_report(kind, g, tol, pts, [&](const Vec& p) {
      const Vec3 f = models::euler_coefficients(nf.at(p(0)));
      return std::max(std::abs(f(0) * f(0) - f(1) * f(1) - i1), std::abs(f(1) * f(1) - f(2) * f(2) - i2));
    });
  }
  if (kind == "kappa" || kind == "sdiff_nahm") {
    const Chart& c = e.sdiff_chart;
    int skipped = 0;
    const auto pts = grid_points(c, g, cfg, &skipped, 1);
    std::vector<Real> vals;
    if (kind == "kappa") {
      const DiffNahm& dn = need(e.diff_nahm, kind);
      vals = parallel_eval(pts, [&](const Vec& p) { return std::abs(kappa_from_sdiff_nahm(dn, Vec3(p(0), p(1), p(2)), cfg).kappa); });
    } else {
      const HamiltonianNahm& hn = need(e.sdiff, kind);
      vals = parallel_eval(pts, [&](const Vec& p) { return nahm_residual_hamiltonian(hn, Vec3(p(1), p(2), p(0)), cfg.h); });
    }
    return make_report(kind, g, tol, pts, vals, skipped);
  }
  if (kind == "hitchin") {
    const HitchinField& hf = need(e.hitchin, kind);
    int skipped = 0;
    const auto pts = grid_points(e.hitchin_chart, g, cfg, &skipped, 1);
    const auto vals = parallel_eval(pts, [&](const Vec& p) {
      const auto r = hitchin_residual(hf, Vec3(p(0), p(1), p(2)), cfg.h);
      return std::max(r.first, r.second);
    });
    return make_report(kind, g, tol, pts, vals, skipped);
  }
  if (kind == "spinor_vortex") {
    const HitchinField& hf = need(e.hitchin, kind);
    if (grid.size() != 2) throw Error(Errc::BadParams, "spinor_vortex grid is [n_x, n_y]");
    int skipped = 0;
    const auto pts = grid_points(e.hitchin_chart, GridSpec{{grid[0], grid[1], 1}}, cfg, &skipped, 2);
    const auto vals = parallel_eval(pts, [&](const Vec& p) {
      const auto r = spinor_vortex_residual(hf.sv, p(0), p(1), cfg);
      return std::max({r[0], r[1], r[2]});
    });
    return make_report(kind, g, tol, pts, vals, skipped);
  }
  if (kind == "bogomolny" || kind == "jones_tod") {
    const WeylStructure& w = need(e.weyl, kind);
    const Monopole& m = need(e.monopole, kind);
    int skipped = 0;
    const auto pts = grid_points(w.metric.chart, g, cfg, &skipped);
    if (kind == "bogomolny") {
      const BogomolnyField bf = to_bogomolny(w, m);
      const auto vals = parallel_eval(pts, [&](const Vec& p) { return bogomolny_residual(bf, p, cfg); });
      return make_report(kind, g, tol, pts, vals, skipped);
    }
    const MetricField m4 = sd_from_ew_monopole(w, m, {-1, 1});
    const JonesTod jt = jones_tod_reduce(m4, 0, cfg);
    const auto vals = parallel_eval(pts, [&](const Vec& p) { return jones_tod_point(w, m, jt, p); });
    return make_report(kind, g, tol, pts, vals, skipped);
  }
  throw Error(Errc::BadParams, "unknown check kind '" + kind + "'");
}

struct CheckOutcome {
  ExpectedCheck expected;
  VerificationReport report;
  bool as_expected() const { return report.pass == expected.expect_pass; }
};

inline std::vector<CheckOutcome> run_expected_checks(const CatalogEntry& e, const FDConfig& cfg = {}) {
  std::vector<CheckOutcome> out;
  for (const auto& c : e.checks) out.push_back({c, run_check(e, c.kind, c.tol, c.grid, cfg)});
  return out;
}

}  // namespace ibg
