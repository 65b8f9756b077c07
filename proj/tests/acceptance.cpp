// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status counts failures that are not explained. A criterion whose only
// failing part is a known-unattainable clause prints FAIL with the reason and
// does not count.

#include "ibg/pipeline.hpp"
#include "oracles.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace ibg;
using namespace ibg::models;

namespace {

struct Outcome {
  bool pass = true;
  bool explained = false;  // failure is fully accounted for by an unattainable clause
  std::ostringstream msg;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [failed: " + what + "]";
    }
  }
};

std::string sci(Real v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2Le", v);
  return b;
}

VerificationReport check(const std::string& name, const json& params, const std::string& kind, Real tol,
                         std::vector<int> grid = {}) {
  return run_check(catalog_get(name, params), kind, tol, std::move(grid));
}

// 1. Riccati suite
void riccati_suite(Outcome& o) {
  const auto rk4 = check("riccati_D", {}, "riccati_rk4", 1e-8L, {21});
  o.require(rk4.pass, "type D closed form vs RK4");

  auto drift = [](const RiccatiSpace& tr) {
    const Complex d0 = analyze(tr.B.front()).disc;
    Real m = 0;
    for (const auto& B : tr.B) m = std::max(m, std::abs(analyze(B).disc - d0));
    return m;
  };
  const RiccatiSpace d_traj = solve(closed_form(RiccatiType::D).at(1), {1, 2}, 2000);
  CMat3 B0 = CMat3::Zero();
  B0(0, 0) = 0.3L; B0(1, 1) = -0.1L; B0(2, 2) = -0.2L;
  B0(0, 1) = B0(1, 0) = 0.15L;
  B0(1, 2) = B0(2, 1) = 0.05L;
  B0(0, 2) = B0(2, 0) = -0.07L;
  const RiccatiSpace i_traj = solve(B0, {1, 2}, 2000);
  const Real dd = std::max(drift(d_traj), drift(i_traj));
  o.require(dd < 1e-9L, "discriminant drift");
  o.require(analyze(B0).type == RiccatiType::I, "type I initial data");

  Real ident = 0;
  for (int k = 1; k < 10; ++k) {
    const Real r = 1 + Real(k) / 10;
    const Complex dx = fd1([&](Real s) { return analyze(i_traj.at(s)).x; }, r, 1e-3L, 6);
    const RiccatiInvariants inv = analyze(i_traj.at(r));
    // c^2 = -4 (y^2 - x^3) / 27
    const Complex c2 = Real(-4) * (inv.y * inv.y - inv.x * inv.x * inv.x) / Real(27);
    ident = std::max(ident, std::abs(dx * dx - Real(4) * inv.x * inv.x * inv.x + Real(27) * c2));
  }
  o.require(ident < 1e-7L, "type I identity");
  o.msg << "rk4 " << sci(rk4.max) << ", disc drift " << sci(dd) << ", (Dx)^2-4x^3+27c^2 " << sci(ident);
}

// 2. Halphen / Chazy
void halphen_suite(Outcome& o) {
  Real worst = 0, link = 0;
  std::vector<Real> ts;
  for (int k = 0; k <= 10; ++k) ts.push_back(1 + Real(k) / 10);
  for (Real t0 : {Real(0), Real(-0.5L), Real(0.4L)}) {
    Jet1 A{[t0](Real t) { return 1 / (t - t0); }, [t0](Real t) { return -1 / ((t - t0) * (t - t0)); }, {}, {}};
    Jet1 a{[t0](Real t) { return -2 / (t - t0); }, [t0](Real t) { return 2 / ((t - t0) * (t - t0)); },
           [t0](Real t) { return -4 / std::pow(t - t0, 3); }, [t0](Real t) { return 12 / std::pow(t - t0, 4); }};
    const auto r = halphen_chazy_residual({A, A, A}, a, ts);
    worst = std::max({worst, r.halphen, r.chazy, r.linkage});
  }
  o.require(worst < 1e-10L, "1/t family");
  // a = -(2/3) sum A_i along an integrated Halphen trajectory solves Chazy
  const BianchiIX b;
  for (int k = 0; k <= 8; ++k) {
    const Real t = -0.2L + Real(k) / 20;
    const auto J = halphen_jet(b.at(t).A);
    Real a[4];
    for (int d = 0; d < 4; ++d) a[d] = -Real(2) / 3 * J[d].sum();
    link = std::max(link, std::abs(a[3] - (6 * a[0] * a[2] - 9 * a[1] * a[1])));
  }
  o.require(link < 1e-10L, "linkage to Chazy");
  const auto flow = check("bianchi_ix_halphen", {}, "halphen", 1e-8L);
  o.require(flow.pass, "integrated Halphen flow");
  o.msg << "1/t " << sci(worst) << ", Chazy via linkage " << sci(link) << ", flow " << sci(flow.max);
}

// 3. Nahm suite
void nahm_suite(Outcome& o) {
  const auto pole = check("nahm_su2_pole", {}, "nahm", 1e-12L);
  const auto euler = check("euler_top", {}, "euler_drift", 1e-8L);
  const auto lax0 = check("nahm_su2_pole", {}, "lax", 1e-7L);
  const auto lax_bad = check("nahm_su2_pole", {{"perturb", 0.01}}, "lax", 1e-3L);
  o.require(pole.pass, "pole residual");
  o.require(euler.pass, "Euler drift");
  o.require(lax0.pass, "Lax on pole solution");
  o.require(lax_bad.max > 1e-3, "Lax under perturbation");

  // B != 0: type D background in both gauges
  const MatrixAlgebra su2 = su2_algebra();
  Triple p0;
  for (int i = 0; i < 3; ++i) p0[i] = su2.basis[i] * Real(0.3L + 0.2L * i) + su2.basis[(i + 1) % 3] * Real(0.1L);
  Real lax_b = 0, lax_b_bad = 1e300L;
  const std::vector<Complex> zs = {{0.3L, 0.4L}, {-1.2L, 0.1L}, {0.7L, -0.5L}};
  for (Real a : {Real(0), Real(1) / 3}) {
    const RiccatiSpace rs = a == 0 ? closed_form(RiccatiType::D) : to_projective(closed_form(RiccatiType::D), a);
    const NahmField nf = solve_nahm(p0, rs, su2, {1.0L, 1.5L}, 500);
    NahmField bad = nf;
    for (auto& t : bad.phi) t[0] *= Real(1.01L);
    for (Complex z : zs)
      for (Real r : {nf.r[150], nf.r[250], nf.r[350]}) {
        lax_b = std::max(lax_b, lax_residual_at(nf, z, r));
        lax_b_bad = std::min(lax_b_bad, lax_residual_at(bad, z, r));
      }
  }
  o.require(lax_b < 1e-7L, "Lax on B != 0 solutions");
  o.require(lax_b_bad > 1e-3L, "Lax on perturbed B != 0 solutions");

  // B = 0 generators against the standard Lax pair
  const NahmField pf = catalog_get("nahm_su2_pole").nahm.value();
  Real gen = 0, std_eq = 0;
  for (Real r : {Real(1.1L), Real(1.5L), Real(1.9L)}) {
    const Triple P = pf.at(r);
    const Triple T = oracle::relabel(P);
    for (Complex z : zs) {
      const LaxGenerators g = lax_generators(CMat3::Zero(), P, z);
      gen = std::max({gen, std::abs(g.dz1), std::abs(g.dz2),
                      (g.phi1 - Real(0.5L) * oracle::std_lax_L(T, -z)).norm(),
                      (g.phi2 + oracle::std_lax_M(T, -z)).norm()});
      const CMat dL = fd1([&](Real s) { return oracle::std_lax_L(oracle::relabel(pf.at(s)), z); }, r, 1e-3L, 6);
      const CMat L = oracle::std_lax_L(T, z), M = oracle::std_lax_M(T, z);
      std_eq = std::max(std_eq, (dL - (L * M - M * L)).norm());
    }
  }
  o.require(gen < 1e-12L, "B = 0 generators vs standard pair");
  o.require(std_eq < 1e-9L, "standard Lax equation");
  o.msg << "pole " << sci(pole.max) << ", Euler drift " << sci(euler.max) << ", Lax " << sci(std::max<Real>(lax0.max, lax_b))
        << " (perturbed >= " << sci(std::min<Real>(lax_bad.max, lax_b_bad)) << "), generators vs standard " << sci(gen);
}

// 4. Einstein-Weyl verification with convergence
void einstein_weyl_suite(Outcome& o) {
  struct Inst {
    const char* label;
    const char* name;
    json params;
  };
  const std::vector<Inst> inst = {{"ewgs h=1", "ewgs", {{"h", "1"}}},       {"ewgs h=z", "ewgs", {{"h", "z"}}},
                                  {"hcrtoda h=1", "hcrtoda", {{"h", "1"}}}, {"hcrtoda h=z", "hcrtoda", {{"h", "z"}}},
                                  {"toda log z", "toda_log_linear", {}},    {"dkp -x/t", "dkp_rational", {}}};
  Real worst = 0, min_order = 1e9;
  std::vector<std::string> unattainable;
  bool other_fail = false;
  for (const auto& in : inst) {
    const CatalogEntry e = catalog_get(in.name, in.params);
    const WeylStructure& w = *e.weyl;
    const auto rep = verify_geometry(GeometryKind::EinsteinWeyl, w, GridSpec{{4, 4, 4}}, 1e-5L, FDConfig{1e-3L, 4});
    FDConfig coarse{4e-3L, 4};
    const auto pts = grid_points(w.metric.chart, GridSpec{{4, 4, 4}}, coarse);
    const auto conv = convergence_study(
        [&](Real h) {
          Real m = 0;
          for (const Vec& p : pts) m = std::max(m, einstein_weyl_residual(w, p, FDConfig{h, 4}));
          return m;
        },
        {4e-3L, 2e-3L, 1e-3L});
    worst = std::max<Real>(worst, rep.max);
    min_order = std::min(min_order, conv.order);
    if (!rep.pass || conv.order < 3.5L || conv.non_monotone) {
      other_fail = true;
      o.require(false, std::string(in.label) + " residual/order");
    }
    json zp = in.params;
    zp["zero_omega"] = true;
    const auto zero = check(in.name, zp, "einstein_weyl", 1e-2L);
    if (zero.pass) {
      // the zeroed structure is itself Einstein-Weyl: omega was zero or exact on a flat metric
      unattainable.push_back(std::string(in.label) + " (" + sci(zero.max) + ")");
      o.require(false, std::string("zeroing omega in ") + in.label);
    }
  }
  o.explained = !other_fail && !unattainable.empty();
  o.msg << "max |r0| " << sci(worst) << ", min order " << std::fixed;
  o.msg.precision(2);
  o.msg << static_cast<double>(min_order) << std::defaultfloat;
  if (!unattainable.empty()) {
    o.msg << "; unattainable clause, the zeroed structure stays Einstein-Weyl for:";
    for (const auto& s : unattainable) o.msg << " " << s;
  }
}

// 5. Selfdual verification
void selfdual_suite(Outcome& o) {
  const MetricField gh = gibbons_hawking(gh_single());
  const CurvatureBundle cb = curvature(WeylStructure{gh, {}}, make_vec({0.1L, 0.7L, -0.4L, 0.9L}), FDConfig{});
  o.require(cb.wminus_norm < 1e-6L, "GH |W-|");
  o.require(cb.riemann_norm > 1e-2L, "GH nontrivial");
  o.require(cb.wplus_norm > 1e-2L, "orientation: W+ nonzero");
  const auto bump = verify_geometry(GeometryKind::Selfdual, bump_flat(), GridSpec{{3, 3, 3, 3}}, 1e-3L);
  o.require(!bump.pass, "bump-perturbed flat metric must fail");
  const auto flipped = check("gibbons_hawking", {{"flip_orientation", true}}, "selfdual", 1e-6L);
  o.require(!flipped.pass, "flipped orientation must fail");
  o.msg << "GH |W-| " << sci(cb.wminus_norm) << ", |W+| " << sci(cb.wplus_norm) << ", |R| " << sci(cb.riemann_norm)
        << ", bump " << sci(bump.max) << " > 1e-3";
}

// 6. Jones-Tod round trip
void jones_tod_suite(Outcome& o) {
  Real rt = 0, sd = 0;
  int pairs = 0;
  for (const auto& name : catalog_names()) {
    const CatalogEntry e = catalog_get(name);
    if (!e.weyl || !e.monopole) continue;
    ++pairs;
    const auto r = run_check(e, "jones_tod", 1e-8L);
    o.require(r.pass, name + " round trip");
    rt = std::max<Real>(rt, r.max);
    const MetricField m4 = sd_from_ew_monopole(*e.weyl, *e.monopole, {-1, 1});
    const auto s = verify_geometry(GeometryKind::Selfdual, m4, GridSpec{{3, 3, 3, 3}}, 1e-5L);
    o.require(s.pass, name + " selfdual");
    sd = std::max<Real>(sd, s.max);
  }
  o.require(pairs >= 2, "at least two EW+monopole pairs");
  o.msg << pairs << " pairs, round trip " << sci(rt) << ", built |W-| " << sci(sd);
}

// 7. Hypercomplex
void hypercomplex_suite(Outcome& o) {
  const FrameField4 ff = ajs_frame();
  const auto mn = pde_residual(ff, GridSpec{{2, 3, 3, 3}}, 1e-7L);
  const auto sd = verify_geometry(GeometryKind::Selfdual, ff.metric(), GridSpec{{2, 3, 3, 3}}, 1e-5L);
  o.require(mn.pass, "Mason-Newman");
  o.require(sd.pass, "|W-|");
  const VolumeDensity haar = [](const Vec& x) { return std::sin(x(1)); };
  const VolumeDensity one = [](const Vec&) { return Real(1); };
  bool flags_ok = true;
  for (const Vec& p : {make_vec({1.2L, 1.2L, 0.3L, 0.2L}), make_vec({0.9L, 0.6L, -0.4L, 0.7L})}) {
    flags_ok = flags_ok && hypercomplex_from_frame(ff, p, haar).hyperkahler;
    flags_ok = flags_ok && !hypercomplex_from_frame(ff, p, one).hyperkahler;
  }
  const auto flat = check("flat4", {}, "hyperkahler", 1e-8L);
  o.require(flags_ok && flat.pass, "hyperkahler flag");
  o.msg << "Mason-Newman " << sci(mn.max) << ", |W-| " << sci(sd.max) << ", hyperkahler flag "
        << (flags_ok ? "correct" : "wrong");
}

// 8. hyperCR
void hypercr_suite(Outcome& o) {
  const auto k = check("sdiff_flat", {}, "kappa", 1e-10L);
  o.require(k.pass, "kappa");
  Real gt = 0;
  const std::vector<std::pair<std::string, json>> fam = {
      {"ewgs", {{"h", "1"}}},    {"ewgs", {{"h", "z"}}},    {"hcrtoda", {{"h", "1"}}},
      {"hcrtoda", {{"h", "z"}}}, {"affine_hitchin", {}},    {"ewggs", {{"family", "hcrtoda"}}}};
  for (const auto& [n, p] : fam) {
    const auto r = check(n, p, "hypercr", 1e-5L);
    o.require(r.pass, n + " Gauduchon-Tod");
    gt = std::max<Real>(gt, r.max);
  }
  o.msg << "kappa " << sci(k.max) << ", Gauduchon-Tod " << sci(gt);
}

// 9. Hodograph / framings
void hodograph_suite(Outcome& o) {
  const FHZResult t = fhz_consistency(toda_framing(), 0.3L, 0);
  Eigen::SelfAdjointEigenSolver<Mat3> es(t.B.real());
  const Vec3 ev = es.eigenvalues();
  const Real eig = std::max({std::abs(ev(0) + Real(1) / 3), std::abs(ev(1) - Real(1) / 6), std::abs(ev(2) - Real(1) / 6),
                             t.B.imag().cwiseAbs().maxCoeff()});
  o.require(eig < 1e-10L, "Toda B eigenvalues");
  Real fr = 0;
  for (Real u : {Real(-0.4L), Real(0.3L), Real(0.8L)})
    for (const auto& th : {toda_framing(), dkp_framing()}) fr = std::max(fr, fhz_consistency(th, u, 0).residual);
  o.require(fr < 1e-10L, "framings C-equation");

  int nonvanishing = 0;
  Real base = 0;
  bool together = true;
  for (const auto& f : oracle::hodograph_families()) {
    for (Real eps : {Real(0), Real(0.01L), Real(0.1L)}) {
      HodographBundle hb = toda_hodograph();
      const auto x0 = hb.x;
      const auto dx = f.dx;
      hb.x = [x0, dx, eps](const Vec3& y) { return Vec3(x0(y) + eps * dx(y)); };
      Real n = 0, v = 0;
      for (Real p : {Real(-0.5L), Real(0.1L), Real(0.6L)})
        for (Real q : {Real(-0.4L), Real(0.3L)})
          for (Real tt : {Real(-0.3L), Real(0.2L)}) {
            const auto r = hodograph_check(hb, Real(1) / 3, toda_riccati_B, Vec3(p, q, tt));
            n = std::max(n, r.nahm);
            v = std::max(v, r.volume);
          }
      if (eps == 0) base = std::max({base, n, v});
      const bool nz = n > 1e-8L, vz = v > 1e-8L;
      if (nz != vz) {
        together = false;
        o.require(false, f.name + " residuals disagree");
      }
      if (eps > 0 && nz) ++nonvanishing;
    }
  }
  const int families = static_cast<int>(oracle::hodograph_families().size());
  o.require(together && families >= 10 && base < 1e-10L && nonvanishing > 0, "hodograph iff");
  o.msg << "Toda B eigenvalues " << sci(eig) << ", C-equation " << sci(fr) << ", " << families
        << " perturbation families agree (" << nonvanishing / 2 << " non-solutions)";
}

// 10. Cross-path consistency
void cross_path_suite(Outcome& o) {
  const WeylStructure rn = ew_from_riccati_nahm(hamiltonian_vector_fields(toda_hamiltonian()), tod_chart());
  Real dg = 0, dw = 0;
  ScalarField u;
  u.eval = [](const Vec& p) { return std::log(p(2)); };
  const WeylStructure td = dispersionless_ew(Dispersionless::Toda, u, toda_chart());
  for (Real r : {Real(-0.5L), Real(0), Real(0.3L)})
    for (Real p : {Real(-0.5L), Real(0.4L)})
      for (Real q : {Real(-0.3L), Real(0.2L)}) {
        const Vec x = make_vec({r, p, q});
        Mat J = Mat::Zero(3, 3);
        J(0, 1) = 1;
        J(1, 2) = 1;
        J(2, 0) = std::exp(r);
        const Vec y = make_vec({p, q, std::exp(r)});
        const Mat gs = J.transpose() * td.metric.g(y) * J;
        const Vec ws = J.transpose() * td.omega(y);
        const auto ref = oracle::toda_log_pullback(x);
        dg = std::max({dg, (rn.metric.g(x) - gs).cwiseAbs().maxCoeff(), (gs - ref.g).cwiseAbs().maxCoeff()});
        dw = std::max({dw, (rn.omega(x) - ws).cwiseAbs().maxCoeff(), (ws - ref.omega).cwiseAbs().maxCoeff()});
      }
  o.require(dg < 1e-10L && dw < 1e-10L, "matched structures");
  o.msg << "metric " << sci(dg) << ", omega " << sci(dw) << " under (r, p, q) -> (p, q, e^r)";
}

// 11. CLI pipelines
std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void cli_suite(Outcome& o) {
  namespace fs = std::filesystem;
  const fs::path cfgdir = fs::path(IBG_SOURCE_DIR) / "configs";
  const fs::path work = fs::temp_directory_path() / "ibg-acceptance";
  fs::remove_all(work);
  std::ostringstream log;
  PipelineOptions opt;
  opt.timestamp = false;
  opt.log = &log;
  const json all = load_json_file((cfgdir / "all-checks.json").string());
  const json neg = load_json_file((cfgdir / "negative-controls.json").string());
  opt.output_dir = (work / "a").string();
  const auto r1 = run_pipeline(all, opt);
  opt.output_dir = (work / "b").string();
  const auto r2 = run_pipeline(all, opt);
  opt.output_dir = (work / "n").string();
  const auto rn = run_pipeline(neg, opt);
  o.require(r1.exit_code == 0, "all-checks exit 0 (got " + std::to_string(r1.exit_code) + ")");
  o.require(rn.exit_code == 1, "negative-controls exit 1 (got " + std::to_string(rn.exit_code) + ")");
  bool same = r1.artifacts.size() == r2.artifacts.size() && !r1.artifacts.empty();
  for (size_t i = 0; same && i < r1.artifacts.size(); ++i)
    same = fs::path(r1.artifacts[i]).filename() == fs::path(r2.artifacts[i]).filename() &&
           slurp(r1.artifacts[i]) == slurp(r2.artifacts[i]);
  o.require(same, "byte-reproducible reports");
  o.msg << "all-checks exit " << r1.exit_code << ", negative-controls exit " << rn.exit_code << ", "
        << r1.artifacts.size() << " artifacts reproduced " << (same ? "byte-for-byte" : "with differences");
  fs::remove_all(work);
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    void (*run)(Outcome&);
  };
  const Criterion crit[] = {
      {"Riccati suite", riccati_suite},
      {"Halphen/Chazy", halphen_suite},
      {"Nahm suite", nahm_suite},
      {"Einstein-Weyl verification", einstein_weyl_suite},
      {"Selfdual verification", selfdual_suite},
      {"Jones-Tod round trip", jones_tod_suite},
      {"Hypercomplex", hypercomplex_suite},
      {"hyperCR", hypercr_suite},
      {"Hodograph/framings", hodograph_suite},
      {"Cross-path consistency", cross_path_suite},
      {"CLI pipelines", cli_suite},
  };
  int passed = 0, unexplained = 0, n = 0;
  for (const auto& c : crit) {
    ++n;
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.explained = false;
      o.failures += std::string(" [exception: ") + e.what() + "]";
    }
    if (o.pass) ++passed;
    else if (!o.explained) ++unexplained;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, c.title, (o.msg.str() + o.failures).c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria pass, %d unexplained failure(s)\n", passed, n, unexplained);
  return unexplained == 0 ? 0 : 1;
}
