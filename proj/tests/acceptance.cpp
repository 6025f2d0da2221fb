// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "toric/checks.hpp"

using namespace toric;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL",
              what.c_str());
  if (!pass) ++failures;
}

Eigen::VectorXi weight1(int k) {
  Eigen::VectorXi v(1);
  v << k;
  return v;
}

PotentialSpec round_sphere() {
  return PotentialSpec::guillemin(Polytope::named("interval"), 0.5);
}

Polynomial monomial1(int e, double c = 1.0) {
  Polynomial p(1);
  p.add_term({e}, c);
  return p;
}

Direction raw(Polynomial p, std::string id) {
  Direction d;
  d.id = std::move(id);
  d.delta_s = std::move(p);
  return d;
}

char buf[256];

void criterion_1() {
  PotentialSpec spec = round_sphere();
  SolveOptions opts;
  opts.degree = 16;
  bool pass = true;
  double l0 = solve_first_eigen(spec, weight1(0), opts).lambda1;
  pass &= std::abs(l0 - 2.0) <= 1e-7;
  double worst = std::abs(l0 - 2.0);
  for (int k = 1; k <= 3; ++k) {
    double lk = solve_first_eigen(spec, weight1(k), opts).lambda1;
    double target = k * (k + 1.0);
    double tol = (k % 2 == 0) ? 1e-6 : 1e-5;
    pass &= std::abs(lk - target) <= tol;
    worst = std::max(worst, std::abs(lk - target));
  }
  std::snprintf(buf, sizeof buf,
                "round-sphere spectrum k=0..3, worst error %.2e", worst);
  report(1, pass, buf);
}

void criterion_2() {
  PotentialSpec spec = PotentialSpec::guillemin(Polytope::named("interval"), 1.0);
  SolveOptions opts;
  opts.degree = 16;
  double l = solve_first_eigen(spec, weight1(0), opts).lambda1;
  std::snprintf(buf, sizeof buf,
                "bare-normalization interval lambda1 = %.9f (target 1)", l);
  report(2, std::abs(l - 1.0) <= 1e-7, buf);
}

void criterion_3() {
  PotentialSpec spec = PotentialSpec::guillemin(Polytope::named("square2"), 0.5);
  SolveOptions opts;
  opts.degree = 12;
  EigenSolution E = solve_first_eigen(spec, Eigen::VectorXi::Zero(2), opts);
  bool pass = std::abs(E.lambda1 - 2.0) <= 1e-5 && E.cluster_dimension() == 2;
  std::snprintf(buf, sizeof buf,
                "product square lambda1 = %.7f, cluster dimension %d",
                E.lambda1, E.cluster_dimension());
  report(3, pass, buf);
}

void criterion_4() {
  PotentialSpec spec = round_sphere();
  SolveOptions opts;
  opts.degree = 16;
  EigenSolution E0 = solve_first_eigen(spec, weight1(0), opts);
  double g0 = derivative_quadform(spec, E0, raw(monomial1(2), "x^2"))(0, 0);
  double fd0 = fd_lambda(spec, weight1(0), monomial1(2), 1e-4, opts);
  EigenSolution E1 = solve_first_eigen(spec, weight1(1), opts);
  double g1 = derivative_quadform(spec, E1, raw(monomial1(2), "x^2"))(0, 0);
  bool pass = std::abs(g0 + 16.0 / 5.0) <= 1e-8 &&
              std::abs(fd0 - g0) <= 1e-5 * std::abs(g0) &&
              std::abs(g1 - 8.0 / 5.0) <= 1e-4;
  std::snprintf(buf, sizeof buf,
                "variation oracle G0 = %.6f (fd %.6f), G1 = %.6f", g0, fd0, g1);
  report(4, pass, buf);
}

void criterion_5() {
  PotentialSpec spec = round_sphere();
  SolveOptions opts;
  opts.degree = 16;
  EigenSolution E = solve_first_eigen(spec, weight1(0), opts);
  Direction flat =
      boundary_flat_direction(spec.polytope, Polynomial::constant(1, 1.0));
  double pre = derivative_quadform(spec, E, flat)(0, 0);
  double post = derivative_post_ibp(spec, E, flat)(0, 0);

  // independent grid quadrature of Q(f) ds over a dense interior rule
  QuadratureRule rule = polytope_quadrature(spec.polytope, 60);
  std::vector<Eigen::VectorXd> grid;
  for (int q = 0; q < rule.size(); ++q) grid.push_back(rule.points.row(q));
  Eigen::VectorXd qf = q_field(spec, E.eigenfunction(0), E.lambda1, grid);
  double integral = 0.0;
  for (int q = 0; q < rule.size(); ++q)
    integral += rule.weights[q] * qf[q] * flat.delta_s(grid[q]);

  const double target = 128.0 / 35.0;
  bool pass = std::abs(pre - target) <= 1e-6 && std::abs(post - target) <= 1e-6 &&
              std::abs(integral - target) <= 1e-6;
  std::snprintf(buf, sizeof buf,
                "form agreement pre %.7f post %.7f grid %.7f (target %.7f)",
                pre, post, integral, target);
  report(5, pass, buf);
}

void criterion_6() {
  bool pass = true;
  std::string detail;
  auto scan = [&](const PotentialSpec& spec, const Eigen::VectorXi& k,
                  int degree, const std::string& tag) {
    SolveOptions opts;
    opts.degree = degree;
    auto dict = default_direction_dictionary(spec.polytope, 4, 2, false);
    CriticalityReport rep = criticality_scan(spec, k, dict, opts);
    bool ok = rep.verdict == "not-critical" && !rep.witness_id.empty();
    pass &= ok;
    detail += tag + (ok ? "[" + rep.witness_id + "] " : "(no witness!) ");
  };
  scan(PotentialSpec::guillemin(Polytope::named("interval"), 1.0), weight1(0),
       14, "interval-b1");
  scan(round_sphere(), weight1(0), 14, "interval-b05");
  scan(PotentialSpec::guillemin(Polytope::named("square2"), 0.5),
       Eigen::VectorXi::Zero(2), 12, "square");
  scan(PotentialSpec::guillemin(Polytope::named("simplex"), 0.5),
       Eigen::VectorXi::Zero(2), 10, "simplex");
  scan(round_sphere(), weight1(1), 14, "interval-k1");
  scan(round_sphere(), weight1(2), 14, "interval-k2");
  report(6, pass, "non-criticality witnesses: " + detail);
}

void criterion_7() {
  PotentialSpec spec = round_sphere();
  SolveOptions opts;
  opts.degree = 16;
  HullOptions hopts;
  HullReport rep = hull_feasibility(spec, weight1(0), opts, hopts);
  double target = std::sqrt(57.6);
  bool sphere_ok =
      std::abs(rep.residual - target) <= 0.02 * target && !rep.feasible;

  Eigen::VectorXd q(7);
  q << 2.0, -1.0, 0.5, -3.0, 1.5, 0.25, -0.75;
  std::vector<std::vector<Eigen::VectorXd>> qpol(
      2, std::vector<Eigen::VectorXd>(2, Eigen::VectorXd::Zero(7)));
  qpol[0][0] = q;
  qpol[1][1] = -q;
  HullReport synth = minimize_hull_residual(
      qpol, Eigen::VectorXd::Constant(7, 1.0 / 7.0), 8, 1234);
  bool synth_ok = synth.residual <= 1e-8 && synth.feasible;

  std::snprintf(buf, sizeof buf,
                "hull residual %.4f (target %.4f), synthetic residual %.2e",
                rep.residual, target, synth.residual);
  report(7, sphere_ok && synth_ok, buf);
}

void criterion_8() {
  PotentialSpec spec = round_sphere();
  SolveOptions opts;
  opts.degree = 16;
  auto grid = interior_grid(spec.polytope, 41);
  double worst = 0.0;
  for (int k = 0; k <= 2; ++k) {
    EigenSolution E = solve_first_eigen(spec, weight1(k), opts);
    for (int m = 0; m < 3; ++m) {
      int idx = E.lambda1_index + m;
      worst = std::max(worst,
                       sphere_flux_identity_residual(spec, E.mode(idx),
                                                     E.eigenvalues[idx], k, grid));
    }
  }
  std::snprintf(buf, sizeof buf, "flux identity worst residual %.2e", worst);
  report(8, worst <= 1e-6, buf);
}

void criterion_9() {
  SolveOptions opts;
  opts.degree = 16;
  PotentialSpec interval = round_sphere();
  EigenSolution Ei = solve_first_eigen(interval, weight1(0), opts);
  double ri = expansion_identity_residual(interval, Ei.eigenfunction(0),
                                          Ei.lambda1,
                                          interior_grid(interval.polytope, 41));

  PotentialSpec square = PotentialSpec::guillemin(Polytope::named("square2"), 0.5);
  SolveOptions opts2;
  opts2.degree = 12;
  EigenSolution Es = solve_first_eigen(square, Eigen::VectorXi::Zero(2), opts2);
  double rs = expansion_identity_residual(square, Es.eigenfunction(0),
                                          Es.lambda1,
                                          interior_grid(square.polytope, 15));
  std::snprintf(buf, sizeof buf,
                "expansion identity residual interval %.2e, square %.2e", ri, rs);
  report(9, ri <= 1e-6 && rs <= 1e-5, buf);
}

void criterion_10() {
  std::vector<double> radii;
  for (int i = 0; i < 12; ++i)
    radii.push_back(1e-3 * std::pow(std::pow(10.0, 2.0 / 11.0), i));
  bool pass = true;
  double worst_exp = std::numeric_limits<double>::infinity();
  for (const char* name : {"interval", "square", "square2", "simplex"}) {
    Polytope P = Polytope::named(name);
    PotentialSpec spec = PotentialSpec::guillemin(P, 0.5);
    for (size_t v = 0; v < P.vertices().size(); ++v) {
      auto [Pstd, map] = standardize_at_vertex(P, static_cast<int>(v));
      PotentialSpec std_spec = unimodular_pushforward(spec, map);
      VertexExpansionResult r = vertex_expansion_check(
          std_spec, radii, Eigen::VectorXd::Ones(P.dim()));
      pass &= r.exponent >= 1.9;
      worst_exp = std::min(worst_exp, r.exponent);
    }
  }
  std::snprintf(buf, sizeof buf,
                "vertex asymptotics, worst fitted exponent %.3f", worst_exp);
  report(10, pass, buf);
}

void criterion_11() {
  std::mt19937_64 rng(20240817);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double max_det = 0.0, max_combo = 0.0;
  int draws = 0;

  std::vector<PotentialSpec> specs = {
      round_sphere(),
      PotentialSpec::guillemin(Polytope::named("square2"), 0.5),
      PotentialSpec::guillemin(Polytope::named("simplex"), 0.5)};
  for (const auto& spec : specs) {
    const Polytope& P = spec.polytope;
    const int n = P.dim();
    SolveOptions opts;
    opts.degree = n == 1 ? 14 : 10;
    EigenSolution E = solve_first_eigen(spec, Eigen::VectorXi::Zero(n), opts);
    std::vector<Eigenfunction> fields;
    for (int i = 0; i < 3 && E.lambda1_index + i < E.eigenvalues.size(); ++i)
      fields.push_back(E.mode(E.lambda1_index + i));
    auto [lo, hi] = P.shape() == PolytopeShape::Triangle
                        ? std::pair<Eigen::VectorXd, Eigen::VectorXd>(
                              Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n))
                        : P.box_bounds();
    int want = 334;
    while (want > 0) {
      Eigen::VectorXd x(n), xi(n);
      for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unif(rng);
      if (!P.is_interior(x, 1e-3)) continue;
      for (int i = 0; i < n; ++i) xi[i] = gauss(rng);
      if (xi.norm() < 1e-8) continue;
      SymbolResult s = ellipticity_symbol(spec, fields, x, xi);
      max_det = std::max(max_det, std::abs(s.determinant) / s.det_scale);
      max_combo = std::max(max_combo, s.combo_residual / s.combo_scale);
      --want;
      ++draws;
    }
  }
  std::snprintf(buf, sizeof buf,
                "symbol over %d draws: max |det| %.2e, max row-combo %.2e",
                draws, max_det, max_combo);
  report(11, max_det <= 1e-9 && max_combo <= 1e-12, buf);
}

void criterion_12() {
  PotentialSpec spec = PotentialSpec::guillemin(Polytope::named("simplex"), 0.5);
  SolveOptions opts;
  opts.degree = 10;
  double l0 = solve_first_eigen(spec, Eigen::VectorXi::Zero(2), opts).lambda1;

  UnimodularMap map;
  map.matrix.resize(2, 2);
  map.matrix << 1, 1, 0, 1;
  map.translation = Eigen::VectorXd::Zero(2);
  map.translation << 0.5, -1.0;
  PotentialSpec pushed = unimodular_pushforward(spec, map);
  double l1 = solve_first_eigen(pushed, Eigen::VectorXi::Zero(2), opts).lambda1;

  std::snprintf(buf, sizeof buf,
                "unimodular invariance: %.10f vs %.10f (diff %.2e)", l0, l1,
                std::abs(l0 - l1));
  report(12, std::abs(l0 - l1) <= 1e-8, buf);
}

void criterion_13() {
  PotentialSpec spec = PotentialSpec::guillemin(Polytope::named("interval"), 1.0);
  SolveOptions opts;
  opts.degree = 12;
  auto dict = default_direction_dictionary(spec.polytope, 4, 2, true);
  FlowOptions fo;
  fo.steps = 50;
  fo.step_size = 0.02;
  try {
    FlowTrace t = ascent_flow(spec, weight1(0), dict, opts, fo);
    bool increasing = true;
    for (size_t i = 1; i < t.steps.size(); ++i)
      increasing &= t.steps[i].lambda1 > t.steps[i - 1].lambda1;
    double gain = t.steps.back().lambda1 / t.steps.front().lambda1 - 1.0;
    bool pass = increasing && t.steps.size() == 51 && gain >= 0.10;
    std::snprintf(buf, sizeof buf,
                  "ascent flow 50 steps, gain %.1f%%, strictly increasing %s",
                  100.0 * gain, increasing ? "yes" : "no");
    report(13, pass, buf);
  } catch (const Stalled& e) {
    report(13, false, std::string("flow stalled: ") + e.what());
  }
}

void criterion_14() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"interval", "square", "square2", "simplex"}) {
    PotentialSpec spec = PotentialSpec::guillemin(Polytope::named(name), 0.5);
    Eigen::VectorXi k = Eigen::VectorXi::Zero(spec.polytope.dim());
    double prev = std::numeric_limits<double>::infinity();
    bool mono = true;
    for (int D : {4, 6, 8, 10, 12}) {
      SolveOptions opts;
      opts.degree = D;
      double lam = solve_first_eigen(spec, k, opts).lambda1;
      mono &= lam <= prev + 1e-10 * std::max(1.0, std::abs(prev));
      prev = lam;
    }
    pass &= mono;
    detail += std::string(name) + (mono ? " ok " : " NOT-MONOTONE ");
  }
  report(14, pass, "Rayleigh-Ritz monotonicity: " + detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  criterion_14();
  if (failures) std::printf("%d criteria FAILED\n", failures);
  else std::printf("all 14 criteria passed\n");
  return failures ? 1 : 0;
}
