#include "toric/variation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace toric {

namespace {

// Per-node data shared by all directions: eigenfunction values and
// H^{-1} grad f for every cluster member.
struct VariationWorkspace {
  QuadratureRule rule;
  Eigen::MatrixXd fvals;                 // m x nq
  std::vector<Eigen::MatrixXd> hgrads;   // nq entries, n x m
  int m = 0;
};

VariationWorkspace build_workspace(const PotentialSpec& spec,
                                   const EigenSolution& E,
                                   int quadrature_nodes) {
  const int nq_axis = quadrature_nodes > 0 ? quadrature_nodes
                                           : 2 * E.basis.degree + 16;
  VariationWorkspace ws;
  ws.rule = polytope_quadrature(spec.polytope, nq_axis);
  ws.m = E.cluster_dimension();
  const int n = spec.polytope.dim();
  ws.fvals.resize(ws.m, ws.rule.size());
  ws.hgrads.resize(ws.rule.size());
  Eigen::VectorXd vals;
  Eigen::MatrixXd grads;
  for (int q = 0; q < ws.rule.size(); ++q) {
    Eigen::VectorXd x = ws.rule.points.row(q);
    HessianPair H = hessian_and_inverse(spec, x);
    eval_basis(E.basis, x, vals, grads);
    Eigen::MatrixXd hg(n, ws.m);
    for (int a = 0; a < ws.m; ++a) {
      ws.fvals(a, q) = E.vectors.col(a).dot(vals);
      hg.col(a) = H.inverse * (grads.transpose() * E.vectors.col(a));
    }
    ws.hgrads[q] = std::move(hg);
  }
  return ws;
}

Eigen::MatrixXd quadform_from_workspace(const PotentialSpec& spec,
                                        const Eigen::VectorXi& k,
                                        const VariationWorkspace& ws,
                                        const Direction& direction) {
  const int m = ws.m;
  const bool equivariant = !k.isZero();
  Eigen::VectorXd kd = k.cast<double>();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  for (int q = 0; q < ws.rule.size(); ++q) {
    Eigen::VectorXd x = ws.rule.points.row(q);
    double wq = ws.rule.weights[q];
    Eigen::MatrixXd Hds = direction.delta_s.hessian_at(x);
    Eigen::MatrixXd grad_part =
        ws.hgrads[q].transpose() * Hds * ws.hgrads[q];  // m x m
    double kterm = equivariant ? kd.dot(Hds * kd) : 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        double val = -grad_part(a, b);
        if (equivariant) val += ws.fvals(a, q) * ws.fvals(b, q) * kterm;
        G(a, b) += wq * val;
      }
  }
  return 0.5 * (G + G.transpose());
}

void check_basis(const PotentialSpec& spec, const EigenSolution& E) {
  if (E.basis.polytope.dim() != spec.polytope.dim() ||
      E.basis.polytope.facets().size() != spec.polytope.facets().size())
    throw BasisMismatch("eigenspace basis does not match the potential domain");
}

// Polarized defect fields Q(f_a, f_b) at a point. The second divergence
// d2_ij T_ij of T = sym(V_a V_b^t), V = H^{-1} grad f, is taken by central
// differences with a step shrunk near the boundary; the k-term is analytic.
struct DefectEvaluator {
  const PotentialSpec* spec = nullptr;
  std::vector<const Eigenfunction*> fields;
  Eigen::VectorXi k;
  double base_step = 0.0;  // default 1e-4 * diameter

  Eigen::MatrixXd qpol(const Eigen::VectorXd& x) const {
    const Polytope& P = spec->polytope;
    const int n = P.dim();
    const int m = static_cast<int>(fields.size());
    Eigen::VectorXd ell = P.facet_values(x);
    if (ell.minCoeff() < kInteriorTol)
      throw GridOutsideInterior("defect field requested outside the interior");

    double max_normal = 0.0;
    for (const auto& f : P.facets())
      max_normal = std::max(max_normal, f.normal.cast<double>().norm());
    double h0 = base_step > 0.0 ? base_step : 1e-4 * P.diameter();
    double h = std::min(h0, 0.5 * ell.minCoeff() /
                                (max_normal * std::sqrt(2.0)));

    // V_a at every stencil point.
    auto V_at = [&](const Eigen::VectorXd& p) {
      HessianPair H = hessian_and_inverse(*spec, p);
      Eigen::MatrixXd V(n, m);
      for (int a = 0; a < m; ++a) V.col(a) = H.inverse * fields[a]->gradient(p);
      return V;
    };
    auto T_entry = [](const Eigen::MatrixXd& V, int a, int b, int i, int j) {
      return 0.5 * (V(i, a) * V(j, b) + V(i, b) * V(j, a));
    };

    Eigen::MatrixXd V0 = V_at(x);
    Eigen::MatrixXd div2 = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      Eigen::MatrixXd Vp = V_at(xp), Vm = V_at(xm);
      for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b)
          div2(a, b) += (T_entry(Vp, a, b, i, i) - 2.0 * T_entry(V0, a, b, i, i) +
                         T_entry(Vm, a, b, i, i)) /
                        (h * h);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h; xpp[j] += h;
        xpm[i] += h; xpm[j] -= h;
        xmp[i] -= h; xmp[j] += h;
        xmm[i] -= h; xmm[j] -= h;
        Eigen::MatrixXd Vpp = V_at(xpp), Vpm = V_at(xpm), Vmp = V_at(xmp),
                        Vmm = V_at(xmm);
        for (int a = 0; a < m; ++a)
          for (int b = a; b < m; ++b)
            div2(a, b) += 2.0 *
                          (T_entry(Vpp, a, b, i, j) - T_entry(Vpm, a, b, i, j) -
                           T_entry(Vmp, a, b, i, j) + T_entry(Vmm, a, b, i, j)) /
                          (4.0 * h * h);
      }
    }

    Eigen::MatrixXd Q = -div2;
    if (!k.isZero()) {
      Eigen::VectorXd kd = k.cast<double>();
      std::vector<double> fv(m);
      std::vector<Eigen::VectorXd> gv(m);
      std::vector<Eigen::MatrixXd> hv(m);
      for (int a = 0; a < m; ++a) {
        fv[a] = fields[a]->value(x);
        gv[a] = fields[a]->gradient(x);
        hv[a] = fields[a]->hessian(x);
      }
      for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
          // Hess(f_a f_b) contracted with k twice.
          double t = fv[a] * kd.dot(hv[b] * kd) + fv[b] * kd.dot(hv[a] * kd) +
                     2.0 * kd.dot(gv[a]) * kd.dot(gv[b]);
          Q(a, b) += t;
        }
    }
    return Q.selfadjointView<Eigen::Upper>();
  }
};

}  // namespace

Eigen::MatrixXd derivative_quadform(const PotentialSpec& spec,
                                    const EigenSolution& E,
                                    const Direction& direction,
                                    int quadrature_nodes) {
  check_basis(spec, E);
  VariationWorkspace ws = build_workspace(spec, E, quadrature_nodes);
  return quadform_from_workspace(spec, E.basis.k, ws, direction);
}

Eigen::MatrixXd derivative_post_ibp(const PotentialSpec& spec,
                                    const EigenSolution& E,
                                    const Direction& direction,
                                    int quadrature_nodes) {
  check_basis(spec, E);
  if (!direction.boundary_flat)
    throw DirectionNotBoundaryFlat(
        "post-IBP variation requires a boundary-flat direction");
  const int m = E.cluster_dimension();
  std::vector<Eigenfunction> fs;
  fs.reserve(m);
  for (int a = 0; a < m; ++a) fs.push_back(E.eigenfunction(a));
  DefectEvaluator defect;
  defect.spec = &spec;
  defect.k = E.basis.k;
  for (const auto& f : fs) defect.fields.push_back(&f);

  const int nq_axis = quadrature_nodes > 0 ? quadrature_nodes
                                           : 2 * E.basis.degree + 16;
  QuadratureRule rule = polytope_quadrature(spec.polytope, nq_axis);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  for (int q = 0; q < rule.size(); ++q) {
    Eigen::VectorXd x = rule.points.row(q);
    G += rule.weights[q] * direction.delta_s(x) * defect.qpol(x);
  }
  return 0.5 * (G + G.transpose());
}

Eigen::VectorXd q_field(const PotentialSpec& spec, const Eigenfunction& f,
                        double lambda,
                        const std::vector<Eigen::VectorXd>& grid) {
  (void)lambda;  // Q depends on f directly; lambda documents provenance
  DefectEvaluator defect;
  defect.spec = &spec;
  defect.k = f.basis.k;
  defect.fields = {&f};
  Eigen::VectorXd out(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) out[i] = defect.qpol(grid[i])(0, 0);
  return out;
}

double q_polarized_at(const PotentialSpec& spec, const Eigenfunction& fa,
                      const Eigenfunction& fb, const Eigen::VectorXd& x) {
  DefectEvaluator defect;
  defect.spec = &spec;
  defect.k = fa.basis.k;
  defect.fields = {&fa, &fb};
  return defect.qpol(x)(0, 1);
}

double fd_lambda(const PotentialSpec& spec, const Eigen::VectorXi& k,
                 const Polynomial& delta_s, double t, const SolveOptions& opts) {
  SpotGridOptions coarse{17, 17};
  auto perturbed = [&](double sign) {
    PotentialSpec p = spec;
    p.correction += delta_s * (sign * t);
    if (!validate_spot(p, coarse).pass)
      throw PerturbedSpecInvalid("perturbed potential leaves Spot");
    return p;
  };
  double lp = solve_first_eigen(perturbed(+1.0), k, opts).lambda1;
  double lm = solve_first_eigen(perturbed(-1.0), k, opts).lambda1;
  return (lp - lm) / (2.0 * t);
}

std::pair<double, double> one_sided_derivatives(const PotentialSpec& spec,
                                                const Eigen::VectorXi& k,
                                                const Direction& direction,
                                                const SolveOptions& opts) {
  EigenSolution E = solve_first_eigen(spec, k, opts);
  Eigen::MatrixXd G = derivative_quadform(spec, E, direction);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  return {es.eigenvalues().maxCoeff(), es.eigenvalues().minCoeff()};
}

CriticalityReport criticality_scan(const PotentialSpec& spec,
                                   const Eigen::VectorXi& k,
                                   const std::vector<Direction>& directions,
                                   const SolveOptions& opts, double tolerance) {
  if (directions.empty()) throw EmptyDictionary("empty direction dictionary");
  EigenSolution E = solve_first_eigen(spec, k, opts);
  VariationWorkspace ws = build_workspace(spec, E, opts.quadrature_nodes);

  CriticalityReport report;
  bool all_strictly_critical = true;
  for (const auto& dir : directions) {
    Eigen::MatrixXd G = quadform_from_workspace(spec, k, ws, dir);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    CriticalityRecord rec;
    rec.direction_id = dir.id;
    rec.d_minus = es.eigenvalues().maxCoeff();
    rec.d_plus = es.eigenvalues().minCoeff();
    rec.witness = rec.d_minus < -tolerance || rec.d_plus > tolerance;
    rec.boundary_case =
        !rec.witness &&
        (std::abs(rec.d_minus) <= tolerance || std::abs(rec.d_plus) <= tolerance);
    if (!(rec.d_minus > tolerance && rec.d_plus < -tolerance))
      all_strictly_critical = false;
    if (rec.witness && report.witness_id.empty())
      report.witness_id = rec.direction_id;
    report.has_boundary_cases |= rec.boundary_case;
    report.records.push_back(std::move(rec));
  }
  if (!report.witness_id.empty())
    report.verdict = "not-critical";
  else if (all_strictly_critical)
    report.verdict = "critical-candidate";
  else
    report.verdict = "unresolved";
  return report;
}

HullReport minimize_hull_residual(
    const std::vector<std::vector<Eigen::VectorXd>>& qpol,
    const Eigen::VectorXd& grid_weights, int restarts, std::uint64_t seed,
    double feasibility_tol) {
  const int m = static_cast<int>(qpol.size());
  const int ng = static_cast<int>(grid_weights.size());
  const int mm = m * m;

  // r^2(W) = vec(W)^t K vec(W) with K the weighted field Gram matrix.
  Eigen::MatrixXd K(mm, mm);
  double field_scale = 0.0;
  for (int bc = 0; bc < mm; ++bc) {
    const Eigen::VectorXd& qb = qpol[bc / m][bc % m];
    field_scale = std::max(
        field_scale, std::sqrt((grid_weights.array() * qb.array().square()).sum()));
    for (int de = bc; de < mm; ++de) {
      const Eigen::VectorXd& qd = qpol[de / m][de % m];
      K(bc, de) = (grid_weights.array() * qb.array() * qd.array()).sum();
      K(de, bc) = K(bc, de);
    }
  }
  field_scale = std::max(field_scale, 1e-300);

  auto project = [m](Eigen::MatrixXd W) {
    W = 0.5 * (W + W.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
    // Project eigenvalues onto the probability simplex.
    Eigen::VectorXd ev = es.eigenvalues();
    std::vector<double> sorted(ev.data(), ev.data() + m);
    std::sort(sorted.rbegin(), sorted.rend());
    double cumsum = 0.0, theta = 0.0;
    int rho = 0;
    for (int i = 0; i < m; ++i) {
      cumsum += sorted[i];
      double t = (cumsum - 1.0) / (i + 1);
      if (sorted[i] - t > 0) {
        rho = i + 1;
        theta = t;
      }
    }
    (void)rho;
    Eigen::VectorXd clipped =
        (ev.array() - theta).max(0.0);
    return Eigen::MatrixXd(es.eigenvectors() * clipped.asDiagonal() *
                           es.eigenvectors().transpose());
  };
  auto residual_sq = [&](const Eigen::MatrixXd& W) {
    Eigen::Map<const Eigen::VectorXd> w(W.data(), mm);
    return std::max(0.0, w.dot(K * w));
  };

  double lipschitz = 2.0 * K.selfadjointView<Eigen::Lower>()
                               .eigenvalues()
                               .cwiseAbs()
                               .maxCoeff();
  double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  HullReport best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd W;
    if (r == 0) {
      W = Eigen::MatrixXd::Identity(m, m) / m;
    } else {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
      std::normal_distribution<double> gauss(0.0, 1.0);
      Eigen::MatrixXd G(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) G(i, j) = gauss(rng);
      W = G * G.transpose();
      W /= W.trace();
    }
    for (int it = 0; it < 2000; ++it) {
      Eigen::Map<const Eigen::VectorXd> w(W.data(), mm);
      Eigen::VectorXd g = 2.0 * (K * w);
      Eigen::MatrixXd Wn =
          project(W - step * Eigen::Map<const Eigen::MatrixXd>(g.data(), m, m));
      double moved = (Wn - W).norm();
      W = Wn;
      if (moved < 1e-14) break;
    }
    double res = std::sqrt(residual_sq(W));
    if (res < best.residual) {
      best.residual = res;
      best.gram_weights = W;
    }
  }
  best.field_scale = field_scale;
  best.feasible = best.residual <= feasibility_tol * field_scale;
  (void)ng;
  return best;
}

HullReport hull_feasibility(const PotentialSpec& spec, const Eigen::VectorXi& k,
                            const SolveOptions& solve_opts,
                            const HullOptions& hull_opts) {
  EigenSolution E = solve_first_eigen(spec, k, solve_opts);
  const int m = E.cluster_dimension();
  std::vector<Eigenfunction> fs;
  fs.reserve(m);
  for (int a = 0; a < m; ++a) fs.push_back(E.eigenfunction(a));
  DefectEvaluator defect;
  defect.spec = &spec;
  defect.k = k;
  for (const auto& f : fs) defect.fields.push_back(&f);

  QuadratureRule rule = polytope_quadrature(spec.polytope, hull_opts.grid_per_axis);
  std::vector<std::vector<Eigen::VectorXd>> qpol(
      m, std::vector<Eigen::VectorXd>(m, Eigen::VectorXd(rule.size())));
  for (int q = 0; q < rule.size(); ++q) {
    Eigen::MatrixXd Q = defect.qpol(rule.points.row(q));
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) qpol[b][c][q] = Q(b, c);
  }
  return minimize_hull_residual(qpol, rule.weights, hull_opts.restarts,
                                hull_opts.seed, hull_opts.feasibility_tol);
}

FlowTrace ascent_flow(const PotentialSpec& spec0, const Eigen::VectorXi& k,
                      const std::vector<Direction>& dictionary,
                      const SolveOptions& solve_opts,
                      const FlowOptions& flow_opts) {
  if (dictionary.empty()) throw EmptyDictionary("empty flow dictionary");
  const bool ascend = flow_opts.mode == FlowMode::Ascend;
  SpotGridOptions coarse{17, 17};

  PotentialSpec spec = spec0;
  EigenSolution E = solve_first_eigen(spec, k, solve_opts);

  FlowTrace trace;
  FlowStep init;
  init.correction = spec.correction;
  init.lambda1 = E.lambda1;
  trace.steps.push_back(init);

  for (int step = 0; step < flow_opts.steps; ++step) {
    VariationWorkspace ws = build_workspace(spec, E, solve_opts.quadrature_nodes);
    // Guaranteed one-sided rate per direction: d_plus when ascending,
    // d_minus when descending.
    std::vector<std::pair<double, int>> rates;
    for (size_t d = 0; d < dictionary.size(); ++d) {
      Eigen::MatrixXd G = quadform_from_workspace(spec, k, ws, dictionary[d]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
      double rate = ascend ? es.eigenvalues().minCoeff()
                           : es.eigenvalues().maxCoeff();
      rates.emplace_back(ascend ? rate : -rate, static_cast<int>(d));
    }
    std::sort(rates.rbegin(), rates.rend());
    if (rates.front().first <= flow_opts.stall_tol)
      throw Stalled("no direction with a guaranteed one-sided rate");

    bool accepted = false;
    for (const auto& [score, d] : rates) {
      if (score <= flow_opts.stall_tol) break;
      const Direction& dir = dictionary[d];
      double eta = flow_opts.step_size;
      for (int bt = 0; bt < 30 && !accepted; ++bt, eta *= 0.5) {
        PotentialSpec cand = spec;
        cand.correction += dir.delta_s * eta;
        if (!validate_spot(cand, coarse).pass) continue;
        EigenSolution Ec;
        try {
          Ec = solve_first_eigen(cand, k, solve_opts);
        } catch (const SolverError&) {
          continue;
        } catch (const PotentialError&) {
          // coarse Spot grid passed but a quadrature node failed convexity
          continue;
        }
        bool improved = ascend ? Ec.lambda1 > E.lambda1 + 1e-12
                               : Ec.lambda1 < E.lambda1 - 1e-12;
        if (!improved) continue;
        FlowStep rec;
        rec.correction = cand.correction;
        rec.lambda1 = Ec.lambda1;
        rec.direction_id = dir.id;
        rec.step_size = eta;
        rec.rate = ascend ? score : -score;
        trace.steps.push_back(rec);
        spec = std::move(cand);
        E = std::move(Ec);
        accepted = true;
      }
      if (accepted) break;
    }
    if (!accepted)
      throw Stalled("backtracking found no admissible step in any direction");
  }
  trace.final_spec = spec;
  return trace;
}

std::vector<Direction> default_direction_dictionary(const Polytope& P,
                                                    int max_degree,
                                                    int bflat_degree,
                                                    bool include_negations) {
  const int n = P.dim();
  std::vector<Direction> dict;
  std::vector<Polynomial> monomials;
  std::vector<std::string> names;
  std::vector<int> e(n, 0);
  std::function<void(int, int)> gen = [&](int pos, int remaining) {
    if (pos == n) {
      int total = 0;
      for (int v : e) total += v;
      if (total == 0) return;
      Polynomial mono = Polynomial::constant(n, 1.0);
      std::string name;
      for (int i = 0; i < n; ++i) {
        for (int q = 0; q < e[i]; ++q) mono = mono * Polynomial::variable(n, i);
        if (e[i] > 0) name += "x" + std::to_string(i) + "^" + std::to_string(e[i]);
      }
      monomials.push_back(mono);
      names.push_back(name);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      e[pos] = v;
      gen(pos + 1, remaining - v);
    }
    e[pos] = 0;
  };
  gen(0, max_degree);

  for (size_t i = 0; i < monomials.size(); ++i) {
    Direction d;
    d.id = names[i];
    d.delta_s = monomials[i];
    dict.push_back(d);
    if (include_negations) {
      Direction dn;
      dn.id = "-" + names[i];
      dn.delta_s = monomials[i] * -1.0;
      dict.push_back(dn);
    }
  }
  // Boundary-flat entries, constant included (the flat factor carries all
  // the boundary behaviour).
  std::vector<Polynomial> flat_polys = {Polynomial::constant(n, 1.0)};
  std::vector<std::string> flat_names = {"1"};
  for (size_t i = 0; i < monomials.size(); ++i) {
    if (monomials[i].total_degree() <= bflat_degree) {
      flat_polys.push_back(monomials[i]);
      flat_names.push_back(names[i]);
    }
  }
  for (size_t i = 0; i < flat_polys.size(); ++i) {
    Direction d = boundary_flat_direction(P, flat_polys[i],
                                          "bflat:" + flat_names[i]);
    dict.push_back(d);
    if (include_negations) {
      Direction dn = d;
      dn.id = "-" + d.id;
      dn.delta_s = d.delta_s * -1.0;
      dict.push_back(dn);
    }
  }
  return dict;
}

}  // namespace toric
