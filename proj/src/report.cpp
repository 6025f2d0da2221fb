#include "toric/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace toric {

namespace {

using nlohmann::json;

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i)));
  return rows;
}

std::string format_point(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

void require_spot(const PotentialSpec& spec) {
  SpotValidation v = validate_spot(spec);
  if (!v.pass) {
    std::string where = v.failing_point ? " at grid point " +
                                              format_point(*v.failing_point)
                                        : "";
    throw NotPositiveDefinite("potential fails the Spot conditions" + where +
                              ": " + v.failure_reason);
  }
}

std::string grid_csv(const Polytope& P, const std::vector<Eigen::VectorXd>& grid,
                     const Eigen::VectorXd& values) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < P.dim(); ++i) os << "x" << i << ",";
  os << "value\n";
  for (size_t r = 0; r < grid.size(); ++r) {
    for (int i = 0; i < P.dim(); ++i) os << grid[r][i] << ",";
    os << values[r] << "\n";
  }
  return os.str();
}

json run_spectrum(const RunConfig& cfg, RunReport& report) {
  EigenSolution E = solve_first_eigen(cfg.spec, cfg.k, cfg.solver);
  json out;
  out["lambda1"] = E.lambda1;
  out["cluster_dimension"] = E.cluster_dimension();
  out["residuals"] = vec_json(E.residuals);
  int head = std::min<int>(10, E.eigenvalues.size() - E.lambda1_index);
  out["eigenvalues"] = vec_json(E.eigenvalues.segment(E.lambda1_index, head));
  out["basis_size"] = E.basis.size();
  if (cfg.dump_eigenfunction) {
    auto grid = interior_grid(cfg.spec.polytope, cfg.dump_grid);
    for (int a = 0; a < E.cluster_dimension(); ++a) {
      Eigenfunction f = E.eigenfunction(a);
      Eigen::VectorXd vals(grid.size());
      for (size_t i = 0; i < grid.size(); ++i) vals[i] = f.value(grid[i]);
      report.csv_files.emplace_back("eigenfunction_" + std::to_string(a) + ".csv",
                                    grid_csv(cfg.spec.polytope, grid, vals));
    }
  }
  if (cfg.dump_q_field) {
    auto grid = interior_grid(cfg.spec.polytope, cfg.dump_grid);
    Eigen::VectorXd qv = q_field(cfg.spec, E.eigenfunction(0), E.lambda1, grid);
    report.csv_files.emplace_back("q_field.csv",
                                  grid_csv(cfg.spec.polytope, grid, qv));
  }
  return out;
}

json run_derivative(const RunConfig& cfg) {
  EigenSolution E = solve_first_eigen(cfg.spec, cfg.k, cfg.solver);
  json table = json::array();
  for (const auto& dir : cfg.directions) {
    Eigen::MatrixXd G =
        derivative_quadform(cfg.spec, E, dir, cfg.solver.quadrature_nodes);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    json rec;
    rec["direction"] = dir.id;
    rec["quadform"] = mat_json(G);
    rec["d_minus"] = es.eigenvalues().maxCoeff();
    rec["d_plus"] = es.eigenvalues().minCoeff();
    table.push_back(std::move(rec));
  }
  json out;
  out["lambda1"] = E.lambda1;
  out["cluster_dimension"] = E.cluster_dimension();
  out["directions"] = std::move(table);
  return out;
}

json run_critical(const RunConfig& cfg) {
  CriticalityReport rep =
      criticality_scan(cfg.spec, cfg.k, cfg.directions, cfg.solver);
  json recs = json::array();
  for (const auto& r : rep.records) {
    recs.push_back({{"direction", r.direction_id},
                    {"d_minus", r.d_minus},
                    {"d_plus", r.d_plus},
                    {"witness", r.witness},
                    {"boundary_case", r.boundary_case}});
  }
  json out;
  out["verdict"] = rep.verdict;
  out["witness"] = rep.witness_id;
  out["has_boundary_cases"] = rep.has_boundary_cases;
  out["records"] = std::move(recs);
  return out;
}

json run_hull(const RunConfig& cfg, RunReport& report) {
  HullReport h = hull_feasibility(cfg.spec, cfg.k, cfg.solver, cfg.hull);
  json out;
  out["residual"] = h.residual;
  out["field_scale"] = h.field_scale;
  out["feasible"] = h.feasible;
  out["gram_weights"] = mat_json(h.gram_weights);
  if (cfg.dump_q_field) {
    EigenSolution E = solve_first_eigen(cfg.spec, cfg.k, cfg.solver);
    auto grid = interior_grid(cfg.spec.polytope, cfg.dump_grid);
    Eigen::VectorXd qv = q_field(cfg.spec, E.eigenfunction(0), E.lambda1, grid);
    report.csv_files.emplace_back("q_field.csv",
                                  grid_csv(cfg.spec.polytope, grid, qv));
  }
  return out;
}

json run_flow(const RunConfig& cfg) {
  FlowTrace trace =
      ascent_flow(cfg.spec, cfg.k, cfg.directions, cfg.solver, cfg.flow);
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"lambda1", s.lambda1},
                     {"direction", s.direction_id},
                     {"step_size", s.step_size},
                     {"rate", s.rate}});
  }
  json out;
  out["steps"] = std::move(steps);
  out["initial_lambda1"] = trace.steps.front().lambda1;
  out["final_lambda1"] = trace.steps.back().lambda1;
  out["relative_gain"] =
      trace.steps.back().lambda1 / trace.steps.front().lambda1 - 1.0;
  return out;
}

json check_record(const std::string& name, json params, double residual,
                  bool pass) {
  return {{"check", name},
          {"parameters", std::move(params)},
          {"residual", residual},
          {"pass", pass}};
}

json run_check(const RunConfig& cfg) {
  const PotentialSpec& spec = cfg.spec;
  const Polytope& P = spec.polytope;
  const int n = P.dim();
  json records = json::array();

  // Associated Legendre oracle against the solver, round interval only.
  if (n == 1 && P.shape() == PolytopeShape::Interval &&
      std::abs(spec.beta - 0.5) < 1e-14 && spec.correction.is_zero()) {
    for (int k = 0; k <= 3; ++k) {
      Eigen::VectorXi kv(1);
      kv[0] = k;
      SolveOptions opts = cfg.solver;
      opts.degree = std::max(opts.degree, 16);
      double lam = solve_first_eigen(spec, kv, opts).lambda1;
      double oracle = legendre_oracle(k, std::max(k, 1));
      double res = std::abs(lam - oracle) / oracle;
      records.push_back(check_record(
          "legendre_oracle", {{"k", k}}, res, res <= (k % 2 ? 1e-5 : 1e-6)));
    }
  }

  if (n == 1) {
    // Flux identity for the first three eigenfunctions at k = 0, 1, 2.
    auto grid = interior_grid(P, 41);
    for (int k = 0; k <= 2; ++k) {
      Eigen::VectorXi kv(1);
      kv[0] = k;
      SolveOptions opts = cfg.solver;
      opts.degree = std::max(opts.degree, 16);
      EigenSolution E = solve_first_eigen(spec, kv, opts);
      for (int m = 0; m < 3; ++m) {
        int idx = E.lambda1_index + m;
        if (idx >= E.eigenvalues.size()) break;
        double res = sphere_flux_identity_residual(
            spec, E.mode(idx), E.eigenvalues[idx], k, grid);
        records.push_back(check_record("flux_identity",
                                       {{"k", k}, {"mode", m}}, res,
                                       res <= 1e-6));
      }
    }
  }

  {
    // Expansion identity for the invariant first eigenfunction.
    Eigen::VectorXi kv = Eigen::VectorXi::Zero(n);
    EigenSolution E = solve_first_eigen(spec, kv, cfg.solver);
    auto grid = interior_grid(P, n == 1 ? 41 : 15);
    double res =
        expansion_identity_residual(spec, E.eigenfunction(0), E.lambda1, grid);
    records.push_back(check_record("expansion_identity", {{"k", 0}}, res,
                                   res <= (n == 1 ? 1e-6 : 1e-5)));
  }

  {
    // Vertex asymptotics of beta (Hess s)^{-1} at every vertex.
    std::vector<double> radii;
    for (int i = 0; i < 12; ++i)
      radii.push_back(1e-3 * std::pow(std::pow(10.0, 2.0 / 11.0), i));
    Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
    for (size_t vtx = 0; vtx < P.vertices().size(); ++vtx) {
      auto [Pstd, map] = standardize_at_vertex(P, static_cast<int>(vtx));
      PotentialSpec std_spec = unimodular_pushforward(spec, map);
      VertexExpansionResult r = vertex_expansion_check(std_spec, radii, u);
      records.push_back(check_record(
          "vertex_expansion",
          {{"vertex", vtx}, {"exponent", r.exponent}}, r.max_deviation,
          r.exponent >= 1.9));
    }
  }

  {
    // Symbol degeneracy over random interior draws.
    Eigen::VectorXi kv = Eigen::VectorXi::Zero(n);
    EigenSolution E = solve_first_eigen(spec, kv, cfg.solver);
    std::vector<Eigenfunction> fields;
    for (int i = 0; i < std::min<int>(3, E.eigenvalues.size() - E.lambda1_index);
         ++i)
      fields.push_back(E.mode(E.lambda1_index + i));
    auto [lo, hi] = P.shape() == PolytopeShape::Triangle
                        ? std::pair<Eigen::VectorXd, Eigen::VectorXd>(
                              Eigen::VectorXd::Zero(n),
                              Eigen::VectorXd::Ones(n))
                        : P.box_bounds();
    std::mt19937_64 rng(cfg.checks_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double max_det = 0.0, max_combo = 0.0;
    int done = 0;
    while (done < cfg.checks_symbol_draws) {
      Eigen::VectorXd x(n), xi(n);
      for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unif(rng);
      if (!P.is_interior(x, 1e-3 * P.diameter())) continue;
      for (int i = 0; i < n; ++i) xi[i] = gauss(rng);
      if (xi.norm() < 1e-8) continue;
      SymbolResult s = ellipticity_symbol(spec, fields, x, xi);
      max_det = std::max(max_det, std::abs(s.determinant) / s.det_scale);
      max_combo = std::max(max_combo, s.combo_residual / s.combo_scale);
      ++done;
    }
    records.push_back(check_record("symbol_determinant",
                                   {{"draws", cfg.checks_symbol_draws}},
                                   max_det, max_det <= 1e-9));
    records.push_back(check_record("symbol_row_combination",
                                   {{"draws", cfg.checks_symbol_draws}},
                                   max_combo, max_combo <= 1e-12));
  }

  bool all_pass = true;
  for (const auto& r : records) all_pass &= r["pass"].get<bool>();
  json out;
  out["records"] = std::move(records);
  out["all_pass"] = all_pass;
  return out;
}

}  // namespace

RunReport run_command(const RunConfig& cfg) {
  RunReport report;
  require_spot(cfg.spec);
  json results;
  if (cfg.command == "spectrum")
    results = run_spectrum(cfg, report);
  else if (cfg.command == "derivative")
    results = run_derivative(cfg);
  else if (cfg.command == "critical")
    results = run_critical(cfg);
  else if (cfg.command == "hull")
    results = run_hull(cfg, report);
  else if (cfg.command == "flow")
    results = run_flow(cfg);
  else if (cfg.command == "check")
    results = run_check(cfg);
  else
    throw SchemaError("unknown command \"" + cfg.command + "\"");

  report.payload["command"] = cfg.command;
  report.payload["config"] = cfg.echo;
  report.payload["results"] = std::move(results);
  report.payload["versions"] = {{"toric-spectra", "1.0.0"},
                                {"eigen", std::to_string(EIGEN_WORLD_VERSION) +
                                              "." +
                                              std::to_string(EIGEN_MAJOR_VERSION)}};
  return report;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

void emit_outputs(const RunReport& report, const std::string& dir,
                  double wall_ms) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);

  auto write_file = [&](const std::string& name, const std::string& body) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + name + " in " + dir);
    out << body;
    if (!out) throw IoError("write failed for " + name);
  };

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("report.json", report.payload.dump(2) + "\n");
  for (const auto& [name, body] : report.csv_files) files.emplace_back(name, body);

  json manifest;
  manifest["files"] = json::array();
  for (const auto& [name, body] : files) {
    write_file(name, body);
    manifest["files"].push_back({{"name", name},
                                 {"sha256", sha256_hex(body)},
                                 {"bytes", body.size()}});
  }
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  manifest["timestamp"] = buf;
  manifest["wall_ms"] = wall_ms;
  write_file("manifest.json", manifest.dump(2) + "\n");
}

}  // namespace toric
