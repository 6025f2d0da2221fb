#include "toric/config.hpp"

#include <fstream>
#include <set>

namespace toric {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw SchemaError("unknown key \"" + context + "." + it.key() + "\"");
  }
}

const json& require(const json& obj, const std::string& key,
                    const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError("missing required key \"" + context + "." + key + "\"");
  return *it;
}

double require_number(const json& obj, const std::string& key,
                      const std::string& context) {
  const json& v = require(obj, key, context);
  if (!v.is_number())
    throw SchemaError("\"" + context + "." + key + "\" must be a number");
  return v.get<double>();
}

int require_int(const json& obj, const std::string& key,
                const std::string& context) {
  const json& v = require(obj, key, context);
  if (!v.is_number_integer())
    throw SchemaError("\"" + context + "." + key + "\" must be an integer");
  return v.get<int>();
}

Polynomial parse_polynomial(const json& terms, int dim,
                            const std::string& context) {
  if (!terms.is_array())
    throw SchemaError("\"" + context + "\" must be an array of terms");
  Polynomial p(dim);
  for (const auto& term : terms) {
    if (!term.is_object())
      throw SchemaError("\"" + context + "\" entries must be objects");
    reject_unknown(term, {"exponents", "coefficient"}, context);
    const json& ex = require(term, "exponents", context);
    if (!ex.is_array() || static_cast<int>(ex.size()) != dim)
      throw SchemaError("\"" + context + ".exponents\" must have length " +
                        std::to_string(dim));
    std::vector<int> mi;
    for (const auto& e : ex) {
      if (!e.is_number_integer() || e.get<int>() < 0)
        throw SchemaError("\"" + context +
                          ".exponents\" must be nonnegative integers");
      mi.push_back(e.get<int>());
    }
    p.add_term(mi, require_number(term, "coefficient", context));
  }
  return p;
}

json polynomial_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [mi, c] : p.terms()) {
    terms.push_back({{"exponents", mi}, {"coefficient", c}});
  }
  return terms;
}

Polytope parse_polytope(const json& block) {
  reject_unknown(block, {"name", "facets"}, "polytope");
  const bool has_name = block.contains("name");
  const bool has_facets = block.contains("facets");
  if (has_name == has_facets)
    throw SchemaError(
        "\"polytope\" needs exactly one of \"name\" or \"facets\"");
  if (has_name) {
    if (!block["name"].is_string())
      throw SchemaError("\"polytope.name\" must be a string");
    return Polytope::named(block["name"].get<std::string>());
  }
  const json& fl = block["facets"];
  if (!fl.is_array() || fl.empty())
    throw SchemaError("\"polytope.facets\" must be a nonempty array");
  std::vector<Facet> facets;
  for (const auto& f : fl) {
    reject_unknown(f, {"normal", "offset"}, "polytope.facets");
    const json& nv = require(f, "normal", "polytope.facets");
    if (!nv.is_array() || nv.empty())
      throw SchemaError("\"polytope.facets.normal\" must be a nonempty array");
    Facet facet;
    facet.normal.resize(nv.size());
    for (size_t i = 0; i < nv.size(); ++i) {
      if (!nv[i].is_number_integer())
        throw SchemaError("\"polytope.facets.normal\" must be integers");
      facet.normal[i] = nv[i].get<int>();
    }
    facet.offset = require_number(f, "offset", "polytope.facets");
    facets.push_back(std::move(facet));
  }
  return Polytope::build(std::move(facets));
}

std::vector<Direction> parse_directions(const json& block, const Polytope& P,
                                        bool for_flow) {
  reject_unknown(block, {"dictionary", "max_degree", "bflat_degree"},
                 "directions");
  const json& dict = require(block, "dictionary", "directions");
  if (dict.is_string()) {
    if (dict.get<std::string>() != "default")
      throw SchemaError(
          "\"directions.dictionary\" must be \"default\" or a list");
    int max_degree = block.contains("max_degree")
                         ? require_int(block, "max_degree", "directions")
                         : 4;
    int bflat_degree = block.contains("bflat_degree")
                           ? require_int(block, "bflat_degree", "directions")
                           : 2;
    return default_direction_dictionary(P, max_degree, bflat_degree, for_flow);
  }
  if (!dict.is_array() || dict.empty())
    throw SchemaError("\"directions.dictionary\" must be nonempty");
  std::vector<Direction> out;
  for (const auto& d : dict) {
    reject_unknown(d, {"id", "terms", "boundary_flat"},
                   "directions.dictionary");
    Polynomial p = parse_polynomial(require(d, "terms", "directions.dictionary"),
                                    P.dim(), "directions.dictionary.terms");
    bool bflat = d.contains("boundary_flat") && d["boundary_flat"].is_boolean()
                     ? d["boundary_flat"].get<bool>()
                     : false;
    std::string id = d.contains("id") ? d["id"].get<std::string>()
                                      : p.to_string();
    if (bflat) {
      out.push_back(boundary_flat_direction(P, p, id));
    } else {
      Direction dir;
      dir.id = std::move(id);
      dir.delta_s = std::move(p);
      out.push_back(std::move(dir));
    }
  }
  return out;
}

}  // namespace

RunConfig parse_config(const json& j, const std::string& command) {
  if (!j.is_object()) throw SchemaError("config root must be an object");
  reject_unknown(j,
                 {"polytope", "potential", "weight", "solver", "directions",
                  "flow", "hull", "checks", "output"},
                 "config");

  RunConfig cfg;
  cfg.command = command;

  cfg.spec.polytope = parse_polytope(require(j, "polytope", "config"));
  const int n = cfg.spec.polytope.dim();

  const json& pot = require(j, "potential", "config");
  reject_unknown(pot, {"beta", "correction"}, "potential");
  cfg.spec.beta = require_number(pot, "beta", "potential");
  if (cfg.spec.beta <= 0.0)
    throw SchemaError("\"potential.beta\" must be positive");
  cfg.spec.correction =
      pot.contains("correction")
          ? parse_polynomial(pot["correction"], n, "potential.correction")
          : Polynomial(n);

  const json& wt = require(j, "weight", "config");
  reject_unknown(wt, {"k"}, "weight");
  const json& kv = require(wt, "k", "weight");
  if (!kv.is_array() || static_cast<int>(kv.size()) != n)
    throw SchemaError("\"weight.k\" must be an integer list of length " +
                      std::to_string(n));
  cfg.k.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!kv[i].is_number_integer())
      throw SchemaError("\"weight.k\" must be integers");
    cfg.k[i] = kv[i].get<int>();
  }

  const json& sol = require(j, "solver", "config");
  reject_unknown(sol, {"degree", "quadrature_nodes", "cluster_tol"}, "solver");
  cfg.solver.degree = require_int(sol, "degree", "solver");
  if (cfg.solver.degree < 1)
    throw SchemaError("\"solver.degree\" must be at least 1");
  cfg.solver.cluster_tol = require_number(sol, "cluster_tol", "solver");
  cfg.solver.quadrature_nodes =
      sol.contains("quadrature_nodes")
          ? require_int(sol, "quadrature_nodes", "solver")
          : 0;

  const bool needs_directions =
      command == "derivative" || command == "critical" || command == "flow";
  if (needs_directions && !j.contains("directions"))
    throw MissingBlock("command \"" + command +
                       "\" requires a \"directions\" block");
  if (j.contains("directions"))
    cfg.directions =
        parse_directions(j["directions"], cfg.spec.polytope, command == "flow");

  if (command == "flow" && !j.contains("flow"))
    throw MissingBlock("command \"flow\" requires a \"flow\" block");
  if (j.contains("flow")) {
    const json& fl = j["flow"];
    reject_unknown(fl, {"steps", "step_size", "mode", "stall_tol"}, "flow");
    cfg.flow.steps = require_int(fl, "steps", "flow");
    if (cfg.flow.steps < 0) throw SchemaError("\"flow.steps\" must be >= 0");
    cfg.flow.step_size = require_number(fl, "step_size", "flow");
    std::string mode = require(fl, "mode", "flow").get<std::string>();
    if (mode == "ascend")
      cfg.flow.mode = FlowMode::Ascend;
    else if (mode == "descend")
      cfg.flow.mode = FlowMode::Descend;
    else
      throw SchemaError("\"flow.mode\" must be \"ascend\" or \"descend\"");
    if (fl.contains("stall_tol"))
      cfg.flow.stall_tol = require_number(fl, "stall_tol", "flow");
  }

  if (command == "hull" && !j.contains("hull"))
    throw MissingBlock("command \"hull\" requires a \"hull\" block");
  if (j.contains("hull")) {
    const json& h = j["hull"];
    reject_unknown(h, {"grid", "restarts", "seed", "feasibility_tol"}, "hull");
    cfg.hull.grid_per_axis = require_int(h, "grid", "hull");
    cfg.hull.restarts = require_int(h, "restarts", "hull");
    cfg.hull.seed = static_cast<std::uint64_t>(require_int(h, "seed", "hull"));
    if (h.contains("feasibility_tol"))
      cfg.hull.feasibility_tol = require_number(h, "feasibility_tol", "hull");
  }

  if (command == "check" && !j.contains("checks"))
    throw MissingBlock("command \"check\" requires a \"checks\" block");
  if (j.contains("checks")) {
    const json& c = j["checks"];
    reject_unknown(c, {"seed", "symbol_draws"}, "checks");
    cfg.checks_seed =
        static_cast<std::uint64_t>(require_int(c, "seed", "checks"));
    if (c.contains("symbol_draws"))
      cfg.checks_symbol_draws = require_int(c, "symbol_draws", "checks");
  }

  if (j.contains("output")) {
    const json& o = j["output"];
    reject_unknown(o, {"dir", "dump_eigenfunction", "dump_q_field", "grid"},
                   "output");
    if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
    if (o.contains("dump_eigenfunction"))
      cfg.dump_eigenfunction = o["dump_eigenfunction"].get<bool>();
    if (o.contains("dump_q_field"))
      cfg.dump_q_field = o["dump_q_field"].get<bool>();
    if (o.contains("grid")) cfg.dump_grid = require_int(o, "grid", "output");
  }

  // Config echo with defaults made explicit; reparsing it reproduces an
  // equivalent config.
  json echo = j;
  echo["potential"]["correction"] = polynomial_to_json(cfg.spec.correction);
  echo["solver"]["quadrature_nodes"] = cfg.solver.quadrature_nodes;
  cfg.echo = std::move(echo);
  return cfg;
}

RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j, command);
}

}  // namespace toric
