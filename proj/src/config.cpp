#include "orthostab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace orthostab {

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Both: return "both";
  }
  return "?";
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "both") return OutputFormat::Both;
  throw ConfigError("output.format: expected json, csv or both, got '" + s + "'");
}

namespace {

using io::Json;
using io::require_keys;

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::uint64_t count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw ConfigError(where + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::size_t positive(const Json& j, const std::string& where) {
  const std::uint64_t v = count(j, where);
  if (v == 0) throw ConfigError(where + ": must be >= 1");
  return v;
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

TripleSeeds seeds_from(const Json& j, const std::string& where) {
  require_keys(j, {"f", "g", "h"}, where);
  TripleSeeds s;
  if (j.contains("f")) s.f = count(j["f"], where + ".f");
  if (j.contains("g")) s.g = count(j["g"], where + ".g");
  if (j.contains("h")) s.h = count(j["h"], where + ".h");
  return s;
}

struct EpsTriple {
  double f = 0.0, g = 0.0, h = 0.0;
};

EpsTriple eps_from(const Json& j, const std::string& where) {
  EpsTriple e;
  if (j.contains("eps_f")) e.f = number(j["eps_f"], where + ".eps_f");
  if (j.contains("eps_g")) e.g = number(j["eps_g"], where + ".eps_g");
  if (j.contains("eps_h")) e.h = number(j["eps_h"], where + ".eps_h");
  if (!(e.f >= 0.0 && e.g >= 0.0 && e.h >= 0.0)) throw ConfigError(where + ": eps values must be >= 0");
  return e;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

PexiderTriple triple_from(const Json& j, const OrthoRelation& rel, const std::filesystem::path& base_dir) {
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return io::triple_from_json(read_json_file(p), rel);
  }
  if (j.is_object() && j.contains("generate")) {
    require_keys(j, {"generate"}, "triple");
    const Json& g = j["generate"];
    require_keys(g, {"tstar", "eps_f", "eps_g", "eps_h", "seeds"}, "triple.generate");
    if (!g.contains("tstar")) throw ConfigError("triple.generate: missing 'tstar'");
    const Matrix tstar = io::matrix_from_json(g["tstar"], "triple.generate.tstar");
    const EpsTriple e = eps_from(g, "triple.generate");
    const TripleSeeds s = g.contains("seeds") ? seeds_from(g["seeds"], "triple.generate.seeds") : TripleSeeds{};
    return make_pexider_instance(tstar, e.f, e.g, e.h, s, rel);
  }
  if (j.is_object() && j.contains("generate_even")) {
    require_keys(j, {"generate_even"}, "triple");
    const Json& g = j["generate_even"];
    require_keys(g, {"forms", "eps_f", "eps_g", "eps_h", "seeds"}, "triple.generate_even");
    if (!g.contains("forms") || !g["forms"].is_array()) {
      throw ConfigError("triple.generate_even: 'forms' must be an array of matrices");
    }
    std::vector<Matrix> forms;
    for (std::size_t k = 0; k < g["forms"].size(); ++k) {
      forms.push_back(io::matrix_from_json(g["forms"][k], "triple.generate_even.forms[" + std::to_string(k) + "]"));
    }
    const EpsTriple e = eps_from(g, "triple.generate_even");
    const TripleSeeds s = g.contains("seeds") ? seeds_from(g["seeds"], "triple.generate_even.seeds") : TripleSeeds{};
    return make_even_instance(std::move(forms), e.f, e.g, e.h, s, rel);
  }
  return io::triple_from_json(j, rel);
}

Vector vector_of_dim(const Json& j, const std::string& where, std::size_t dim) {
  Vector v = io::vector_from_json(j, where);
  if (v.dim() != dim) {
    throw ConfigError(where + ": expected " + std::to_string(dim) + " coordinates, got " + std::to_string(v.dim()));
  }
  return v;
}

ExperimentConfig parse(const Json& j, const std::filesystem::path& base_dir) {
  require_keys(j,
               {"description", "relation", "dimension", "triple", "seed", "n_max", "stop_tol", "samples",
                "epsilon_mode", "bound_scale", "radius", "output", "axioms", "orth", "thales", "hyers",
                "degenerate", "counterexample", "uniqueness"},
               "config");
  ExperimentConfig c;
  if (j.contains("description")) text(j["description"], "description");
  if (j.contains("relation")) c.relation = io::relation_from_json(j["relation"]);
  if (j.contains("dimension")) c.dimension = positive(j["dimension"], "dimension");
  if (j.contains("seed")) c.check.seed = count(j["seed"], "seed");
  if (j.contains("n_max")) {
    const std::uint64_t n = positive(j["n_max"], "n_max");
    if (n > 1000) throw ConfigError("n_max: must be <= 1000");
    c.check.n_max = static_cast<int>(n);
  }
  if (j.contains("stop_tol")) c.check.stop_tol = number(j["stop_tol"], "stop_tol");
  if (j.contains("epsilon_mode")) {
    const std::string m = text(j["epsilon_mode"], "epsilon_mode");
    if (m == "sampled") {
      c.check.epsilon_mode = EpsilonMode::Sampled;
    } else if (m == "design") {
      c.check.epsilon_mode = EpsilonMode::Design;
    } else {
      throw ConfigError("epsilon_mode: expected 'sampled' or 'design'");
    }
  }
  if (j.contains("bound_scale")) c.check.bound_scale = number(j["bound_scale"], "bound_scale");
  if (j.contains("samples")) {
    const Json& s = j["samples"];
    require_keys(s, {"pairs", "probes", "limit_pairs", "part_pairs", "symmetry", "axioms"}, "samples");
    if (s.contains("pairs")) c.check.n_pairs = positive(s["pairs"], "samples.pairs");
    if (s.contains("probes")) c.check.n_probes = positive(s["probes"], "samples.probes");
    if (s.contains("limit_pairs")) c.check.n_limit_pairs = positive(s["limit_pairs"], "samples.limit_pairs");
    if (s.contains("part_pairs")) c.check.n_part_pairs = positive(s["part_pairs"], "samples.part_pairs");
    if (s.contains("symmetry")) c.check.symmetry_samples = positive(s["symmetry"], "samples.symmetry");
    if (s.contains("axioms")) c.axiom_samples = positive(s["axioms"], "samples.axioms");
  }
  if (j.contains("radius")) {
    const Json& r = j["radius"];
    require_keys(r, {"lo", "hi"}, "radius");
    if (r.contains("lo")) c.check.r_lo = number(r["lo"], "radius.lo");
    if (r.contains("hi")) c.check.r_hi = number(r["hi"], "radius.hi");
    if (!(c.check.r_lo > 0.0 && c.check.r_lo <= c.check.r_hi && std::isfinite(c.check.r_hi))) {
      throw ConfigError("radius: need 0 < lo <= hi < inf");
    }
  }
  if (j.contains("output")) {
    const Json& o = j["output"];
    require_keys(o, {"path", "format"}, "output");
    if (o.contains("path")) c.output.path = text(o["path"], "output.path");
    if (o.contains("format")) c.output.format = output_format_from_string(text(o["format"], "output.format"));
  }
  if (j.contains("triple")) {
    c.triple = triple_from(j["triple"], c.relation, base_dir);
    if (c.triple->f.in_dim != c.dimension) {
      throw ConfigError("triple: in_dim " + std::to_string(c.triple->f.in_dim) + " does not match dimension " +
                        std::to_string(c.dimension));
    }
  }
  if (j.contains("axioms")) {
    require_keys(j["axioms"], {"check"}, "axioms");
    if (j["axioms"].contains("check")) c.axioms_check = text(j["axioms"]["check"], "axioms.check");
    if (c.axioms_check != "axioms" && c.axioms_check != "symmetry" && c.axioms_check != "all") {
      throw ConfigError("axioms.check: expected axioms, symmetry or all");
    }
  }
  if (j.contains("orth")) {
    const Json& o = j["orth"];
    require_keys(o, {"x", "y"}, "orth");
    if (o.contains("x")) c.x = vector_of_dim(o["x"], "orth.x", c.dimension);
    if (o.contains("y")) c.y = vector_of_dim(o["y"], "orth.y", c.dimension);
  }
  if (j.contains("thales")) {
    const Json& t = j["thales"];
    require_keys(t, {"x", "lambda"}, "thales");
    if (t.contains("x")) c.x = vector_of_dim(t["x"], "thales.x", c.dimension);
    if (t.contains("lambda")) c.thales_lambda = number(t["lambda"], "thales.lambda");
    if (!(c.thales_lambda >= 0.0) || !std::isfinite(c.thales_lambda)) throw ConfigError("thales.lambda: must be >= 0");
  }
  if (j.contains("hyers")) {
    const Json& h = j["hyers"];
    require_keys(h, {"x", "scaling", "model"}, "hyers");
    if (h.contains("x")) c.x = vector_of_dim(h["x"], "hyers.x", c.dimension);
    if (h.contains("scaling")) {
      const std::string s = text(h["scaling"], "hyers.scaling");
      if (s == "additive") {
        c.hyers_scaling = HyersScaling::Additive;
      } else if (s == "quadratic") {
        c.hyers_scaling = HyersScaling::Quadratic;
      } else {
        throw ConfigError("hyers.scaling: expected additive or quadratic");
      }
    }
    if (h.contains("model")) {
      c.hyers_model = io::model_from_json(h["model"]);
      if (c.hyers_model->in_dim != c.dimension) throw ConfigError("hyers.model: in_dim does not match dimension");
    }
  }
  if (j.contains("degenerate")) {
    const Json& d = j["degenerate"];
    require_keys(d, {"mode", "lambda", "epsilon"}, "degenerate");
    if (d.contains("mode")) {
      try {
        c.degenerate.mode = degenerate_mode_from_string(text(d["mode"], "degenerate.mode"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("degenerate.mode: ") + e.what());
      }
    }
    if (d.contains("lambda")) c.degenerate.lambda = number(d["lambda"], "degenerate.lambda");
    if (d.contains("epsilon")) c.degenerate.epsilon = number(d["epsilon"], "degenerate.epsilon");
    if (c.degenerate.mode == DegenerateMode::GEqLambdaF && c.degenerate.lambda == 1.0) {
      throw ConfigError("degenerate.lambda: mode g_eq_lambda_f requires lambda != 1");
    }
    if (c.degenerate.mode == DegenerateMode::HEqLambdaF && c.degenerate.lambda == 0.0) {
      throw ConfigError("degenerate.lambda: mode h_eq_lambda_f requires lambda != 0");
    }
    if (!(c.degenerate.epsilon >= 0.0)) throw ConfigError("degenerate.epsilon: must be >= 0");
  }
  if (j.contains("counterexample")) {
    const Json& z = j["counterexample"];
    require_keys(z, {"grid_radius"}, "counterexample");
    if (z.contains("grid_radius")) {
      const std::uint64_t r = count(z["grid_radius"], "counterexample.grid_radius");
      if (r < 1 || r > 64) throw ConfigError("counterexample.grid_radius: must be in [1, 64]");
      c.grid_radius = static_cast<int>(r);
    }
  }
  if (j.contains("uniqueness")) {
    const Json& u = j["uniqueness"];
    require_keys(u, {"alt_seed"}, "uniqueness");
    if (u.contains("alt_seed")) c.alt_seed = count(u["alt_seed"], "uniqueness.alt_seed");
  }
  try {
    c.check.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace

ExperimentConfig parse_config(const io::Json& j, const std::filesystem::path& base_dir) {
  try {
    return parse(j, base_dir);
  } catch (const io::SchemaError& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json_file(path), path.parent_path());
}

}  // namespace orthostab
