#include "orthostab/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <unistd.h>

#include "orthostab/config.hpp"
#include "orthostab/serialize.hpp"
#include "orthostab/verifier.hpp"

namespace orthostab::cli {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    o << content;
    o.flush();
    if (!o) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

namespace {

using io::Json;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_max;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> bound_scale;
  bool emit_trace = false;
  std::optional<std::string> axioms_check;
  std::vector<double> x, y;
  std::optional<double> lambda;
  std::optional<std::string> mode;
  std::optional<double> epsilon;
  std::optional<int> radius;
  std::optional<std::uint64_t> alt_seed;
};

// A report ready to be written: JSON always, CSV per command.
struct Output {
  Json json;
  std::string csv;
  std::vector<std::pair<std::string, std::string>> extra;  // suffix, content
};

class Context {
 public:
  Context(const Options& o, std::ostream& out, std::ostream& err) : opts_(o), out_(out), err_(err) {}

  ExperimentConfig load() const {
    Json j = Json::object();
    std::filesystem::path base;
    if (!opts_.config_path.empty()) {
      std::ifstream in(opts_.config_path);
      if (!in) throw ConfigError("cannot open config '" + opts_.config_path + "'");
      try {
        j = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
      }
      base = std::filesystem::path(opts_.config_path).parent_path();
    }
    const bool config_has_seed = j.is_object() && j.contains("seed");
    ExperimentConfig c = parse_config(j, base);
    if (opts_.seed) {
      c.check.seed = *opts_.seed;
    } else if (!config_has_seed) {
      if (const char* env = std::getenv("ORTHOSTAB_SEED"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0' || env[0] == '-') throw ConfigError("ORTHOSTAB_SEED must be a non-negative integer");
        c.check.seed = v;
      }
    }
    if (opts_.n_max) {
      if (*opts_.n_max < 1 || *opts_.n_max > 1000) throw ConfigError("--n-max must be in [1, 1000]");
      c.check.n_max = *opts_.n_max;
    }
    if (opts_.out) c.output.path = *opts_.out;
    if (opts_.format) c.output.format = output_format_from_string(*opts_.format);
    if (opts_.bound_scale) {
      if (!(*opts_.bound_scale > 0.0)) throw ConfigError("--bound-scale must be > 0");
      c.check.bound_scale = *opts_.bound_scale;
    }
    if (opts_.axioms_check) {
      if (*opts_.axioms_check != "axioms" && *opts_.axioms_check != "symmetry" && *opts_.axioms_check != "all") {
        throw ConfigError("--check must be axioms, symmetry or all");
      }
      c.axioms_check = *opts_.axioms_check;
    }
    if (!opts_.x.empty()) c.x = vector_arg(opts_.x, "--x", c.dimension);
    if (!opts_.y.empty()) c.y = vector_arg(opts_.y, "--y", c.dimension);
    if (opts_.lambda) {
      c.thales_lambda = *opts_.lambda;
      c.degenerate.lambda = *opts_.lambda;
    }
    if (opts_.mode) {
      try {
        c.degenerate.mode = degenerate_mode_from_string(*opts_.mode);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--mode: ") + e.what());
      }
    }
    if (opts_.epsilon) c.degenerate.epsilon = *opts_.epsilon;
    if (opts_.radius) {
      if (*opts_.radius < 1 || *opts_.radius > 64) throw ConfigError("--radius must be in [1, 64]");
      c.grid_radius = *opts_.radius;
    }
    if (opts_.alt_seed) c.alt_seed = *opts_.alt_seed;
    if (opts_.emit_trace) {
      if (c.output.path.empty()) throw ConfigError("--emit-trace needs an output path (--out)");
      c.check.keep_traces = true;
    }
    return c;
  }

  void emit(const ExperimentConfig& c, const Output& o) const {
    const std::string json = io::dump(o.json);
    if (c.output.path.empty()) {
      out_ << (c.output.format == OutputFormat::Csv ? o.csv : json);
      return;
    }
    const std::string base = c.output.path;
    if (c.output.format != OutputFormat::Csv) write_atomic(base + ".json", json);
    if (c.output.format != OutputFormat::Json) write_atomic(base + ".csv", o.csv);
    for (const auto& [suffix, content] : o.extra) write_atomic(base + suffix, content);
  }

  std::ostream& err() const { return err_; }

 private:
  static Vector vector_arg(const std::vector<double>& v, const char* flag, std::size_t dim) {
    if (v.size() != dim) {
      throw ConfigError(std::string(flag) + ": expected " + std::to_string(dim) + " coordinates");
    }
    try {
      return Vector(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(flag) + ": " + e.what());
    }
  }

  const Options& opts_;
  std::ostream& out_;
  std::ostream& err_;
};

const PexiderTriple& need_triple(const ExperimentConfig& c, const char* cmd) {
  if (!c.triple) throw ConfigError(std::string(cmd) + " needs a 'triple' in the config");
  return *c.triple;
}

const Vector& need_x(const ExperimentConfig& c, const char* cmd) {
  if (!c.x) throw ConfigError(std::string(cmd) + " needs a point x (config or --x)");
  return *c.x;
}

int cmd_axioms(const Context& ctx, const ExperimentConfig& c) {
  Output o;
  bool clean = true;
  const PairSampler master(c.check.seed, c.dimension, c.check.r_lo, c.check.r_hi);
  o.json = Json{{"schema", kReportSchema}, {"kind", "axioms"}, {"relation", c.relation.name()},
                {"dim", c.dimension},      {"seed", c.check.seed}, {"check", c.axioms_check}};
  if (c.axioms_check != "symmetry") {
    PairSampler s = master;
    const AxiomReport r = axiom_suite(c.relation, s, c.axiom_samples);
    clean = clean && r.clean();
    o.json["axioms"] = io::to_json(r)["axioms"];
    o.csv = io::axioms_csv(r);
  }
  if (c.axioms_check != "axioms") {
    PairSampler s = master.split(5);
    const auto w = symmetry_probe(c.relation, s, c.check.symmetry_samples);
    clean = clean && !w.has_value();
    o.json["symmetry"] = Json{{"samples", c.check.symmetry_samples},
                              {"holds", !w.has_value()},
                              {"witness", w ? io::to_json(*w) : Json(nullptr)}};
    if (o.csv.empty()) o.csv = "axiom,checked,violations,max_residual,tolerance,search_failures\n";
    o.csv += "symmetry," + std::to_string(c.check.symmetry_samples) + "," + (w ? "1" : "0") + ",,,0\n";
  }
  o.json["clean"] = clean;
  ctx.emit(c, o);
  return clean ? kPass : kPropertyFailure;
}

int cmd_orth_check(const Context& ctx, const ExperimentConfig& c) {
  const Vector& x = need_x(c, "orth check");
  if (!c.y) throw ConfigError("orth check needs a point y (config or --y)");
  const OrthoVerdict v = decide(c.relation, x, *c.y);
  Output o;
  o.json = Json{{"schema", kReportSchema}, {"kind", "orth_check"}, {"relation", c.relation.name()},
                {"x", io::to_json(x)},     {"y", io::to_json(*c.y)}, {"orthogonal", v.orthogonal},
                {"residual", v.residual},  {"threshold", v.threshold}};
  o.csv = io::key_value_csv({{"orthogonal", v.orthogonal ? "true" : "false"},
                             {"residual", io::format_double(v.residual)},
                             {"threshold", io::format_double(v.threshold)}});
  ctx.emit(c, o);
  return v.orthogonal ? kPass : kPropertyFailure;
}

int cmd_thales(const Context& ctx, const ExperimentConfig& c) {
  const Vector& x = need_x(c, "thales");
  if (x.is_zero()) throw ConfigError("thales: x must be nonzero");
  // Plane: x and the first coordinate axis independent of it.
  std::size_t axis = 0;
  while (axis + 1 < c.dimension && independence_ratio(x, Vector::unit(c.dimension, axis)) <= 1e-6) ++axis;
  const Vector other = Vector::unit(c.dimension, axis);
  if (c.dimension < 2 || independence_ratio(x, other) <= 1e-6) throw ConfigError("thales: needs dimension >= 2");
  const ThalesSolution s = thales_solve(c.relation, x, c.thales_lambda, {x, other});
  const Vector lx_minus = c.thales_lambda * x - s.y0;
  Output o;
  o.json = Json{{"schema", kReportSchema},
                {"kind", "thales"},
                {"relation", c.relation.name()},
                {"x", io::to_json(x)},
                {"lambda", c.thales_lambda},
                {"y0", io::to_json(s.y0)},
                {"residual", s.residual},
                {"x_orth_y0", is_orthogonal(c.relation, x, s.y0)},
                {"sum_orth_diff", is_orthogonal(c.relation, x + s.y0, lx_minus)}};
  std::vector<std::pair<std::string, std::string>> rows{{"lambda", io::format_double(c.thales_lambda)},
                                                        {"residual", io::format_double(s.residual)}};
  for (std::size_t k = 0; k < s.y0.dim(); ++k) rows.emplace_back("y0_" + std::to_string(k), io::format_double(s.y0[k]));
  o.csv = io::key_value_csv(rows);
  ctx.emit(c, o);
  return kPass;
}

int cmd_hyers(const Context& ctx, const ExperimentConfig& c) {
  const Vector& x = need_x(c, "hyers");
  MapModel model;
  if (c.hyers_model) {
    model = *c.hyers_model;
  } else {
    model = need_triple(c, "hyers").f;
  }
  HyersOptions opts;
  opts.n_max = c.check.n_max;
  opts.stop_tol = c.check.stop_tol;
  opts.epsilon = c.triple ? c.triple->epsilon_design : 0.0;
  const HyersTrace t = hyers_limit(as_map(model), x, opts, c.hyers_scaling);
  Output o;
  o.json = io::to_json(t);
  o.json["schema"] = kReportSchema;
  o.json["kind"] = "hyers";
  o.csv = io::hyers_trace_csv(t);
  ctx.emit(c, o);
  if (t.verdict == HyersVerdict::Diverged) {
    ctx.err() << "hyers: sequence diverged: " << t.diagnostic << "\n";
    return kNumericalAbort;
  }
  return kPass;
}

int cmd_verify(const Context& ctx, const ExperimentConfig& c) {
  const StabilityReport r = verify_theorem(need_triple(c, "verify"), c.check);
  Output o;
  o.json = io::to_json(r);
  o.csv = io::checks_csv(r.checks);
  if (c.check.keep_traces) o.extra.emplace_back(".trace.csv", io::hyers_traces_tidy_csv(r.traces));
  ctx.emit(c, o);
  if (r.status == "diverged") {
    ctx.err() << "verify: " << r.diagnostic << "\n";
    return kNumericalAbort;
  }
  for (const auto& k : r.checks) {
    if (!k.pass) ctx.err() << "verify: check " << k.name << " failed: " << k.measured << " > " << k.bound << "\n";
  }
  return r.passed() ? kPass : kPropertyFailure;
}

int cmd_uniqueness(const Context& ctx, const ExperimentConfig& c) {
  if (c.check.n_max <= 5) throw ConfigError("uniqueness: n_max must exceed 5");
  const UniquenessReport r = uniqueness_probe(need_triple(c, "uniqueness"), c.check, c.alt_seed);
  Output o;
  o.json = io::to_json(r);
  o.csv = io::checks_csv(r.checks);
  ctx.emit(c, o);
  if (r.status == "diverged") return kNumericalAbort;
  return r.passed() ? kPass : kPropertyFailure;
}

int cmd_degenerate(const Context& ctx, const ExperimentConfig& c) {
  DegenerateReport r;
  try {
    r = remark_24_degenerate(c.degenerate.mode, c.degenerate.lambda, c.degenerate.epsilon, c.check, c.dimension,
                             c.relation);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Output o;
  o.json = io::to_json(r);
  o.csv = io::checks_csv(r.checks);
  ctx.emit(c, o);
  if (r.status == "diverged") return kNumericalAbort;
  return r.passed() ? kPass : kPropertyFailure;
}

int cmd_counterexample(const Context& ctx, const ExperimentConfig& c) {
  const Z2Certificate z = z2_remark_check(c.grid_radius);
  Output o;
  o.json = io::to_json(z);
  o.csv = io::key_value_csv({{"grid_radius", std::to_string(z.grid_radius)},
                             {"grid_points", std::to_string(z.grid_points)},
                             {"pairs_checked", std::to_string(z.pairs_checked)},
                             {"failures", std::to_string(z.failures)},
                             {"value_at_zero", std::to_string(z.value_at_zero)},
                             {"passed", z.passed() ? "true" : "false"}});
  ctx.emit(c, o);
  return z.passed() ? kPass : kPropertyFailure;
}

int cmd_explore_even(const Context& ctx, const ExperimentConfig& c) {
  const EvenExploreReport r = even_case_explore(need_triple(c, "explore-even"), c.check);
  Output o;
  o.json = io::to_json(r);
  auto opt = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); };
  o.csv = io::key_value_csv({{"epsilon_sampled", io::format_double(r.epsilon_sampled)},
                             {"sup_f_minus_q", io::format_double(r.sup_f_minus_q)},
                             {"sup_g_minus_q", io::format_double(r.sup_g_minus_q)},
                             {"sup_h_minus_q", io::format_double(r.sup_h_minus_q)},
                             {"alpha", opt(r.alpha)},
                             {"beta", opt(r.beta)},
                             {"gamma", opt(r.gamma)},
                             {"orthogonal_quadratic_residual", io::format_double(r.orthogonal_quadratic_residual)}});
  ctx.emit(c, o);
  return r.status == "diverged" ? kNumericalAbort : kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"Numerical checks for orthogonally restricted Pexider equations",
               args.empty() ? "orthostab" : args.front()};
  app.require_subcommand(1);
  app.add_option("-c,--config", opts.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", opts.seed, "Master seed (default: config, then ORTHOSTAB_SEED, then 0)");
  app.add_option("--n-max", opts.n_max, "Hyers iteration budget");
  app.add_option("-o,--out", opts.out, "Output base path; .json/.csv are appended");
  app.add_option("--format", opts.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  CLI::App* axioms = sub("axioms", "Sample the orthogonality axioms and symmetry");
  axioms->add_option("--check", opts.axioms_check, "axioms, symmetry or all");
  CLI::App* orth = sub("orth", "Orthogonality queries");
  orth->require_subcommand(1);
  CLI::App* orth_check = orth->add_subcommand("check", "Decide x _|_ y");
  orth_check->fallthrough();
  orth_check->add_option("--x", opts.x, "x coordinates")->delimiter(',');
  orth_check->add_option("--y", opts.y, "y coordinates")->delimiter(',');
  CLI::App* thales = sub("thales", "Solve for the Thalesian y0");
  thales->add_option("--x", opts.x, "x coordinates")->delimiter(',');
  thales->add_option("--lambda", opts.lambda, "lambda >= 0");
  CLI::App* hyers = sub("hyers", "Hyers sequence at one point");
  hyers->add_option("--x", opts.x, "x coordinates")->delimiter(',');
  CLI::App* verify = sub("verify", "Run the stability proof chain on a triple");
  verify->add_flag("--emit-trace", opts.emit_trace, "Also write <out>.trace.csv with every probe's iterates");
  verify->add_option("--bound-scale", opts.bound_scale, "Multiply every bound (harness self-test)");
  CLI::App* uniq = sub("uniqueness", "Compare two pipeline runs (n_max vs n_max - 5)");
  uniq->add_option("--alt-seed", opts.alt_seed, "Seed of the second run");
  CLI::App* degen = sub("degenerate", "Degenerate ties g = lambda f or h = lambda f");
  degen->add_option("--mode", opts.mode, "g_eq_lambda_f or h_eq_lambda_f");
  degen->add_option("--lambda", opts.lambda, "lambda");
  degen->add_option("--epsilon", opts.epsilon, "premise epsilon");
  CLI::App* counter = sub("counterexample", "Exhaustive Z_2 certificate on an integer grid");
  counter->add_option("--radius", opts.radius, "grid radius >= 1");
  CLI::App* even = sub("explore-even", "Even-f exploration with 4^-n scaling");

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }

  const Context ctx(opts, out, err);
  try {
    const ExperimentConfig c = ctx.load();
    if (*axioms) return cmd_axioms(ctx, c);
    if (*orth_check) return cmd_orth_check(ctx, c);
    if (*thales) return cmd_thales(ctx, c);
    if (*hyers) return cmd_hyers(ctx, c);
    if (*verify) return cmd_verify(ctx, c);
    if (*uniq) return cmd_uniqueness(ctx, c);
    if (*degen) return cmd_degenerate(ctx, c);
    if (*counter) return cmd_counterexample(ctx, c);
    if (*even) return cmd_explore_even(ctx, c);
    err << "no subcommand\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const HypothesisViolation& e) {
    err << e.code() << ": " << e.what() << "\n";
    return kPropertyFailure;
  } catch (const SearchFailed& e) {
    err << "numerical abort: " << e.what() << "\n";
    return kNumericalAbort;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical abort: " << e.what() << "\n";
    return kNumericalAbort;
  }
}

}  // namespace orthostab::cli
