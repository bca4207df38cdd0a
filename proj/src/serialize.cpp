#include "orthostab/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace orthostab::io {

void require_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError(where + ": unknown key '" + key + "'");
    }
  }
}

namespace {

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  return j.get<double>();
}

std::uint64_t unsigned_int(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw SchemaError(where + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

Json witness_json(const Witness& w) {
  Json v = Json::array();
  for (const auto& x : w.vectors) v.push_back(to_json(x));
  return Json{{"vectors", v}, {"scalars", w.scalars}, {"residual", w.residual}};
}

Json optional_json(const std::optional<VectorPair>& p);

Json optional_json(const std::optional<double>& d) { return d ? Json(*d) : Json(nullptr); }

Json checks_json(const std::vector<CheckResult>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) a.push_back(to_json(c));
  return a;
}

std::string norm_kind_name(NormKind k) {
  switch (k) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Lp: return "lp";
    case NormKind::LInf: return "linf";
  }
  return "?";
}

std::string relation_kind_name(RelationKind k) {
  switch (k) {
    case RelationKind::Trivial: return "trivial";
    case RelationKind::InnerProduct: return "inner_product";
    case RelationKind::BirkhoffJames: return "birkhoff_james";
    case RelationKind::AOrtho: return "a_ortho";
  }
  return "?";
}

}  // namespace

Json to_json(const Vector& v) { return Json(v.data()); }

Json to_json(const Matrix& m) { return Json(m.to_rows()); }

Json to_json(const NormSpec& n) {
  Json j{{"kind", norm_kind_name(n.kind)}};
  if (n.kind == NormKind::Lp) j["p"] = n.p;
  if (!n.weights.empty()) j["weights"] = n.weights;
  return j;
}

Json to_json(const OrthoRelation& r) {
  Json j{{"kind", relation_kind_name(r.kind)}};
  if (r.kind == RelationKind::BirkhoffJames) j["norm"] = to_json(r.norm);
  if (r.kind == RelationKind::AOrtho) j["matrix"] = to_json(r.a);
  j["tolerance"] = r.tolerance;
  return j;
}

Json to_json(const NoiseSpec& n) {
  return Json{{"amplitude", n.amplitude}, {"seed", n.seed}, {"parity", to_string(n.parity)}};
}

Json to_json(const MapModel& m) {
  Json j{{"in_dim", m.in_dim}, {"out_dim", m.out_dim}};
  if (m.linear) j["linear"] = to_json(*m.linear);
  if (!m.quad.empty()) {
    Json forms = Json::array();
    for (const auto& q : m.quad) forms.push_back(to_json(q));
    j["quadratic"] = forms;
  }
  if (m.constant) j["constant"] = to_json(*m.constant);
  if (m.noise) j["noise"] = to_json(*m.noise);
  j["parity_filter"] = to_string(m.parity_filter);
  j["scale"] = m.scale;
  return j;
}

Json to_json(const PexiderTriple& t) {
  return Json{{"f", to_json(t.f)},
              {"g", to_json(t.g)},
              {"h", to_json(t.h)},
              {"epsilon_design", t.epsilon_design},
              {"relation", to_json(t.relation)}};
}

Json to_json(const VectorPair& p) { return Json::array({to_json(p.first), to_json(p.second)}); }

namespace {

Json optional_json(const std::optional<VectorPair>& p) { return p ? to_json(*p) : Json(nullptr); }

}  // namespace

Json to_json(const AxiomReport& r) {
  Json axioms = Json::array();
  for (const auto& a : r.axioms) {
    Json v = Json::array();
    for (const auto& w : a.violations) v.push_back(witness_json(w));
    axioms.push_back(Json{{"axiom", a.axiom},
                          {"checked", a.checked},
                          {"violation_count", a.violations.size()},
                          {"max_residual", a.max_residual},
                          {"tolerance", a.tolerance},
                          {"search_failures", a.search_failures},
                          {"violations", v}});
  }
  return Json{{"schema", kReportSchema}, {"kind", "axioms"}, {"relation", r.relation},
              {"dim", r.dim},           {"seed", r.seed},    {"clean", r.clean()},
              {"axioms", axioms}};
}

Json to_json(const HyersTrace& t) {
  Json it = Json::array();
  for (const auto& i : t.iterates) it.push_back(Json{{"n", i.n}, {"value", to_json(i.value)}, {"delta", i.delta}});
  return Json{{"x", to_json(t.x)},
              {"scaling", to_string(t.scaling)},
              {"verdict", to_string(t.verdict)},
              {"stop_n", t.stop_n},
              {"limit", to_json(t.limit())},
              {"tail_bound", t.tail_bound},
              {"diagnostic", t.diagnostic},
              {"iterates", it}};
}

Json to_json(const HyersSummary& s) {
  Json v = Json::object();
  for (const auto& [k, n] : s.verdicts) v[k] = n;
  return Json{{"probes", s.probes},
              {"verdicts", v},
              {"min_stop_n", s.min_stop_n},
              {"max_stop_n", s.max_stop_n},
              {"max_tail_bound", s.max_tail_bound}};
}

Json to_json(const CheckResult& c) {
  Json w = Json::array();
  for (const auto& v : c.witness) w.push_back(to_json(v));
  return Json{{"name", c.name},         {"bound_formula", c.bound_formula},
              {"constant", optional_json(c.constant)}, {"measured", c.measured},
              {"bound", c.bound},       {"margin", c.margin},
              {"pass", c.pass},         {"count", c.count},
              {"witness", w}};
}

Json to_json(const TheoremCheckConfig& c) {
  return Json{{"seed", c.seed},
              {"n_max", c.n_max},
              {"stop_tol", c.stop_tol},
              {"n_pairs", c.n_pairs},
              {"n_probes", c.n_probes},
              {"n_limit_pairs", c.n_limit_pairs},
              {"n_part_pairs", c.n_part_pairs},
              {"symmetry_samples", c.symmetry_samples},
              {"epsilon_mode", to_string(c.epsilon_mode)},
              {"bound_scale", c.bound_scale},
              {"r_lo", c.r_lo},
              {"r_hi", c.r_hi}};
}

Json to_json(const StabilityReport& r) {
  Json j{{"schema", r.schema},
         {"kind", "verify"},
         {"relation", r.relation},
         {"status", r.status},
         {"passed", r.passed()},
         {"diagnostic", r.diagnostic},
         {"epsilon_design", r.epsilon_design},
         {"epsilon_sampled", r.epsilon_sampled},
         {"epsilon_used", r.epsilon_used},
         {"odd_residual", r.odd_residual},
         {"symmetry_witness", optional_json(r.symmetry_witness)},
         {"thales_attempted", r.thales_attempted},
         {"thales_skipped", r.thales_skipped},
         {"hyers", to_json(r.hyers)},
         {"checks", checks_json(r.checks)}};
  if (r.decomposition) {
    const auto& d = *r.decomposition;
    j["decomposition"] = Json{{"linear_fit", to_json(d.linear_fit)},
                              {"linear_fit_residual", d.linear_fit_residual},
                              {"quadratic_fit_residual", d.quadratic_fit_residual},
                              {"additive_max_norm", d.additive_max_norm},
                              {"quadratic_max_norm", d.quadratic_max_norm},
                              {"T_jensen", d.parts.additive_jensen},
                              {"T_orthogonal_additivity", d.parts.additive_orthogonal_additivity},
                              {"Q_jensen", d.parts.quadratic_jensen},
                              {"Q_orthogonal_additivity", d.parts.quadratic_orthogonal_additivity}};
  } else {
    j["decomposition"] = nullptr;
  }
  j["config"] = to_json(r.config);
  return j;
}

Json to_json(const UniquenessReport& r) {
  return Json{{"schema", r.schema},
              {"kind", "uniqueness"},
              {"status", r.status},
              {"passed", r.passed()},
              {"epsilon", r.epsilon},
              {"n_max_first", r.n_max_first},
              {"n_max_second", r.n_max_second},
              {"stop_first", r.stop_first},
              {"stop_second", r.stop_second},
              {"scales", r.scales},
              {"scaling", r.scaling},
              {"scaling_sup", r.scaling_sup},
              {"checks", checks_json(r.checks)}};
}

Json to_json(const DegenerateReport& r) {
  return Json{{"schema", r.schema},
              {"kind", "degenerate"},
              {"status", r.status},
              {"passed", r.passed()},
              {"mode", to_string(r.mode)},
              {"lambda", r.lambda},
              {"epsilon", r.epsilon},
              {"amplitude", r.amplitude},
              {"epsilon_sampled", r.epsilon_sampled},
              {"hyers", to_json(r.hyers)},
              {"checks", checks_json(r.checks)}};
}

Json to_json(const Z2Certificate& c) {
  return Json{{"schema", kReportSchema},
              {"kind", "counterexample"},
              {"passed", c.passed()},
              {"grid_radius", c.grid_radius},
              {"grid_points", c.grid_points},
              {"pairs_checked", c.pairs_checked},
              {"failures", c.failures},
              {"value_at_zero", c.value_at_zero},
              {"real_identity_holds", c.real_identity_holds},
              {"real_shifted_additivity_max", c.real_shifted_additivity_max}};
}

Json to_json(const EvenExploreReport& r) {
  return Json{{"schema", r.schema},
              {"kind", "explore_even"},
              {"status", r.status},
              {"epsilon_sampled", r.epsilon_sampled},
              {"sup_f_minus_q", r.sup_f_minus_q},
              {"sup_g_minus_q", r.sup_g_minus_q},
              {"sup_h_minus_q", r.sup_h_minus_q},
              {"alpha", optional_json(r.alpha)},
              {"beta", optional_json(r.beta)},
              {"gamma", optional_json(r.gamma)},
              {"orthogonal_quadratic_residual", r.orthogonal_quadratic_residual},
              {"hyers", to_json(r.hyers)}};
}

Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a non-empty array of numbers");
  std::vector<double> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  try {
    return Vector(std::move(c));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    rows.push_back(vector_from_json(j[r], where + "[" + std::to_string(r) + "]").data());
    if (rows.back().size() != rows.front().size()) throw SchemaError(where + ": ragged rows");
  }
  return Matrix::from_rows(rows);
}

NormSpec norm_from_json(const Json& j) {
  require_keys(j, {"kind", "p", "weights"}, "norm");
  if (!j.contains("kind")) throw SchemaError("norm: missing 'kind'");
  const std::string kind = text(j["kind"], "norm.kind");
  NormSpec n;
  if (kind == "l1") {
    n = NormSpec::l1();
  } else if (kind == "l2") {
    n = NormSpec::l2();
  } else if (kind == "linf") {
    n = NormSpec::linf();
  } else if (kind == "lp") {
    if (!j.contains("p")) throw SchemaError("norm: kind 'lp' needs 'p'");
    try {
      n = NormSpec::lp(number(j["p"], "norm.p"));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("norm: ") + e.what());
    }
  } else {
    throw SchemaError("norm.kind: unknown norm '" + kind + "'");
  }
  if (j.contains("p") && kind != "lp") throw SchemaError("norm: 'p' is only valid for kind 'lp'");
  if (j.contains("weights")) {
    try {
      n = NormSpec::weighted(vector_from_json(j["weights"], "norm.weights").data(), n);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("norm: ") + e.what());
    }
  }
  return n;
}

OrthoRelation relation_from_json(const Json& j) {
  require_keys(j, {"kind", "norm", "matrix", "tolerance"}, "relation");
  if (!j.contains("kind")) throw SchemaError("relation: missing 'kind'");
  const std::string kind = text(j["kind"], "relation.kind");
  const double tol = j.contains("tolerance") ? number(j["tolerance"], "relation.tolerance") : 1e-8;
  if (!(tol > 0.0)) throw SchemaError("relation.tolerance: must be > 0");
  auto forbid = [&](const char* key) {
    if (j.contains(key)) throw SchemaError(std::string("relation: '") + key + "' is not valid for kind '" + kind + "'");
  };
  if (kind == "trivial") {
    forbid("norm");
    forbid("matrix");
    return OrthoRelation::trivial();
  }
  if (kind == "inner_product") {
    forbid("norm");
    forbid("matrix");
    return OrthoRelation::inner_product(tol);
  }
  if (kind == "birkhoff_james") {
    forbid("matrix");
    if (!j.contains("norm")) throw SchemaError("relation: kind 'birkhoff_james' needs 'norm'");
    return OrthoRelation::birkhoff_james(norm_from_json(j["norm"]), tol);
  }
  if (kind == "a_ortho") {
    forbid("norm");
    if (!j.contains("matrix")) throw SchemaError("relation: kind 'a_ortho' needs 'matrix'");
    try {
      return OrthoRelation::a_ortho(matrix_from_json(j["matrix"], "relation.matrix"), tol);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("relation: ") + e.what());
    }
  }
  throw SchemaError("relation.kind: unknown relation '" + kind + "'");
}

NoiseSpec noise_from_json(const Json& j) {
  require_keys(j, {"amplitude", "seed", "parity"}, "noise");
  NoiseSpec n;
  if (!j.contains("amplitude")) throw SchemaError("noise: missing 'amplitude'");
  n.amplitude = number(j["amplitude"], "noise.amplitude");
  if (!(n.amplitude >= 0.0) || !std::isfinite(n.amplitude)) throw SchemaError("noise.amplitude: must be >= 0");
  if (j.contains("seed")) n.seed = unsigned_int(j["seed"], "noise.seed");
  if (j.contains("parity")) {
    try {
      n.parity = parity_from_string(text(j["parity"], "noise.parity"));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("noise.parity: ") + e.what());
    }
  }
  return n;
}

MapModel model_from_json(const Json& j) {
  require_keys(j, {"in_dim", "out_dim", "linear", "quadratic", "constant", "noise", "parity_filter", "scale"},
               "model");
  if (!j.contains("in_dim") || !j.contains("out_dim")) throw SchemaError("model: needs 'in_dim' and 'out_dim'");
  MapModel m = MapModel::zero(unsigned_int(j["in_dim"], "model.in_dim"), unsigned_int(j["out_dim"], "model.out_dim"));
  if (j.contains("linear")) m.linear = matrix_from_json(j["linear"], "model.linear");
  if (j.contains("quadratic")) {
    const Json& q = j["quadratic"];
    if (!q.is_array()) throw SchemaError("model.quadratic: expected an array of matrices");
    for (std::size_t k = 0; k < q.size(); ++k) {
      m.quad.push_back(matrix_from_json(q[k], "model.quadratic[" + std::to_string(k) + "]"));
    }
  }
  if (j.contains("constant")) m.constant = vector_from_json(j["constant"], "model.constant");
  if (j.contains("noise")) m.noise = noise_from_json(j["noise"]);
  if (j.contains("parity_filter")) {
    try {
      m.parity_filter = parity_from_string(text(j["parity_filter"], "model.parity_filter"));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("model.parity_filter: ") + e.what());
    }
  }
  if (j.contains("scale")) m.scale = number(j["scale"], "model.scale");
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("model: ") + e.what());
  }
  return m;
}

PexiderTriple triple_from_json(const Json& j, OrthoRelation rel) {
  require_keys(j, {"f", "g", "h", "epsilon_design"}, "triple");
  for (const char* k : {"f", "g", "h"}) {
    if (!j.contains(k)) throw SchemaError(std::string("triple: missing '") + k + "'");
  }
  PexiderTriple t;
  t.f = model_from_json(j["f"]);
  t.g = model_from_json(j["g"]);
  t.h = model_from_json(j["h"]);
  if (t.g.in_dim != t.f.in_dim || t.h.in_dim != t.f.in_dim || t.g.out_dim != t.f.out_dim ||
      t.h.out_dim != t.f.out_dim) {
    throw SchemaError("triple: f, g and h must share in_dim and out_dim");
  }
  if (j.contains("epsilon_design")) t.epsilon_design = number(j["epsilon_design"], "triple.epsilon_design");
  t.relation = std::move(rel);
  return t;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string hyers_trace_csv(const HyersTrace& t) {
  std::ostringstream os;
  os << "n";
  const std::size_t m = t.iterates.empty() ? 0 : t.iterates.front().value.dim();
  for (std::size_t k = 0; k < m; ++k) os << ",value_" << k;
  os << ",delta\n";
  for (const auto& i : t.iterates) {
    os << i.n;
    for (std::size_t k = 0; k < m; ++k) os << ',' << format_double(i.value[k]);
    os << ',' << format_double(i.delta) << '\n';
  }
  return os.str();
}

std::string hyers_traces_tidy_csv(const std::vector<HyersTrace>& traces) {
  std::ostringstream os;
  os << "probe,n,component,value,delta\n";
  for (std::size_t p = 0; p < traces.size(); ++p) {
    for (const auto& i : traces[p].iterates) {
      for (std::size_t k = 0; k < i.value.dim(); ++k) {
        os << p << ',' << i.n << ',' << k << ',' << format_double(i.value[k]) << ',' << format_double(i.delta)
           << '\n';
      }
    }
  }
  return os.str();
}

std::string checks_csv(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  os << "name,measured,bound,margin,pass\n";
  for (const auto& c : checks) {
    os << c.name << ',' << format_double(c.measured) << ',' << format_double(c.bound) << ','
       << format_double(c.margin) << ',' << (c.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string axioms_csv(const AxiomReport& r) {
  std::ostringstream os;
  os << "axiom,checked,violations,max_residual,tolerance,search_failures\n";
  for (const auto& a : r.axioms) {
    os << a.axiom << ',' << a.checked << ',' << a.violations.size() << ',' << format_double(a.max_residual) << ','
       << format_double(a.tolerance) << ',' << a.search_failures << '\n';
  }
  return os.str();
}

std::string key_value_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ostringstream os;
  os << "metric,value\n";
  for (const auto& [k, v] : rows) os << k << ',' << v << '\n';
  return os.str();
}

}  // namespace orthostab::io
