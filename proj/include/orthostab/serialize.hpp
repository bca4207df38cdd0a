#pragma once

// JSON and CSV forms of models, triples and reports. Field layout is
// documented in docs/formats.md. Parsers are strict: unknown keys and wrong
// types raise SchemaError.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "orthostab/function_models.hpp"
#include "orthostab/hyers.hpp"
#include "orthostab/orthogonality.hpp"
#include "orthostab/verifier.hpp"

namespace orthostab::io {

using Json = nlohmann::ordered_json;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws SchemaError when `j` is not an object or has a key outside `allowed`.
void require_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const NormSpec& n);
Json to_json(const OrthoRelation& r);
Json to_json(const NoiseSpec& n);
Json to_json(const MapModel& m);
Json to_json(const PexiderTriple& t);
Json to_json(const VectorPair& p);
Json to_json(const AxiomReport& r);
Json to_json(const HyersTrace& t);
Json to_json(const HyersSummary& s);
Json to_json(const CheckResult& c);
Json to_json(const TheoremCheckConfig& c);
Json to_json(const StabilityReport& r);
Json to_json(const UniquenessReport& r);
Json to_json(const DegenerateReport& r);
Json to_json(const Z2Certificate& c);
Json to_json(const EvenExploreReport& r);

Vector vector_from_json(const Json& j, const std::string& where);
Matrix matrix_from_json(const Json& j, const std::string& where);
NormSpec norm_from_json(const Json& j);
OrthoRelation relation_from_json(const Json& j);
NoiseSpec noise_from_json(const Json& j);
MapModel model_from_json(const Json& j);
// Explicit triple {f, g, h, epsilon_design}; the relation is supplied.
PexiderTriple triple_from_json(const Json& j, OrthoRelation rel);

// Pretty JSON with a trailing newline.
std::string dump(const Json& j);

// Shortest decimal that round-trips, as used in every CSV cell.
std::string format_double(double v);

// n,value_0,...,value_{m-1},delta
std::string hyers_trace_csv(const HyersTrace& t);
// probe,n,component,value,delta; one row per (probe, n, component).
std::string hyers_traces_tidy_csv(const std::vector<HyersTrace>& traces);
// name,measured,bound,margin,pass
std::string checks_csv(const std::vector<CheckResult>& checks);
// axiom,checked,violations,max_residual,tolerance,search_failures
std::string axioms_csv(const AxiomReport& r);
// metric,value
std::string key_value_csv(const std::vector<std::pair<std::string, std::string>>& rows);

}  // namespace orthostab::io
