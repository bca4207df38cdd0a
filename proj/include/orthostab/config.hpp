#pragma once

// Experiment configuration: one JSON document per run. The schema ships as
// docs/config.schema.json; parsing rejects unknown keys before any work.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "orthostab/function_models.hpp"
#include "orthostab/hyers.hpp"
#include "orthostab/orthogonality.hpp"
#include "orthostab/serialize.hpp"
#include "orthostab/verifier.hpp"

namespace orthostab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Json, Csv, Both };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

struct OutputSpec {
  std::string path;  // base path; ".json" / ".csv" are appended. Empty: JSON on stdout.
  OutputFormat format = OutputFormat::Json;
};

struct DegenerateSpec {
  DegenerateMode mode = DegenerateMode::GEqLambdaF;
  double lambda = 2.0;
  double epsilon = 1.0;
};

struct ExperimentConfig {
  OrthoRelation relation = OrthoRelation::inner_product();
  std::size_t dimension = 2;
  std::optional<PexiderTriple> triple;
  TheoremCheckConfig check;       // seed, n_max, sample counts, eps mode
  std::size_t axiom_samples = 1000;
  std::string axioms_check = "all";  // "axioms", "symmetry" or "all"
  std::optional<Vector> x;           // orth, thales, hyers
  std::optional<Vector> y;           // orth
  double thales_lambda = 1.0;
  std::optional<MapModel> hyers_model;
  HyersScaling hyers_scaling = HyersScaling::Additive;
  DegenerateSpec degenerate;
  int grid_radius = 5;
  std::uint64_t alt_seed = 1;
  OutputSpec output;
};

/// `base_dir` resolves a triple given as a file path. Throws ConfigError.
ExperimentConfig parse_config(const io::Json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace orthostab
