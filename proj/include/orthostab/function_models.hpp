#pragma once

// Maps f, g, h : R^d -> R^m built from a linear part, a quadratic part given
// by symmetric bilinear forms, a constant, and deterministic bounded noise.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orthostab/linalg.hpp"
#include "orthostab/orthogonality.hpp"

namespace orthostab {

enum class Parity { None, Odd, Even };

std::string to_string(Parity p);
Parity parity_from_string(const std::string& s);

struct NoiseSpec {
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  Parity parity = Parity::None;
};

/// Pure hash noise: coordinate k of eta(x) is amplitude * (2u - 1) with u in
/// [0, 1) hashed from (seed, k, bits of x); -0.0 is hashed as +0.0. The odd
/// and even variants are (eta(x) -+ eta(-x)) / 2, so each coordinate stays in
/// [-amplitude, amplitude].
Vector deterministic_noise(const NoiseSpec& spec, const Vector& x, std::size_t out_dim);

using VectorMap = std::function<Vector(const Vector&)>;

struct MapModel {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::optional<Matrix> linear;        // out_dim x in_dim
  std::vector<Matrix> quad;            // out_dim symmetric in_dim x in_dim forms, or empty
  std::optional<Vector> constant;      // out_dim
  std::optional<NoiseSpec> noise;
  Parity parity_filter = Parity::None;
  double scale = 1.0;                  // applied to the filtered sum

  static MapModel zero(std::size_t in_dim, std::size_t out_dim);
  static MapModel linear_map(Matrix l);
  static MapModel quadratic(std::vector<Matrix> forms);
  // ||x||_2^2 as a one-output quadratic model.
  static MapModel squared_norm(std::size_t dim);

  MapModel scaled(double s) const;
  bool quadratic_only() const;
  void validate() const;
};

/// scale * P(linear(x) + quad(x, x) + constant + noise(x)) where P is the
/// odd/even projection demanded by parity_filter.
Vector eval(const MapModel& model, const Vector& x);

VectorMap as_map(const MapModel& model);

/// 1/4 (Q(x + y) - Q(x - y)) for a model with a quadratic part only.
Vector polarize(const MapModel& quad_model, const Vector& x, const Vector& y);

// The stored form evaluated directly: B_k(x, y) per output.
Vector stored_bilinear(const MapModel& quad_model, const Vector& x, const Vector& y);

struct PexiderTriple {
  MapModel f;
  MapModel g;
  MapModel h;
  double epsilon_design = 0.0;
  OrthoRelation relation;
};

/// f(x + y) + f(x - y) - 2 g(x) - 2 h(y), measured in the max norm of R^m.
Vector premise_vector(const PexiderTriple& t, const Vector& x, const Vector& y);
double premise_residual(const PexiderTriple& t, const Vector& x, const Vector& y);
// Sum of the magnitudes of the four terms; used to scale rounding checks.
double premise_scale(const PexiderTriple& t, const Vector& x, const Vector& y);

struct TripleSeeds {
  std::uint64_t f = 1;
  std::uint64_t g = 2;
  std::uint64_t h = 3;
};

/// f = T* + odd noise(eps_f) with an odd filter, g = T* + noise(eps_g),
/// h = noise(eps_h); epsilon_design = 2 (eps_f + eps_g + eps_h).
PexiderTriple make_pexider_instance(const Matrix& tstar, double eps_f, double eps_g, double eps_h,
                                    TripleSeeds seeds, OrthoRelation rel);

/// Even counterpart: f = Q + even noise(eps_f) with an even filter,
/// g = Q + noise(eps_g), h = Q + noise(eps_h).
PexiderTriple make_even_instance(std::vector<Matrix> forms, double eps_f, double eps_g,
                                 double eps_h, TripleSeeds seeds, OrthoRelation rel);

/// Integer grid in R^2 with a Z_2-valued table. Values are 0 or 1.
class FiniteModel {
 public:
  FiniteModel(int radius, int value);

  int radius() const { return radius_; }
  std::size_t size() const { return table_.size(); }
  bool contains(int i, int j) const;
  int at(int i, int j) const;

 private:
  int radius_;
  std::vector<int> table_;
};

}  // namespace orthostab
