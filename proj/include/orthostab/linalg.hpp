#pragma once

// Small dense real linear algebra: vectors of runtime dimension, row-major
// matrices, and the family of norms used for the ambient space.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orthostab {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Point of the domain space X (or of the codomain R^m).
///
/// Coordinates are checked for finiteness when a vector is built from user
/// data. Arithmetic results are not re-checked; callers that scale by large
/// factors guard magnitudes themselves.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0);
  Vector(std::initializer_list<double> coords);
  explicit Vector(std::vector<double> coords);

  static Vector unchecked(std::vector<double> coords);
  static Vector unit(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& data() const { return coords_; }

  bool is_zero() const;
  bool all_finite() const;

  Vector operator-() const;
  friend Vector operator+(const Vector& a, const Vector& b);
  friend Vector operator-(const Vector& a, const Vector& b);
  friend Vector operator*(double s, const Vector& a);
  friend Vector operator*(const Vector& a, double s) { return s * a; }
  friend Vector operator/(const Vector& a, double s);
  friend bool operator==(const Vector& a, const Vector& b) = default;

  // x + s*y without a temporary for s*y.
  static Vector axpy(const Vector& x, double s, const Vector& y);

 private:
  struct NoCheck {};
  Vector(std::vector<double> coords, NoCheck) : coords_(std::move(coords)) {}

  std::vector<double> coords_;
};

void require_same_dim(const Vector& a, const Vector& b, const char* what);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<std::vector<double>> to_rows() const;

  Vector apply(const Vector& x) const;
  // x^T M y for square M.
  double bilinear(const Vector& x, const Vector& y) const;
  bool is_symmetric(double tol = 1e-12) const;

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class NormKind { L1, L2, Lp, LInf };

/// Ambient norm. A non-empty `weights` list turns the base norm into
/// ||x|| = base(w_1 x_1, ..., w_d x_d).
struct NormSpec {
  NormKind kind = NormKind::L2;
  double p = 2.0;
  std::vector<double> weights;

  static NormSpec l1() { return {NormKind::L1, 1.0, {}}; }
  static NormSpec l2() { return {NormKind::L2, 2.0, {}}; }
  static NormSpec linf() { return {NormKind::LInf, 0.0, {}}; }
  static NormSpec lp(double p);
  static NormSpec weighted(std::vector<double> weights, NormSpec base);

  void validate() const;
  std::string name() const;
  friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

double norm_eval(const NormSpec& norm, const Vector& x);
double norm_eval(const NormSpec& norm, std::span<const double> x);

double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
// Max-abs norm; also the norm used on the codomain R^m.
double norm_inf(const Vector& x);

/// Unit vector u in span(plane) with dot(x, u) = 0. Sign convention: the
/// first coordinate with |u_i| > 1e-14 is positive.
///
/// Throws std::invalid_argument when the plane is degenerate, x is zero, or
/// x is farther than tol * ||x|| from the plane.
Vector orthonormal_complement_in_plane(const Vector& x, const std::pair<Vector, Vector>& plane,
                                       double tol = 1e-10);

// Apply the complement sign convention in place of a fresh vector.
Vector canonical_sign(const Vector& u);

}  // namespace orthostab
