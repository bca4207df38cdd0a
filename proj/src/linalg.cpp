#include "orthostab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orthostab {

namespace {

void check_finite(const std::vector<double>& c) {
  for (double v : c) {
    if (!std::isfinite(v)) throw std::invalid_argument("Vector: non-finite coordinate");
  }
}

}  // namespace

Vector::Vector(std::size_t dim, double fill) : coords_(dim, fill) {
  check_finite(coords_);
}

Vector::Vector(std::initializer_list<double> coords) : coords_(coords) { check_finite(coords_); }

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) { check_finite(coords_); }

Vector Vector::unchecked(std::vector<double> coords) { return Vector(std::move(coords), NoCheck{}); }

Vector Vector::unit(std::size_t dim, std::size_t axis) {
  std::vector<double> c(dim, 0.0);
  c.at(axis) = 1.0;
  return Vector(std::move(c), NoCheck{});
}

bool Vector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return v == 0.0; });
}

bool Vector::all_finite() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return std::isfinite(v); });
}

Vector Vector::operator-() const {
  std::vector<double> c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -coords_[i];
  return Vector(std::move(c), NoCheck{});
}

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw DimensionMismatch(os.str());
  }
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "operator+");
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords_[i] + b.coords_[i];
  return Vector(std::move(c), Vector::NoCheck{});
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "operator-");
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords_[i] - b.coords_[i];
  return Vector(std::move(c), Vector::NoCheck{});
}

Vector operator*(double s, const Vector& a) {
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = s * a.coords_[i];
  return Vector(std::move(c), Vector::NoCheck{});
}

Vector operator/(const Vector& a, double s) {
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords_[i] / s;
  return Vector(std::move(c), Vector::NoCheck{});
}

Vector Vector::axpy(const Vector& x, double s, const Vector& y) {
  require_same_dim(x, y, "axpy");
  std::vector<double> c(x.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coords_[i] + s * y.coords_[i];
  return Vector(std::move(c), NoCheck{});
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) throw DimensionMismatch("Matrix: entry count does not match shape");
  for (double v : data_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Matrix: non-finite entry");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw DimensionMismatch("Matrix: ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r].assign(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }
  return out;
}

Vector Matrix::apply(const Vector& x) const {
  if (x.dim() != cols_) throw DimensionMismatch("Matrix::apply: dimension mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += data_[r * cols_ + c] * x[c];
    out[r] = s;
  }
  return Vector::unchecked(std::move(out));
}

double Matrix::bilinear(const Vector& x, const Vector& y) const {
  if (rows_ != cols_ || x.dim() != rows_ || y.dim() != cols_) {
    throw DimensionMismatch("Matrix::bilinear: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) row += data_[r * cols_ + c] * y[c];
    s += x[r] * row;
  }
  return s;
}

bool Matrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r + 1; c < cols_; ++c) {
      const double a = (*this)(r, c);
      const double b = (*this)(c, r);
      if (std::abs(a - b) > tol * std::max({1.0, std::abs(a), std::abs(b)})) return false;
    }
  }
  return true;
}

NormSpec NormSpec::lp(double p) {
  NormSpec n{NormKind::Lp, p, {}};
  n.validate();
  return n;
}

NormSpec NormSpec::weighted(std::vector<double> weights, NormSpec base) {
  base.weights = std::move(weights);
  base.validate();
  return base;
}

void NormSpec::validate() const {
  if (kind == NormKind::Lp && !(p >= 1.0 && std::isfinite(p))) {
    throw std::invalid_argument("NormSpec: Lp requires finite p >= 1");
  }
  for (double w : weights) {
    if (!(w > 0.0 && std::isfinite(w))) throw std::invalid_argument("NormSpec: weights must be positive");
  }
}

std::string NormSpec::name() const {
  std::string base;
  switch (kind) {
    case NormKind::L1: base = "L1"; break;
    case NormKind::L2: base = "L2"; break;
    case NormKind::LInf: base = "LInf"; break;
    case NormKind::Lp: {
      std::ostringstream os;
      os << "L" << p;
      base = os.str();
      break;
    }
  }
  return weights.empty() ? base : "Weighted(" + base + ")";
}

double norm_eval(const NormSpec& norm, std::span<const double> x) {
  const bool weighted = !norm.weights.empty();
  if (weighted && norm.weights.size() != x.size()) {
    throw DimensionMismatch("norm_eval: weight count does not match dimension");
  }
  auto coord = [&](std::size_t i) { return std::abs(weighted ? norm.weights[i] * x[i] : x[i]); };

  double peak = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) peak = std::max(peak, coord(i));
  if (peak == 0.0) return 0.0;

  switch (norm.kind) {
    case NormKind::LInf:
      return peak;
    case NormKind::L1: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += coord(i);
      return s;
    }
    case NormKind::L2: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = coord(i) / peak;
        s += r * r;
      }
      return peak * std::sqrt(s);
    }
    case NormKind::Lp: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(coord(i) / peak, norm.p);
      return peak * std::pow(s, 1.0 / norm.p);
    }
  }
  return 0.0;
}

double norm_eval(const NormSpec& norm, const Vector& x) { return norm_eval(norm, x.coords()); }

double dot(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const Vector& x) { return norm_eval(NormSpec::l2(), x); }

double norm_inf(const Vector& x) {
  double m = 0.0;
  for (double v : x.coords()) m = std::max(m, std::abs(v));
  return m;
}

Vector canonical_sign(const Vector& u) {
  for (double v : u.coords()) {
    if (std::abs(v) > 1e-14) return v < 0.0 ? -u : u;
  }
  return u;
}

Vector orthonormal_complement_in_plane(const Vector& x, const std::pair<Vector, Vector>& plane,
                                       double tol) {
  require_same_dim(x, plane.first, "orthonormal_complement_in_plane");
  require_same_dim(x, plane.second, "orthonormal_complement_in_plane");
  const double nx = norm2(x);
  if (nx == 0.0) throw std::invalid_argument("orthonormal_complement_in_plane: x is zero");

  // Gram-Schmidt on the plane basis, with a second pass for stability.
  const double n1 = norm2(plane.first);
  const double n2 = norm2(plane.second);
  if (n1 == 0.0 || n2 == 0.0) throw std::invalid_argument("orthonormal_complement_in_plane: degenerate plane");
  const Vector e1 = plane.first / n1;
  Vector w = Vector::axpy(plane.second, -dot(plane.second, e1), e1);
  w = Vector::axpy(w, -dot(w, e1), e1);
  const double nw = norm2(w);
  if (nw <= 1e-10 * n2) throw std::invalid_argument("orthonormal_complement_in_plane: degenerate plane");
  const Vector e2 = w / nw;

  const double a = dot(x, e1);
  const double b = dot(x, e2);
  const Vector in_plane = Vector::axpy(a * e1, b, e2);
  if (norm2(x - in_plane) > tol * nx) {
    throw std::invalid_argument("orthonormal_complement_in_plane: x does not lie in the plane");
  }
  // Rotate (a, b) by a quarter turn inside the plane.
  const double r = std::hypot(a, b);
  Vector u = Vector::axpy((-b / r) * e1, a / r, e2);
  u = Vector::axpy(u, -dot(u, x) / (nx * nx), x);
  return canonical_sign(u / norm2(u));
}

}  // namespace orthostab
