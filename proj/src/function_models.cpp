#include "orthostab/function_models.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "orthostab/random.hpp"

namespace orthostab {

std::string to_string(Parity p) {
  switch (p) {
    case Parity::None: return "none";
    case Parity::Odd: return "odd";
    case Parity::Even: return "even";
  }
  return "none";
}

Parity parity_from_string(const std::string& s) {
  if (s == "none") return Parity::None;
  if (s == "odd") return Parity::Odd;
  if (s == "even") return Parity::Even;
  throw std::invalid_argument("unknown parity '" + s + "'");
}

namespace {

std::uint64_t canonical_bits(double v) {
  if (v == 0.0) return 0;  // folds -0.0 onto +0.0
  return std::bit_cast<std::uint64_t>(v);
}

double hashed_unit(std::uint64_t seed, std::size_t k, const Vector& x) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ ((k + 1) * 0x9e3779b97f4a7c15ULL));
  h = splitmix64(h ^ x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    h = splitmix64(h ^ (canonical_bits(x[i]) + (i + 1) * 0xc2b2ae3d27d4eb4fULL));
  }
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<double> raw_noise(const NoiseSpec& spec, const Vector& x, std::size_t out_dim) {
  std::vector<double> out(out_dim);
  for (std::size_t k = 0; k < out_dim; ++k) {
    out[k] = spec.amplitude * (2.0 * hashed_unit(spec.seed, k, x) - 1.0);
  }
  return out;
}

std::vector<double> unfiltered(const MapModel& m, const Vector& x) {
  std::vector<double> v(m.out_dim, 0.0);
  if (m.linear) {
    const Vector lx = m.linear->apply(x);
    for (std::size_t k = 0; k < m.out_dim; ++k) v[k] += lx[k];
  }
  for (std::size_t k = 0; k < m.quad.size(); ++k) v[k] += m.quad[k].bilinear(x, x);
  if (m.constant) {
    for (std::size_t k = 0; k < m.out_dim; ++k) v[k] += (*m.constant)[k];
  }
  if (m.noise && m.noise->amplitude != 0.0) {
    const Vector n = deterministic_noise(*m.noise, x, m.out_dim);
    for (std::size_t k = 0; k < m.out_dim; ++k) v[k] += n[k];
  }
  return v;
}

}  // namespace

Vector deterministic_noise(const NoiseSpec& spec, const Vector& x, std::size_t out_dim) {
  if (!(spec.amplitude >= 0.0)) throw std::invalid_argument("NoiseSpec: amplitude must be >= 0");
  if (spec.amplitude == 0.0) return Vector(out_dim);
  std::vector<double> a = raw_noise(spec, x, out_dim);
  if (spec.parity == Parity::None) return Vector::unchecked(std::move(a));
  const std::vector<double> b = raw_noise(spec, -x, out_dim);
  for (std::size_t k = 0; k < out_dim; ++k) {
    a[k] = spec.parity == Parity::Odd ? (a[k] - b[k]) / 2.0 : (a[k] + b[k]) / 2.0;
  }
  return Vector::unchecked(std::move(a));
}

MapModel MapModel::zero(std::size_t in_dim, std::size_t out_dim) {
  MapModel m;
  m.in_dim = in_dim;
  m.out_dim = out_dim;
  return m;
}

MapModel MapModel::linear_map(Matrix l) {
  MapModel m = zero(l.cols(), l.rows());
  m.linear = std::move(l);
  return m;
}

MapModel MapModel::quadratic(std::vector<Matrix> forms) {
  if (forms.empty()) throw std::invalid_argument("MapModel::quadratic: no forms");
  MapModel m = zero(forms.front().cols(), forms.size());
  m.quad = std::move(forms);
  m.validate();
  return m;
}

MapModel MapModel::squared_norm(std::size_t dim) { return quadratic({Matrix::identity(dim)}); }

MapModel MapModel::scaled(double s) const {
  MapModel m = *this;
  m.scale *= s;
  return m;
}

bool MapModel::quadratic_only() const {
  const bool noisy = noise && noise->amplitude != 0.0;
  return !quad.empty() && !linear && !constant && !noisy;
}

void MapModel::validate() const {
  if (in_dim == 0 || out_dim == 0) throw std::invalid_argument("MapModel: dimensions must be >= 1");
  if (linear && (linear->rows() != out_dim || linear->cols() != in_dim)) {
    throw DimensionMismatch("MapModel: linear part has the wrong shape");
  }
  if (!quad.empty()) {
    if (quad.size() != out_dim) throw DimensionMismatch("MapModel: need one quadratic form per output");
    for (const Matrix& b : quad) {
      if (b.rows() != in_dim || b.cols() != in_dim) throw DimensionMismatch("MapModel: form has the wrong shape");
      if (!b.is_symmetric(1e-12)) throw std::invalid_argument("MapModel: quadratic forms must be symmetric");
    }
  }
  if (constant && constant->dim() != out_dim) throw DimensionMismatch("MapModel: constant has the wrong size");
  if (noise && !(noise->amplitude >= 0.0)) throw std::invalid_argument("MapModel: noise amplitude must be >= 0");
  if (!std::isfinite(scale)) throw std::invalid_argument("MapModel: scale must be finite");
}

Vector eval(const MapModel& model, const Vector& x) {
  if (x.dim() != model.in_dim) throw DimensionMismatch("eval: input dimension does not match model");
  std::vector<double> v = unfiltered(model, x);
  if (model.parity_filter != Parity::None) {
    const std::vector<double> w = unfiltered(model, -x);
    for (std::size_t k = 0; k < v.size(); ++k) {
      v[k] = model.parity_filter == Parity::Odd ? (v[k] - w[k]) / 2.0 : (v[k] + w[k]) / 2.0;
    }
  }
  if (model.scale != 1.0) {
    for (double& c : v) c *= model.scale;
  }
  return Vector::unchecked(std::move(v));
}

VectorMap as_map(const MapModel& model) {
  return [model](const Vector& x) { return eval(model, x); };
}

Vector polarize(const MapModel& quad_model, const Vector& x, const Vector& y) {
  if (!quad_model.quadratic_only()) throw std::invalid_argument("polarize: model has non-quadratic parts");
  return 0.25 * (eval(quad_model, x + y) - eval(quad_model, x - y));
}

Vector stored_bilinear(const MapModel& quad_model, const Vector& x, const Vector& y) {
  std::vector<double> out(quad_model.quad.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = quad_model.scale * quad_model.quad[k].bilinear(x, y);
  return Vector::unchecked(std::move(out));
}

Vector premise_vector(const PexiderTriple& t, const Vector& x, const Vector& y) {
  const Vector s = eval(t.f, x + y) + eval(t.f, x - y);
  return s - 2.0 * eval(t.g, x) - 2.0 * eval(t.h, y);
}

double premise_residual(const PexiderTriple& t, const Vector& x, const Vector& y) {
  return norm_inf(premise_vector(t, x, y));
}

double premise_scale(const PexiderTriple& t, const Vector& x, const Vector& y) {
  return norm_inf(eval(t.f, x + y)) + norm_inf(eval(t.f, x - y)) + 2.0 * norm_inf(eval(t.g, x)) +
         2.0 * norm_inf(eval(t.h, y));
}

namespace {

void require_eps(double e) {
  if (!(e >= 0.0) || !std::isfinite(e)) throw std::invalid_argument("Pexider instance: eps must be >= 0");
}

}  // namespace

PexiderTriple make_pexider_instance(const Matrix& tstar, double eps_f, double eps_g, double eps_h,
                                    TripleSeeds seeds, OrthoRelation rel) {
  require_eps(eps_f);
  require_eps(eps_g);
  require_eps(eps_h);
  PexiderTriple t;
  t.f = MapModel::linear_map(tstar);
  t.f.noise = NoiseSpec{eps_f, seeds.f, Parity::Odd};
  t.f.parity_filter = Parity::Odd;
  t.g = MapModel::linear_map(tstar);
  t.g.noise = NoiseSpec{eps_g, seeds.g, Parity::None};
  t.h = MapModel::zero(tstar.cols(), tstar.rows());
  t.h.noise = NoiseSpec{eps_h, seeds.h, Parity::None};
  t.epsilon_design = 2.0 * eps_f + 2.0 * eps_g + 2.0 * eps_h;
  t.relation = std::move(rel);
  return t;
}

PexiderTriple make_even_instance(std::vector<Matrix> forms, double eps_f, double eps_g,
                                 double eps_h, TripleSeeds seeds, OrthoRelation rel) {
  require_eps(eps_f);
  require_eps(eps_g);
  require_eps(eps_h);
  const MapModel q = MapModel::quadratic(std::move(forms));
  PexiderTriple t;
  t.f = q;
  t.f.noise = NoiseSpec{eps_f, seeds.f, Parity::Even};
  t.f.parity_filter = Parity::Even;
  t.g = q;
  t.g.noise = NoiseSpec{eps_g, seeds.g, Parity::None};
  t.h = q;
  t.h.noise = NoiseSpec{eps_h, seeds.h, Parity::None};
  t.epsilon_design = 2.0 * eps_f + 2.0 * eps_g + 2.0 * eps_h;
  t.relation = std::move(rel);
  return t;
}

FiniteModel::FiniteModel(int radius, int value) : radius_(radius) {
  if (radius < 1) throw std::invalid_argument("FiniteModel: radius must be >= 1");
  const std::size_t side = static_cast<std::size_t>(2 * radius + 1);
  table_.assign(side * side, ((value % 2) + 2) % 2);
}

bool FiniteModel::contains(int i, int j) const {
  return std::abs(i) <= radius_ && std::abs(j) <= radius_;
}

int FiniteModel::at(int i, int j) const {
  if (!contains(i, j)) throw std::out_of_range("FiniteModel: point outside the grid");
  const std::size_t side = static_cast<std::size_t>(2 * radius_ + 1);
  return table_[static_cast<std::size_t>(i + radius_) * side + static_cast<std::size_t>(j + radius_)];
}

}  // namespace orthostab
