#include "hesslab/analytic.hpp"

#include <cmath>

#include "hesslab/errors.hpp"

namespace hesslab {

AnalyticSource::AnalyticSource(SymMatrix quadratic, std::vector<double> linear, double constant)
    : dim_(static_cast<int>(quadratic.n())), quad_(std::move(quadratic)),
      lin_(std::move(linear)), const_(constant) {
  if (lin_.size() != static_cast<std::size_t>(dim_)) {
    throw invalid_input("AnalyticSource: linear term dimension mismatch");
  }
}

AnalyticSource AnalyticSource::isotropic_quadratic(int dim, double a) {
  SymMatrix m(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) m.set(i, i, a);
  return AnalyticSource(std::move(m), std::vector<double>(static_cast<std::size_t>(dim), 0.0),
                        0.0);
}

void AnalyticSource::add_bump(double amplitude, const Point& center, double width) {
  if (!(width > 0.0)) throw invalid_input("AnalyticSource: bump width must be positive");
  has_bump_ = true;
  bump_amp_ = amplitude;
  bump_center_ = center;
  bump_width_ = width;
}

double AnalyticSource::value(const Point& x) const {
  double v = const_;
  for (int i = 0; i < dim_; ++i) {
    v += lin_[static_cast<std::size_t>(i)] * x[i];
    for (int j = 0; j < dim_; ++j) {
      v += 0.5 * quad_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * x[i] * x[j];
    }
  }
  if (has_bump_) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      s += (x[i] - bump_center_[i]) * (x[i] - bump_center_[i]);
    }
    const double t = s / (bump_width_ * bump_width_);
    if (t < 1.0) v += bump_amp_ * (1.0 - t) * (1.0 - t) * (1.0 - t);
  }
  return v;
}

std::vector<double> AnalyticSource::gradient(const Point& x) const {
  std::vector<double> g(static_cast<std::size_t>(dim_), 0.0);
  for (int i = 0; i < dim_; ++i) {
    g[static_cast<std::size_t>(i)] = lin_[static_cast<std::size_t>(i)];
    for (int j = 0; j < dim_; ++j) {
      g[static_cast<std::size_t>(i)] +=
          quad_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * x[j];
    }
  }
  if (has_bump_) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      s += (x[i] - bump_center_[i]) * (x[i] - bump_center_[i]);
    }
    const double w2 = bump_width_ * bump_width_;
    const double t = s / w2;
    if (t < 1.0) {
      const double coef = -6.0 * bump_amp_ / w2 * (1.0 - t) * (1.0 - t);
      for (int i = 0; i < dim_; ++i) {
        g[static_cast<std::size_t>(i)] += coef * (x[i] - bump_center_[i]);
      }
    }
  }
  return g;
}

SymMatrix AnalyticSource::hessian(const Point& x) const {
  SymMatrix hmat = quad_;
  if (has_bump_) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      s += (x[i] - bump_center_[i]) * (x[i] - bump_center_[i]);
    }
    const double w2 = bump_width_ * bump_width_;
    const double t = s / w2;
    if (t < 1.0) {
      const double c1 = -6.0 * bump_amp_ / w2 * (1.0 - t) * (1.0 - t);
      const double c2 = 24.0 * bump_amp_ / (w2 * w2) * (1.0 - t);
      for (int i = 0; i < dim_; ++i) {
        for (int j = i; j < dim_; ++j) {
          double v = hmat(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
          if (i == j) v += c1;
          v += c2 * (x[i] - bump_center_[i]) * (x[j] - bump_center_[j]);
          hmat.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
        }
      }
    }
  }
  return hmat;
}

AnalyticSource AnalyticSource::rescaled(double r) const {
  if (!(r > 0.0)) throw invalid_input("AnalyticSource::rescaled: need r > 0");
  std::vector<double> lin(lin_);
  for (double& v : lin) v /= r;
  AnalyticSource out(quad_, std::move(lin), (const_ - r * r) / (r * r));
  if (has_bump_) {
    Point c{0, 0, 0};
    for (int i = 0; i < dim_; ++i) c[i] = bump_center_[i] / r;
    out.add_bump(bump_amp_ / (r * r), c, bump_width_ / r);
  }
  return out;
}

AnalyticSource AnalyticSource::normalized_at_origin() const {
  AnalyticSource out = *this;
  out.const_ -= value(Point{0, 0, 0});
  return out;
}

}  // namespace hesslab
