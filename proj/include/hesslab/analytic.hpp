#pragma once

#include <cstddef>

#include "hesslab/grid.hpp"
#include "hesslab/spectrum.hpp"

namespace hesslab {

// Entire candidate function u(x) = 0.5 x^T M x + b^T x + c plus an optional
// compactly supported C^2 bump amp * (1 - |x - x0|^2 / w^2)^3 on |x - x0| < w.
// Closed under the blow-down rescaling v_R(y) = (u(Ry) - R^2) / R^2, which
// acts on the coefficients; rescaled() returns the transformed source so the
// chain-rule identity D^2 v_R(y) = D^2 u(Ry) can be checked between two
// independent evaluation paths.
class AnalyticSource {
public:
  AnalyticSource(SymMatrix quadratic, std::vector<double> linear, double constant);

  static AnalyticSource isotropic_quadratic(int dim, double a);  // a/2 * |x|^2

  void add_bump(double amplitude, const Point& center, double width);

  int dim() const { return dim_; }
  double value(const Point& x) const;
  std::vector<double> gradient(const Point& x) const;
  SymMatrix hessian(const Point& x) const;

  // Coefficient-level blow-down transform.
  AnalyticSource rescaled(double r) const;
  // Shift the constant so that u(0) = 0.
  AnalyticSource normalized_at_origin() const;

private:
  int dim_;
  SymMatrix quad_;
  std::vector<double> lin_;
  double const_;
  bool has_bump_ = false;
  double bump_amp_ = 0.0;
  Point bump_center_{0, 0, 0};
  double bump_width_ = 1.0;
};

}  // namespace hesslab
