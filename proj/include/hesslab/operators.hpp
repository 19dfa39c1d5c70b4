#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hesslab/cones.hpp"
#include "hesslab/spectrum.hpp"

namespace hesslab {

// The four concave, degree-one homogeneous elliptic Hessian operators,
// each paired with its natural cone of admissible eigenvalue vectors:
//
//   MongeAmpere      det(A)^{1/n}                         on Gamma_n
//   KHessian(k)      sigma_k^{1/k}                        on Gamma_k
//   HessianQuotient  (sigma_k/sigma_l)^{1/(k-l)}, l < k   on Gamma_k
//   PMongeAmpere(p)  M_p^{1/C(n,p)}, M_p = prod of p-sums on GammaHat_p
//
// All evaluations of products (det, M_p) run in the log domain.
enum class OperatorKind : std::uint8_t { MongeAmpere, KHessian, HessianQuotient, PMongeAmpere };

struct OperatorSpec {
  OperatorKind kind = OperatorKind::MongeAmpere;
  std::size_t n = 2;
  std::size_t k = 0;  // KHessian, HessianQuotient
  std::size_t l = 0;  // HessianQuotient only, l < k
  std::size_t p = 0;  // PMongeAmpere

  static OperatorSpec monge_ampere(std::size_t n);
  static OperatorSpec k_hessian(std::size_t k, std::size_t n);
  static OperatorSpec hessian_quotient(std::size_t k, std::size_t l, std::size_t n);
  static OperatorSpec p_monge_ampere(std::size_t p, std::size_t n);

  ConeSpec cone() const;
  std::string name() const;
  // f(1,...,1) > 0, in closed form per family.
  double f_at_ones() const;
};

// f(lambda). Throws not_admissible if lambda is outside the operator's cone.
double f_eval(const OperatorSpec& op, const Spectrum& lambda);

// Analytic gradient (df/dlambda_1, ..., df/dlambda_n); strictly positive on
// the open cone.
std::vector<double> f_grad(const OperatorSpec& op, const Spectrum& lambda);

// |sum_i f_i(lambda) lambda_i - f(lambda)|, zero up to rounding by
// degree-one homogeneity (Euler's identity).
double homogeneity_residual(const OperatorSpec& op, const Spectrum& lambda);

struct EigenDecomposition {
  Spectrum lambda;          // descending
  std::vector<double> q;    // row-major n x n, columns are eigenvectors
  std::size_t n;
  double q_col(std::size_t row, std::size_t col) const { return q[row * n + col]; }
};

// Cyclic Jacobi rotations until the off-diagonal norm is below threshold;
// A = Q diag(lambda) Q^T with ||A - Q L Q^T|| <= 1e-12 ||A|| and
// ||Q^T Q - I|| <= 1e-12. Eigenvalues returned in descending order.
EigenDecomposition eigen_sym(const SymMatrix& a);

struct Linearization {
  double value = 0.0;  // F(A) = f(lambda(A))
  SymMatrix matrix;    // dF/dA in the original frame: Q diag(f_i) Q^T, SPD
};

// F(A) together with the linearized operator F^{ij}.
Linearization F_and_linearization(const OperatorSpec& op, const SymMatrix& a);

struct GardingEstimate {
  double d_hat = 0.0;        // sampled minimum of (f(lambda+tau)-f(lambda)) / geomean(tau)
  bool quotient_warning = false;  // the quotient family carries no such d; value is
                                  // the observed infimum only
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Sampled lower-bound constant d in f(lambda+tau) >= f(lambda) + d*(tau_1...tau_n)^{1/n}.
// lambda is drawn from the cone and normalized to f = 1; tau has independent
// log-uniform entries in [1e-3, 1e3]. Positive for all families except the
// Hessian quotient, which is reported with a warning flag instead of failing.
GardingEstimate estimate_garding_d(const OperatorSpec& op, std::size_t sample_count,
                                   std::uint64_t seed);

struct ConditionNConstants {
  double n1 = 0.0;
  double n2 = 0.0;
};

// The constructive constants N1 = (2/d)^n, N2 = n-1 realizing the lower bound
// f_i >= 1/(N1 C^{N2}) whenever f(lambda) = 1 and sum_i f_i <= C.
ConditionNConstants condition_n_constants(const OperatorSpec& op, double d);

}  // namespace hesslab
