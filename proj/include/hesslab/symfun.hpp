#pragma once

#include <cstddef>
#include <vector>

#include "hesslab/spectrum.hpp"

namespace hesslab {

// Elementary symmetric polynomials and the classical identities built on
// them. sigma_all evaluates the full coefficient vector of prod_i (x + l_i)
// by the incremental recurrence, which is numerically stable and exact on
// small integer data; the naive C(n,j)-term sum is never used.

// Returns (sigma_0, ..., sigma_n) with sigma_0 = 1.
std::vector<double> sigma_all(const std::vector<double>& lambda);
std::vector<double> sigma_all(const Spectrum& lambda);

// sigma_j of lambda. 0 <= j <= n.
double sigma_j(const std::vector<double>& lambda, std::size_t j);

// sigma_j(lambda | i): the j-th symmetric polynomial of lambda with entry i
// (0-based) deleted. Equals d(sigma_{j+1})/d(lambda_i) and does not depend on
// lambda_i. Requires 0 <= j <= n-1, i < n.
double sigma_partial(std::size_t j, const Spectrum& lambda, std::size_t i);
double sigma_partial(std::size_t j, const std::vector<double>& lambda, std::size_t i);

// Binomial coefficient as a double (n up to ~60 is exact).
double binomial(std::size_t n, std::size_t k);

struct NewtonCheck {
  double residual = 0.0;
  bool holds = false;
};

// Newton's inequality [sigma_j/C(n,j)]^2 >= [sigma_{j-1}/C(n,j-1)] *
// [sigma_{j+1}/C(n,j+1)] for 1 <= j <= n-1. Valid for ANY real vector mu,
// not only cone members. residual = lhs - rhs; holds uses a relative
// tolerance of 1e-12 against max(1, max_j |sigma_j|)^2 (the residual is
// quadratic in the sigmas).
NewtonCheck newton_check(const Spectrum& mu, std::size_t j);

}  // namespace hesslab
