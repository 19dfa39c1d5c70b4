#include "hesslab/symfun.hpp"

#include <algorithm>
#include <cmath>

namespace hesslab {

std::vector<double> sigma_all(const std::vector<double>& lambda) {
  const std::size_t n = lambda.size();
  // Multiply prod (x + l_i) one factor at a time; c[j] tracks sigma_j of the
  // factors absorbed so far.
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t j = m + 1; j >= 1; --j) {
      c[j] += lambda[m] * c[j - 1];
    }
  }
  return c;
}

std::vector<double> sigma_all(const Spectrum& lambda) { return sigma_all(lambda.values()); }

double sigma_j(const std::vector<double>& lambda, std::size_t j) {
  if (j > lambda.size()) throw invalid_input("sigma_j: degree out of range");
  return sigma_all(lambda)[j];
}

double sigma_partial(std::size_t j, const std::vector<double>& lambda, std::size_t i) {
  const std::size_t n = lambda.size();
  if (i >= n) throw invalid_input("sigma_partial: index out of range");
  if (j > n - 1) throw invalid_input("sigma_partial: degree out of range");
  std::vector<double> rest;
  rest.reserve(n - 1);
  for (std::size_t m = 0; m < n; ++m) {
    if (m != i) rest.push_back(lambda[m]);
  }
  return sigma_all(rest)[j];
}

double sigma_partial(std::size_t j, const Spectrum& lambda, std::size_t i) {
  return sigma_partial(j, lambda.values(), i);
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

NewtonCheck newton_check(const Spectrum& mu, std::size_t j) {
  const std::size_t n = mu.n();
  if (j < 1 || j > n - 1) throw invalid_input("newton_check: need 1 <= j <= n-1");
  const std::vector<double> s = sigma_all(mu);
  const double mj = s[j] / binomial(n, j);
  const double mjm = s[j - 1] / binomial(n, j - 1);
  const double mjp = s[j + 1] / binomial(n, j + 1);
  NewtonCheck out;
  out.residual = mj * mj - mjm * mjp;
  double scale = 1.0;
  for (double v : s) scale = std::max(scale, std::abs(v));
  out.holds = out.residual >= -1e-12 * scale * scale;
  return out;
}

}  // namespace hesslab
