#include "hesslab/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hesslab/symfun.hpp"

namespace hesslab {

ConeSpec ConeSpec::gamma_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) throw invalid_input("ConeSpec: need 1 <= k <= n");
  return ConeSpec{ConeKind::GammaK, n, k};
}

ConeSpec ConeSpec::gamma_hat_p(std::size_t p, std::size_t n) {
  if (p < 1 || p > n) throw invalid_input("ConeSpec: need 1 <= p <= n");
  return ConeSpec{ConeKind::GammaHatP, n, p};
}

std::string ConeSpec::name() const {
  if (kind == ConeKind::GammaK) {
    return "Gamma_" + std::to_string(param) + "(n=" + std::to_string(n) + ")";
  }
  return "GammaHat_" + std::to_string(param) + "(n=" + std::to_string(n) + ")";
}

double cone_margin(const ConeSpec& cone, const Spectrum& lambda) {
  if (lambda.n() != cone.n) throw invalid_input("cone_margin: dimension mismatch");
  if (cone.kind == ConeKind::GammaK) {
    const std::vector<double> s = sigma_all(lambda);
    double m = s[1];
    for (std::size_t j = 2; j <= cone.param; ++j) m = std::min(m, s[j]);
    return m;
  }
  // GammaHatP: the minimal p-sum is the sum of the p smallest entries, so n
  // sorted entries replace the C(n,p) tuple checks.
  std::vector<double> v = lambda.values();
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (std::size_t i = 0; i < cone.param; ++i) s += v[i];
  return s;
}

bool contains(const ConeSpec& cone, const Spectrum& lambda, double margin) {
  if (margin < 0.0) throw invalid_input("contains: margin must be nonnegative");
  return cone_margin(cone, lambda) > margin;
}

namespace {

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t p = idx.size();
  std::size_t i = p;
  while (i-- > 0) {
    if (idx[i] < n - p + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

bool contains_hat_p_bruteforce(const ConeSpec& cone, const Spectrum& lambda, double margin) {
  if (cone.kind != ConeKind::GammaHatP) {
    throw invalid_input("contains_hat_p_bruteforce: GammaHatP only");
  }
  if (lambda.n() != cone.n) throw invalid_input("dimension mismatch");
  std::vector<std::size_t> idx(cone.param);
  std::iota(idx.begin(), idx.end(), 0);
  do {
    double s = 0.0;
    for (std::size_t i : idx) s += lambda[i];
    if (!(s > margin)) return false;
  } while (next_combination(idx, cone.n));
  return true;
}

// splitmix64; deterministic, seed-reproducible, no shared state.
static std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

ConeSampler::ConeSampler(const ConeSpec& cone, std::uint64_t seed)
    : cone_(cone), state_(seed ^ 0xa02bdbf7bb3c0a7ull) {}

double ConeSampler::uniform() {
  return (static_cast<double>(splitmix64(state_) >> 11) + 0.5) * 0x1.0p-53;
}

double ConeSampler::normal() {
  // Box-Muller
  double u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Spectrum ConeSampler::draw() {
  const std::size_t n = cone_.n;
  for (;;) {
    ++proposed_;
    const double c = 0.5 + 2.0 * uniform();
    // rho spans two decades below c so draws range from near-isotropic to
    // skewed enough to hug the cone boundary.
    const double rho = c * std::pow(10.0, -2.0 + 2.0 * uniform());
    std::vector<double> v(n);
    for (double& x : v) x = c + rho * normal();
    Spectrum s{std::move(v)};
    if (contains(cone_, s, 0.0)) return s;
    ++rejected_;
  }
}

Spectrum ConeSampler::draw_positive_loguniform(double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw invalid_input("draw_positive_loguniform: need 0 < lo < hi");
  const double llo = std::log(lo), lhi = std::log(hi);
  std::vector<double> v(cone_.n);
  for (double& x : v) x = std::exp(llo + (lhi - llo) * uniform());
  return Spectrum{std::move(v)};
}

double ConeSampler::rejection_rate() const {
  return proposed_ == 0 ? 0.0 : static_cast<double>(rejected_) / static_cast<double>(proposed_);
}

AxiomAuditReport axiom_audit(const ConeSpec& cone, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw invalid_input("axiom_audit: need sample_count >= 1");
  AxiomAuditReport rep;
  rep.samples = sample_count;
  rep.seed = seed;
  ConeSampler sampler(cone, seed);
  ConeSampler positive(ConeSpec::gamma_k(cone.n, cone.n), seed ^ 0x5bd1e995u);

  for (std::size_t it = 0; it < sample_count; ++it) {
    Spectrum lambda = sampler.draw();
    Spectrum mu = sampler.draw();
    Spectrum tau = positive.draw();

    // Positivity: lambda + tau stays in the cone.
    {
      std::vector<double> v = lambda.values();
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += tau[i];
      if (!contains(cone, Spectrum{std::move(v)}, 0.0)) ++rep.positivity_violations;
    }
    // Invariance: membership survives a random permutation (rotate by r).
    {
      std::vector<double> v = lambda.values();
      const std::size_t r = 1 + static_cast<std::size_t>(sampler.uniform() *
                                                         static_cast<double>(v.size() - 1));
      std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r % v.size()), v.end());
      if (!contains(cone, Spectrum{std::move(v)}, 0.0)) ++rep.invariance_violations;
    }
    // Convexity: segments between members stay inside.
    {
      const double t = sampler.uniform();
      std::vector<double> v(lambda.n());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = t * lambda[i] + (1.0 - t) * mu[i];
      if (!contains(cone, Spectrum{std::move(v)}, 0.0)) ++rep.convexity_violations;
    }
    // Every member lies in Gamma_1.
    {
      double s1 = 0.0;
      for (double v : lambda.values()) s1 += v;
      if (!(s1 > 0.0)) ++rep.gamma1_violations;
    }
  }
  rep.rejection_rate = sampler.rejection_rate();
  return rep;
}

}  // namespace hesslab
