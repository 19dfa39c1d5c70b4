#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "hesslab/spectrum.hpp"

namespace hesslab {

// The two parametric families of convex invariant cones used throughout:
// GammaK(k):    sigma_1 > 0, ..., sigma_k > 0                (Garding cones)
// GammaHatP(p): every sum of p distinct entries is positive  (p-plurisubharmonic)
// GammaK(n) is the positive orthant, GammaK(1) the half-space sigma_1 > 0.
enum class ConeKind : std::uint8_t { GammaK, GammaHatP };

struct ConeSpec {
  ConeKind kind = ConeKind::GammaK;
  std::size_t n = 2;      // ambient dimension
  std::size_t param = 1;  // k or p, 1 <= param <= n

  static ConeSpec gamma_k(std::size_t k, std::size_t n);
  static ConeSpec gamma_hat_p(std::size_t p, std::size_t n);
  std::string name() const;
};

// Quantified slack of lambda inside the cone: min over the defining linear /
// polynomial inequalities (min_j sigma_j for GammaK, the minimal p-sum for
// GammaHatP). Positive inside, <= 0 outside or on the boundary.
double cone_margin(const ConeSpec& cone, const Spectrum& lambda);

// Strict membership: every defining quantity must exceed `margin`.
// margin = 0 tests the open cone; boundary points are rejected.
bool contains(const ConeSpec& cone, const Spectrum& lambda, double margin = 0.0);

// Brute-force GammaHatP membership over all C(n,p) index tuples. Test oracle
// for the sorted p-smallest shortcut used by cone_margin.
bool contains_hat_p_bruteforce(const ConeSpec& cone, const Spectrum& lambda, double margin = 0.0);

// Draws a random interior point: lambda = c * 1 + rho * g with g standard
// normal, rejecting non-members. c and rho are randomized per draw so that
// samples range from nearly isotropic to strongly skewed.
class ConeSampler {
public:
  ConeSampler(const ConeSpec& cone, std::uint64_t seed);

  Spectrum draw();
  // Positive-orthant vector with independent log-uniform entries in
  // [lo, hi] (used for Gamma_n directions and Garding probes).
  Spectrum draw_positive_loguniform(double lo, double hi);
  double rejection_rate() const;

  double uniform();  // in (0,1)
  double normal();

private:
  ConeSpec cone_;
  std::uint64_t state_;
  std::size_t proposed_ = 0;
  std::size_t rejected_ = 0;
};

struct AxiomAuditReport {
  std::size_t samples = 0;
  std::size_t positivity_violations = 0;    // lambda + tau stays inside, tau in Gamma_n
  std::size_t invariance_violations = 0;    // permutation invariance of membership
  std::size_t convexity_violations = 0;     // t*lambda + (1-t)*mu stays inside
  std::size_t gamma1_violations = 0;        // every member has sigma_1 > 0
  double rejection_rate = 0.0;
  std::uint64_t seed = 0;
  std::size_t total_violations() const {
    return positivity_violations + invariance_violations + convexity_violations +
           gamma1_violations;
  }
};

// Randomized audit of the invariant-cone axioms; zero violations expected for
// both families.
AxiomAuditReport axiom_audit(const ConeSpec& cone, std::size_t sample_count, std::uint64_t seed);

}  // namespace hesslab
