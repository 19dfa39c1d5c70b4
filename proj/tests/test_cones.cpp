#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "hesslab/cones.hpp"
#include "hesslab/symfun.hpp"

using namespace hesslab;

TEST_CASE("gamma_k membership: boundary and interior points") {
  const ConeSpec g2 = ConeSpec::gamma_k(2, 3);
  // sigma_2(-1,2,2) = -2 - 2 + 4 = 0: boundary point, strict test fails
  CHECK_FALSE(contains(g2, Spectrum({-1, 2, 2})));
  CHECK(contains(g2, Spectrum({1, 1, 1})));
  for (std::size_t k = 1; k <= 4; ++k) {
    CHECK(contains(ConeSpec::gamma_k(k, 4), Spectrum({1, 1, 1, 1})));
  }
  CHECK_THROWS_AS(contains(g2, Spectrum({1, 1})), invalid_input);      // dimension mismatch
  CHECK_THROWS_AS(contains(g2, Spectrum({1, 1, 1}), -1), invalid_input);
}

TEST_CASE("gamma_hat_p membership and the sorted shortcut") {
  const ConeSpec hat2 = ConeSpec::gamma_hat_p(2, 3);
  // pair sums of (-1,2,3): 1, 2, 5 all positive
  CHECK(contains(hat2, Spectrum({-1, 2, 3})));
  CHECK_FALSE(contains(hat2, Spectrum({-2, 1, 5})));  // -2 + 1 < 0

  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t n = 2 + rep % 5;
    const std::size_t p = 1 + static_cast<std::size_t>(rng() % n);
    const ConeSpec cone = ConeSpec::gamma_hat_p(p, n);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    const Spectrum lam{std::move(v)};
    CHECK(contains(cone, lam) == contains_hat_p_bruteforce(cone, lam));
  }
}

TEST_CASE("cone nesting: Gamma_n subset Gamma_k subset Gamma_1") {
  ConeSampler positive(ConeSpec::gamma_k(4, 4), 11);
  for (int rep = 0; rep < 2000; ++rep) {
    const Spectrum lam = positive.draw();
    for (std::size_t k = 1; k <= 4; ++k) {
      CHECK(contains(ConeSpec::gamma_k(k, 4), lam));
    }
  }
  ConeSampler g2(ConeSpec::gamma_k(2, 4), 12);
  for (int rep = 0; rep < 2000; ++rep) {
    const Spectrum lam = g2.draw();
    double s1 = 0.0;
    for (double v : lam.values()) s1 += v;
    CHECK(s1 > 0.0);
  }
}

TEST_CASE("axiom audit: zero violations across both families") {
  for (const ConeSpec& cone :
       {ConeSpec::gamma_k(2, 3), ConeSpec::gamma_k(1, 4), ConeSpec::gamma_hat_p(2, 4)}) {
    const AxiomAuditReport rep = axiom_audit(cone, 10000, 7);
    CAPTURE(cone.name());
    CHECK(rep.total_violations() == 0);
    CHECK(rep.samples == 10000);
  }
}

TEST_CASE("sampler is deterministic per seed") {
  ConeSampler a(ConeSpec::gamma_k(2, 3), 42);
  ConeSampler b(ConeSpec::gamma_k(2, 3), 42);
  for (int i = 0; i < 100; ++i) {
    const Spectrum x = a.draw();
    const Spectrum y = b.draw();
    for (std::size_t j = 0; j < x.n(); ++j) CHECK(x[j] == y[j]);
  }
}
