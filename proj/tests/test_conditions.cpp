#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hesslab/conditions.hpp"
#include "hesslab/symfun.hpp"

using namespace hesslab;

TEST_CASE("condition D: positive spectra, vacuous case, normalization") {
  const auto op = OperatorSpec::k_hessian(2, 3);
  // all-positive f=1 points: each f_i l_i < sum f_j l_j = 1
  ConeSampler pos(ConeSpec::gamma_k(3, 3), 5);
  for (int rep = 0; rep < 1000; ++rep) {
    Spectrum lam = pos.draw();
    lam = lam.scaled(1.0 / f_eval(op, lam));
    const auto rep_d = check_condition_d(op, lam, 0.0, 1.0);
    CHECK(rep_d.satisfied);
    CHECK(rep_d.worst_margin > 0.0);
  }
  // max eigenvalue below D1: vacuously satisfied
  const auto vac = check_condition_d(op, Spectrum({1, 1, 1}), 10.0, 1e-9);
  CHECK(vac.satisfied);
  CHECK(std::isinf(vac.worst_margin));
  CHECK_FALSE(vac.worst_index.has_value());

  // the checker normalizes internally, so scaling the input is harmless
  const Spectrum raw({4, 5, 6});
  const auto a = check_condition_d(op, raw, 0.5, 0.9);
  const auto b = check_condition_d(op, raw.scaled(7.0), 0.5, 0.9);
  CHECK(a.worst_margin == doctest::Approx(b.worst_margin).epsilon(1e-12));

  CHECK_THROWS_AS(check_condition_d(op, Spectrum({-1, -1, -1}), 0, 1), not_admissible);
}

TEST_CASE("condition CNS: frozen instances") {
  const ConeSpec g2 = ConeSpec::gamma_k(2, 3);
  // replacing any entry of (5,5,-1) by 2 stays in Gamma_2
  const auto ok = check_cns(g2, Spectrum({5, 5, -1}), 2.0);
  CHECK(ok.satisfied);

  // (t,t,-ct) with c < 1/2 and t large: sigma_2(R,t,-ct) = Rt(1-c) - ct^2 < 0
  const auto bad = check_cns(g2, Spectrum({100, 100, -40}), 2.0);
  CHECK_FALSE(bad.satisfied);
  CHECK(bad.worst_margin <= 0.0);

  // nonnegative spectra satisfy CNS for any positive R
  ConeSampler pos(ConeSpec::gamma_k(3, 3), 6);
  for (int rep = 0; rep < 1000; ++rep) {
    for (double r : {0.1, 1.0, 10.0}) {
      CHECK(check_cns(g2, pos.draw(), r).satisfied);
    }
  }
  CHECK_THROWS_AS(check_cns(g2, Spectrum({-5, 1, 1}), 1.0), not_admissible);
}

TEST_CASE("CNS implies condition D with (2R, 2)") {
  const std::vector<OperatorSpec> ops = {
      OperatorSpec::monge_ampere(3),
      OperatorSpec::k_hessian(2, 3),
      OperatorSpec::hessian_quotient(2, 1, 3),
      OperatorSpec::p_monge_ampere(2, 3),
  };
  for (const auto& op : ops) {
    ConeSampler sampler(op.cone(), 17);
    int tested = 0;
    for (int rep = 0; rep < 30000 && tested < 10000; ++rep) {
      Spectrum lam = sampler.draw();
      lam = lam.scaled(1.0 / f_eval(op, lam));
      const double r = 0.25 * (1.0 + 3.0 * sampler.uniform());
      if (!check_cns(op.cone(), lam, r).satisfied) continue;
      ++tested;
      const auto d = check_condition_d(op, lam, 2.0 * r, 2.0);
      if (!d.satisfied) {
        CAPTURE(op.name());
        REQUIRE(d.satisfied);
      }
    }
    CHECK(tested == 10000);
  }
}

TEST_CASE("k-Hessian lower bound: frozen instances and sampled conclusion") {
  // convex point
  const auto a = check_k_hessian_lower_bound(Spectrum({1, 1, 1}), 2, 0.0);
  CHECK(a.satisfied);
  CHECK(a.conclusion_holds.value());

  // boundary case sigma_3 = -50 = -10 * sigma_2, sigma_2 = 5
  const auto b = check_k_hessian_lower_bound(Spectrum({5, 5, -2}), 2, 10.0);
  CHECK(b.satisfied);
  CHECK(b.worst_margin == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.conclusion_holds.value());

  CHECK_THROWS_AS(check_k_hessian_lower_bound(Spectrum({1, 1, 1}), 3, 1.0), invalid_input);
  CHECK_THROWS_AS(check_k_hessian_lower_bound(Spectrum({-1, -1, 5}), 2, 1.0), not_admissible);

  // sampled: whenever the hypothesis holds, the replacement stays in Gamma_k,
  // and the intermediate Gamma_{k-1} step holds as well
  for (std::size_t n : {3ul, 4ul, 5ul}) {
    for (std::size_t k = 2; k + 1 <= n; ++k) {
      ConeSampler sampler(ConeSpec::gamma_k(k, n), 1000 + 10 * n + k);
      int tested = 0;
      for (int rep = 0; rep < 40000 && tested < 10000; ++rep) {
        const Spectrum lam = sampler.draw();
        const double aa = 0.01 + 10.0 * sampler.uniform();
        const auto r = check_k_hessian_lower_bound(lam, k, aa);
        if (!r.satisfied) continue;
        ++tested;
        REQUIRE(r.conclusion_holds.value());
        const double rr = aa * (1.0 + 1e-6) + 1e-6;
        const Spectrum replaced = lam.sorted_descending().replaced(0, rr);
        REQUIRE(contains(ConeSpec::gamma_k(k - 1, n), replaced));
      }
      CHECK(tested == 10000);
    }
  }
}

TEST_CASE("p-sum lower bound: frozen instances") {
  // p = 2: the 1-sums are the entries; min entry -1 >= -1
  const auto a = check_pma_partial_sums(Spectrum({-1, 2, 3}), 2, 1.0);
  CHECK(a.satisfied);
  CHECK(a.worst_margin == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a.conclusion_holds.value());

  // nonnegative entries with a = 0
  const auto b = check_pma_partial_sums(Spectrum({0.5, 1, 2}), 2, 0.0);
  CHECK(b.satisfied);

  // p = 3, n = 4: min pair sum -4 < -3 fails
  const auto c = check_pma_partial_sums(Spectrum({-2, -2, 5, 5}), 3, 3.0);
  CHECK_FALSE(c.satisfied);

  CHECK_THROWS_AS(check_pma_partial_sums(Spectrum({-5, 1, 1}), 2, 1.0), not_admissible);
  CHECK_THROWS_AS(check_pma_partial_sums(Spectrum({1, 1, 1}), 1, 1.0), invalid_input);
}

TEST_CASE("(p-1)-plurisubharmonic points satisfy CNS at any positive R") {
  for (std::size_t n : {3ul, 4ul, 5ul}) {
    for (std::size_t p = 2; p <= n; ++p) {
      ConeSampler sampler(ConeSpec::gamma_hat_p(p - 1, n), 2000 + 10 * n + p);
      for (int rep = 0; rep < 10000 / 3; ++rep) {
        const Spectrum lam = sampler.draw();  // all (p-1)-sums positive
        const double r = 1e-6 + sampler.uniform();
        const auto cns = check_cns(ConeSpec::gamma_hat_p(p, n), lam, r);
        if (!cns.satisfied) {
          CAPTURE(n);
          CAPTURE(p);
          REQUIRE(cns.satisfied);
        }
      }
    }
  }
}

TEST_CASE("condition checks are monotone in their parameters") {
  const auto op = OperatorSpec::k_hessian(2, 4);
  ConeSampler sampler(op.cone(), 88);
  for (int rep = 0; rep < 2000; ++rep) {
    Spectrum lam = sampler.draw();
    lam = lam.scaled(1.0 / f_eval(op, lam));
    const double d1 = sampler.uniform();
    const double d2 = sampler.uniform();
    if (check_condition_d(op, lam, d1, d2).satisfied) {
      CHECK(check_condition_d(op, lam, d1 + 0.5, d2).satisfied);
      CHECK(check_condition_d(op, lam, d1, d2 + 0.5).satisfied);
    }
    // Gamma_k margins grow with the replacement value (positive partials)
    const double r = 0.5 + sampler.uniform();
    if (check_cns(op.cone(), lam, r).satisfied) {
      CHECK(check_cns(op.cone(), lam, r + 0.5).satisfied);
    }
  }
}
