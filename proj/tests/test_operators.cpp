#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hesslab/operators.hpp"
#include "hesslab/symfun.hpp"

using namespace hesslab;

namespace {

std::vector<OperatorSpec> suite(std::size_t n) {
  std::vector<OperatorSpec> ops = {
      OperatorSpec::monge_ampere(n),
      OperatorSpec::k_hessian(2, n),
      OperatorSpec::hessian_quotient(2, 1, n),
      OperatorSpec::p_monge_ampere(2, n),
  };
  if (n >= 4) ops.push_back(OperatorSpec::k_hessian(3, n));
  return ops;
}

Spectrum draw_admissible(const OperatorSpec& op, ConeSampler& sampler, double margin) {
  for (;;) {
    Spectrum lam = sampler.draw();
    if (contains(op.cone(), lam, margin)) return lam;
  }
}

}  // namespace

TEST_CASE("f_eval: closed-form values") {
  CHECK(f_eval(OperatorSpec::monge_ampere(2), Spectrum({2, 2})) == doctest::Approx(2.0));
  CHECK(f_eval(OperatorSpec::k_hessian(2, 3), Spectrum({1, 1, 1})) ==
        doctest::Approx(std::sqrt(3.0)));
  // all pair sums are 2, M_2 = 8, exponent 1/3
  CHECK(f_eval(OperatorSpec::p_monge_ampere(2, 3), Spectrum({1, 1, 1})) == doctest::Approx(2.0));
  CHECK(f_eval(OperatorSpec::hessian_quotient(2, 1, 3), Spectrum({1, 1, 1})) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(f_eval(OperatorSpec::monge_ampere(2), Spectrum({-1, 2})), not_admissible);
}

TEST_CASE("f_at_ones matches f_eval at the isotropic point") {
  for (std::size_t n : {2ul, 3ul, 4ul}) {
    for (const auto& op : suite(n)) {
      const Spectrum ones{std::vector<double>(n, 1.0)};
      CHECK(op.f_at_ones() == doctest::Approx(f_eval(op, ones)).epsilon(1e-13));
    }
  }
}

TEST_CASE("f_grad: frozen values and symmetry at the isotropic point") {
  // k = 2, n = 3 at (1,1,1): f_i = (1/2) 3^{-1/2} sigma_1(lambda|i) = 1/sqrt(3)
  const auto g = f_grad(OperatorSpec::k_hessian(2, 3), Spectrum({1, 1, 1}));
  for (double v : g) CHECK(v == doctest::Approx(1.0 / std::sqrt(3.0)));

  // Monge-Ampere n = 2 at (2,2): grad = (1/2, 1/2), sum f_i l_i = 2 = f
  const auto gm = f_grad(OperatorSpec::monge_ampere(2), Spectrum({2, 2}));
  CHECK(gm[0] == doctest::Approx(0.5));
  CHECK(gm[1] == doctest::Approx(0.5));
  CHECK(gm[0] * 2.0 + gm[1] * 2.0 == doctest::Approx(2.0));

  for (const auto& op : suite(4)) {
    const auto gi = f_grad(op, Spectrum({1, 1, 1, 1}));
    for (double v : gi) CHECK(v == doctest::Approx(gi[0]).epsilon(1e-13));
  }
}

TEST_CASE("f_grad matches central differences on random admissible points") {
  // Well-conditioned draws (entries within a factor of e of each other):
  // the FD step 1e-5*scale resolves the gradient to 1e-6 relative there.
  std::mt19937_64 rng(808);
  std::normal_distribution<double> gauss(0.0, 0.25);
  std::uniform_real_distribution<double> cdist(0.5, 2.0);
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const auto& op : suite(n)) {
      for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> v(n);
        const double c = cdist(rng);
        for (double& x : v) x = c * std::exp(gauss(rng));
        const Spectrum lam{std::move(v)};
        const auto grad = f_grad(op, lam);
        double scale = 1.0;
        for (double x : lam.values()) scale = std::max(scale, std::abs(x));
        const double h = 1e-5 * scale;
        for (std::size_t i = 0; i < n; ++i) {
          const double fp = f_eval(op, lam.replaced(i, lam[i] + h));
          const double fm = f_eval(op, lam.replaced(i, lam[i] - h));
          const double fd = (fp - fm) / (2.0 * h);
          CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
          CHECK(grad[i] > 0.0);  // ellipticity
        }
      }
    }
  }
  // Boundary-hugging cone draws: FD itself loses accuracy where f bends
  // sharply, so only a coarser agreement is meaningful.
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const auto& op : suite(n)) {
      ConeSampler sampler(op.cone(), 1000 + n);
      for (int rep = 0; rep < 200; ++rep) {
        const Spectrum lam = draw_admissible(op, sampler, 1e-2);
        const auto grad = f_grad(op, lam);
        double scale = 1.0;
        for (double x : lam.values()) scale = std::max(scale, std::abs(x));
        const double h = 1e-6 * scale;
        for (std::size_t i = 0; i < n; ++i) {
          const double fp = f_eval(op, lam.replaced(i, lam[i] + h));
          const double fm = f_eval(op, lam.replaced(i, lam[i] - h));
          const double fd = (fp - fm) / (2.0 * h);
          CHECK(grad[i] == doctest::Approx(fd).epsilon(5e-4));
          CHECK(grad[i] > 0.0);
        }
      }
    }
  }
}

TEST_CASE("degree-one homogeneity: Euler identity and scaling") {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& op : suite(n)) {
      ConeSampler sampler(op.cone(), 555 + n);
      for (int rep = 0; rep < 2500; ++rep) {
        const Spectrum lam = draw_admissible(op, sampler, 1e-8);
        const double f = f_eval(op, lam);
        CHECK(homogeneity_residual(op, lam) <= 1e-10 * std::abs(f));
        const double t = 0.1 + 5.0 * sampler.uniform();
        CHECK(f_eval(op, lam.scaled(t)) == doctest::Approx(t * f).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("concavity along random segments") {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& op : suite(n)) {
      ConeSampler sampler(op.cone(), 777 + n);
      for (int rep = 0; rep < 2500; ++rep) {
        const Spectrum a = draw_admissible(op, sampler, 1e-10);
        const Spectrum b = draw_admissible(op, sampler, 1e-10);
        const double t = sampler.uniform();
        std::vector<double> mid(n);
        for (std::size_t i = 0; i < n; ++i) mid[i] = t * a[i] + (1.0 - t) * b[i];
        const double fa = f_eval(op, a);
        const double fb = f_eval(op, b);
        const double fm = f_eval(op, Spectrum{std::move(mid)});
        const double scale = std::max({1.0, std::abs(fa), std::abs(fb)});
        CHECK(fm >= t * fa + (1.0 - t) * fb - 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("eigen_sym: diagonal, rotation, reconstruction") {
  {
    const auto ed = eigen_sym(SymMatrix::diagonal({3, 1, 2}));
    CHECK(ed.lambda[0] == doctest::Approx(3.0));
    CHECK(ed.lambda[1] == doctest::Approx(2.0));
    CHECK(ed.lambda[2] == doctest::Approx(1.0));
  }
  {
    SymMatrix a(2);
    a.set(0, 1, 1.0);
    const auto ed = eigen_sym(a);
    CHECK(ed.lambda[0] == doctest::Approx(1.0));
    CHECK(ed.lambda[1] == doctest::Approx(-1.0));
  }
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 2 + rep % 5;
    SymMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) a.set(i, j, dist(rng));
    }
    const auto ed = eigen_sym(a);
    // descending order
    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(ed.lambda[i] >= ed.lambda[i + 1]);
    // reconstruction and orthogonality
    double recon_err = 0.0, orth_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double aij = 0.0, qq = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
          aij += ed.q_col(i, m) * ed.lambda[m] * ed.q_col(j, m);
          qq += ed.q_col(m, i) * ed.q_col(m, j);
        }
        recon_err = std::max(recon_err, std::abs(aij - a(i, j)));
        orth_err = std::max(orth_err, std::abs(qq - (i == j ? 1.0 : 0.0)));
      }
    }
    CHECK(recon_err <= 1e-12 * std::max(1.0, a.frobenius_norm()));
    CHECK(orth_err <= 1e-12);
  }
}

TEST_CASE("F_and_linearization: isotropic point, diagonal case, frame covariance") {
  for (const auto& op : suite(3)) {
    const auto lin = F_and_linearization(op, SymMatrix::identity(3));
    CHECK(lin.value == doctest::Approx(op.f_at_ones()));
    const auto g = f_grad(op, Spectrum({1, 1, 1}));
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(lin.matrix(i, j) == doctest::Approx(i == j ? g[0] : 0.0).epsilon(1e-12));
      }
    }
  }
  {
    const auto op = OperatorSpec::monge_ampere(2);
    const auto lin = F_and_linearization(op, SymMatrix::diagonal({1, 2}));
    CHECK(lin.value == doctest::Approx(std::sqrt(2.0)));
    const auto g = f_grad(op, Spectrum({2, 1}));  // descending order inside
    CHECK(lin.matrix(0, 0) == doctest::Approx(g[1]));
    CHECK(lin.matrix(1, 1) == doctest::Approx(g[0]));
    CHECK(lin.matrix(0, 1) == doctest::Approx(0.0));
  }
  // F(R A R^T) = F(A) and L transforms covariantly
  {
    const auto op = OperatorSpec::k_hessian(2, 2);
    SymMatrix a(2);
    a.set(0, 0, 3.0);
    a.set(1, 1, 1.2);
    a.set(0, 1, 0.4);
    const double phi = 0.7;
    const double c = std::cos(phi), s = std::sin(phi);
    SymMatrix ar(2);
    // R A R^T with R = [[c,-s],[s,c]]
    const double r[2][2] = {{c, -s}, {s, c}};
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        double v = 0.0;
        for (int m = 0; m < 2; ++m) {
          for (int l = 0; l < 2; ++l) v += r[i][m] * a(m, l) * r[j][l];
        }
        ar.set(i, j, v);
      }
    }
    const auto la = F_and_linearization(op, a);
    const auto lr = F_and_linearization(op, ar);
    CHECK(lr.value == doctest::Approx(la.value).epsilon(1e-12));
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        double v = 0.0;
        for (int m = 0; m < 2; ++m) {
          for (int l = 0; l < 2; ++l) v += r[i][m] * la.matrix(m, l) * r[j][l];
        }
        CHECK(lr.matrix(i, j) == doctest::Approx(v).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("linearization equals the matrix finite-difference Jacobian") {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> dist(-0.2, 0.2);
  for (const auto& op : suite(3)) {
    for (int rep = 0; rep < 40; ++rep) {
      SymMatrix a = SymMatrix::identity(3);
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i; j < 3; ++j) {
          a.set(i, j, (i == j ? 1.5 : 0.0) + dist(rng));
        }
      }
      const auto lin = F_and_linearization(op, a);
      const double h = 1e-6;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i; j < 3; ++j) {
          SymMatrix ap = a, am = a;
          ap.set(i, j, a(i, j) + h);
          am.set(i, j, a(i, j) - h);
          const double fd =
              (F_and_linearization(op, ap).value - F_and_linearization(op, am).value) /
              (2.0 * h);
          const double expected = (i == j) ? lin.matrix(i, i) : 2.0 * lin.matrix(i, j);
          CHECK(fd == doctest::Approx(expected).epsilon(1e-5));
        }
      }
    }
  }
  // repeated-eigenvalue pair: the limit branch must still match
  for (const auto& op : suite(3)) {
    SymMatrix a = SymMatrix::diagonal({2.0, 2.0, 1.0});
    const auto lin = F_and_linearization(op, a);
    const double h = 1e-6;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i; j < 3; ++j) {
        SymMatrix ap = a, am = a;
        ap.set(i, j, a(i, j) + h);
        am.set(i, j, a(i, j) - h);
        const double fd =
            (F_and_linearization(op, ap).value - F_and_linearization(op, am).value) / (2.0 * h);
        const double expected = (i == j) ? lin.matrix(i, i) : 2.0 * lin.matrix(i, j);
        CHECK(fd == doctest::Approx(expected).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("monotonicity: F(A + P) > F(A) for positive definite P") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> dist(-0.3, 0.3);
  for (const auto& op : suite(3)) {
    for (int rep = 0; rep < 200; ++rep) {
      SymMatrix a(3);
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i; j < 3; ++j) a.set(i, j, (i == j ? 2.0 : 0.0) + dist(rng));
      }
      // P = B^T B + eps I is positive definite
      double b[3][3];
      for (auto& row : b) {
        for (double& v : row) v = dist(rng);
      }
      SymMatrix p(3);
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i; j < 3; ++j) {
          double v = (i == j) ? 1e-3 : 0.0;
          for (std::size_t m = 0; m < 3; ++m) v += b[m][i] * b[m][j];
          p.set(i, j, v);
        }
      }
      SymMatrix apb(3);
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i; j < 3; ++j) apb.set(i, j, a(i, j) + p(i, j));
      }
      CHECK(F_and_linearization(op, apb).value > F_and_linearization(op, a).value);
    }
  }
}

TEST_CASE("condition N constants: direct substitution and composition") {
  CHECK(condition_n_constants(OperatorSpec::monge_ampere(2), 1.0).n1 == doctest::Approx(4.0));
  CHECK(condition_n_constants(OperatorSpec::monge_ampere(2), 1.0).n2 == doctest::Approx(1.0));
  CHECK(condition_n_constants(OperatorSpec::monge_ampere(3), 1.0).n1 == doctest::Approx(8.0));
  CHECK(condition_n_constants(OperatorSpec::monge_ampere(3), 1.0).n2 == doctest::Approx(2.0));
  CHECK_THROWS_AS(condition_n_constants(OperatorSpec::monge_ampere(3), 0.0), invalid_input);

  const auto est = estimate_garding_d(OperatorSpec::monge_ampere(3), 20000, 9);
  const auto nc = condition_n_constants(OperatorSpec::monge_ampere(3), est.d_hat);
  CHECK(nc.n1 == doctest::Approx(8.0).epsilon(0.15));
}

TEST_CASE("garding constant: positive for the three product-dominated families") {
  // oracle for Monge-Ampere: the Minkowski determinant inequality gives d = 1
  const auto ma = estimate_garding_d(OperatorSpec::monge_ampere(3), 100000, 21);
  CHECK_FALSE(ma.quotient_warning);
  CHECK(ma.d_hat >= 0.95);
  CHECK(ma.d_hat <= 1.05);

  for (std::size_t n : {2ul, 3ul, 4ul}) {
    const auto kh = estimate_garding_d(OperatorSpec::k_hessian(2, n), 20000, 22);
    CHECK(kh.d_hat > 0.0);
  }
  const auto pma = estimate_garding_d(OperatorSpec::p_monge_ampere(2, 3), 20000, 23);
  CHECK(pma.d_hat > 0.0);

  const auto q = estimate_garding_d(OperatorSpec::hessian_quotient(2, 1, 3), 5000, 24);
  CHECK(q.quotient_warning);
}

TEST_CASE("condition N realized with the constructive constants") {
  const auto op = OperatorSpec::monge_ampere(3);
  const auto est = estimate_garding_d(op, 50000, 31);
  const auto nc = condition_n_constants(op, est.d_hat);
  ConeSampler sampler(op.cone(), 32);
  for (int rep = 0; rep < 10000; ++rep) {
    Spectrum lam = sampler.draw();
    lam = lam.scaled(1.0 / f_eval(op, lam));
    const auto g = f_grad(op, lam);
    double sum = 0.0, mn = g[0];
    for (double v : g) {
      sum += v;
      mn = std::min(mn, v);
    }
    CHECK(mn >= 1.0 / (nc.n1 * std::pow(sum, nc.n2)));
  }
}
