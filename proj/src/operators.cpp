#include "hesslab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hesslab/symfun.hpp"

namespace hesslab {

OperatorSpec OperatorSpec::monge_ampere(std::size_t n) {
  if (n < 2) throw invalid_input("monge_ampere: need n >= 2");
  return OperatorSpec{OperatorKind::MongeAmpere, n, 0, 0, 0};
}

OperatorSpec OperatorSpec::k_hessian(std::size_t k, std::size_t n) {
  if (n < 2 || k < 1 || k > n) throw invalid_input("k_hessian: need 1 <= k <= n");
  return OperatorSpec{OperatorKind::KHessian, n, k, 0, 0};
}

OperatorSpec OperatorSpec::hessian_quotient(std::size_t k, std::size_t l, std::size_t n) {
  if (n < 2 || l < 1 || l >= k || k > n) {
    throw invalid_input("hessian_quotient: need 1 <= l < k <= n");
  }
  return OperatorSpec{OperatorKind::HessianQuotient, n, k, l, 0};
}

OperatorSpec OperatorSpec::p_monge_ampere(std::size_t p, std::size_t n) {
  if (n < 2 || p < 1 || p > n) throw invalid_input("p_monge_ampere: need 1 <= p <= n");
  if (n > 12) throw invalid_input("p_monge_ampere: n capped at 12 (tuple enumeration)");
  return OperatorSpec{OperatorKind::PMongeAmpere, n, 0, 0, p};
}

ConeSpec OperatorSpec::cone() const {
  switch (kind) {
    case OperatorKind::MongeAmpere:
      return ConeSpec::gamma_k(n, n);
    case OperatorKind::KHessian:
      return ConeSpec::gamma_k(k, n);
    case OperatorKind::HessianQuotient:
      return ConeSpec::gamma_k(k, n);
    case OperatorKind::PMongeAmpere:
      return ConeSpec::gamma_hat_p(p, n);
  }
  throw invalid_input("OperatorSpec: unknown kind");
}

std::string OperatorSpec::name() const {
  switch (kind) {
    case OperatorKind::MongeAmpere:
      return "MongeAmpere(n=" + std::to_string(n) + ")";
    case OperatorKind::KHessian:
      return "KHessian(k=" + std::to_string(k) + ",n=" + std::to_string(n) + ")";
    case OperatorKind::HessianQuotient:
      return "HessianQuotient(k=" + std::to_string(k) + ",l=" + std::to_string(l) +
             ",n=" + std::to_string(n) + ")";
    case OperatorKind::PMongeAmpere:
      return "PMongeAmpere(p=" + std::to_string(p) + ",n=" + std::to_string(n) + ")";
  }
  return "?";
}

double OperatorSpec::f_at_ones() const {
  switch (kind) {
    case OperatorKind::MongeAmpere:
      return 1.0;
    case OperatorKind::KHessian:
      return std::pow(binomial(n, k), 1.0 / static_cast<double>(k));
    case OperatorKind::HessianQuotient:
      return std::pow(binomial(n, k) / binomial(n, l),
                      1.0 / static_cast<double>(k - l));
    case OperatorKind::PMongeAmpere:
      return static_cast<double>(p);  // all p-sums equal p, geometric mean p
  }
  return 0.0;
}

namespace {

void require_admissible(const OperatorSpec& op, const Spectrum& lambda) {
  if (lambda.n() != op.n) throw invalid_input("operator: dimension mismatch");
  if (!contains(op.cone(), lambda, 0.0)) {
    throw not_admissible(op.name() + ": eigenvalues outside " + op.cone().name());
  }
}

// Visits all C(n,p) index tuples; f(sum over tuple) accumulated by caller.
template <typename Fn>
void for_each_p_tuple(std::size_t n, std::size_t p, Fn&& fn) {
  std::vector<std::size_t> idx(p);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    fn(idx);
    std::size_t i = p;
    bool advanced = false;
    while (i-- > 0) {
      if (idx[i] < n - p + i) {
        ++idx[i];
        for (std::size_t j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) return;
  }
}

}  // namespace

double f_eval(const OperatorSpec& op, const Spectrum& lambda) {
  require_admissible(op, lambda);
  const std::size_t n = op.n;
  switch (op.kind) {
    case OperatorKind::MongeAmpere: {
      double logsum = 0.0;
      for (double v : lambda.values()) logsum += std::log(v);
      return std::exp(logsum / static_cast<double>(n));
    }
    case OperatorKind::KHessian: {
      const double sk = sigma_j(lambda.values(), op.k);
      return std::pow(sk, 1.0 / static_cast<double>(op.k));
    }
    case OperatorKind::HessianQuotient: {
      const std::vector<double> s = sigma_all(lambda);
      return std::exp((std::log(s[op.k]) - std::log(s[op.l])) /
                      static_cast<double>(op.k - op.l));
    }
    case OperatorKind::PMongeAmpere: {
      double logsum = 0.0;
      for_each_p_tuple(n, op.p, [&](const std::vector<std::size_t>& idx) {
        double s = 0.0;
        for (std::size_t i : idx) s += lambda[i];
        logsum += std::log(s);
      });
      return std::exp(logsum / binomial(n, op.p));
    }
  }
  throw invalid_input("f_eval: unknown kind");
}

std::vector<double> f_grad(const OperatorSpec& op, const Spectrum& lambda) {
  require_admissible(op, lambda);
  const std::size_t n = op.n;
  std::vector<double> g(n, 0.0);
  switch (op.kind) {
    case OperatorKind::MongeAmpere: {
      const double f = f_eval(op, lambda);
      for (std::size_t i = 0; i < n; ++i) g[i] = f / (static_cast<double>(n) * lambda[i]);
      return g;
    }
    case OperatorKind::KHessian: {
      const double sk = sigma_j(lambda.values(), op.k);
      const double kk = static_cast<double>(op.k);
      const double pref = std::pow(sk, (1.0 - kk) / kk) / kk;
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = pref * sigma_partial(op.k - 1, lambda, i);
      }
      return g;
    }
    case OperatorKind::HessianQuotient: {
      const std::vector<double> s = sigma_all(lambda);
      const double f = std::exp((std::log(s[op.k]) - std::log(s[op.l])) /
                                static_cast<double>(op.k - op.l));
      const double inv_km_l = 1.0 / static_cast<double>(op.k - op.l);
      for (std::size_t i = 0; i < n; ++i) {
        const double dk = sigma_partial(op.k - 1, lambda, i);
        const double dl = sigma_partial(op.l - 1, lambda, i);
        g[i] = f * inv_km_l * (dk / s[op.k] - dl / s[op.l]);
      }
      return g;
    }
    case OperatorKind::PMongeAmpere: {
      const double f = f_eval(op, lambda);
      const double inv_c = 1.0 / binomial(n, op.p);
      for_each_p_tuple(n, op.p, [&](const std::vector<std::size_t>& idx) {
        double s = 0.0;
        for (std::size_t i : idx) s += lambda[i];
        const double w = f * inv_c / s;
        for (std::size_t i : idx) g[i] += w;
      });
      return g;
    }
  }
  throw invalid_input("f_grad: unknown kind");
}

double homogeneity_residual(const OperatorSpec& op, const Spectrum& lambda) {
  const double f = f_eval(op, lambda);
  const std::vector<double> g = f_grad(op, lambda);
  double s = 0.0;
  for (std::size_t i = 0; i < op.n; ++i) s += g[i] * lambda[i];
  return std::abs(s - f);
}

EigenDecomposition eigen_sym(const SymMatrix& a_in) {
  const std::size_t n = a_in.n();
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = a_in(i, j);
  }
  std::vector<double> q(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i * n + i] = 1.0;

  double norm = a_in.frobenius_norm();
  const double thresh = std::max(1e-300, 1e-15 * norm);

  auto offdiag = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    }
    return std::sqrt(s);
  };

  // Cyclic Jacobi sweeps over the strict upper triangle.
  for (int sweep = 0; sweep < 100 && offdiag() > thresh; ++sweep) {
    for (std::size_t pp = 0; pp < n - 1; ++pp) {
      for (std::size_t qq = pp + 1; qq < n; ++qq) {
        const double apq = a[pp * n + qq];
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a[pp * n + pp];
        const double aqq = a[qq * n + qq];
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = a[r * n + pp];
          const double arq = a[r * n + qq];
          a[r * n + pp] = c * arp - s * arq;
          a[r * n + qq] = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = a[pp * n + r];
          const double aqr = a[qq * n + r];
          a[pp * n + r] = c * apr - s * aqr;
          a[qq * n + r] = s * apr + c * aqr;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double qrp = q[r * n + pp];
          const double qrq = q[r * n + qq];
          q[r * n + pp] = c * qrp - s * qrq;
          q[r * n + qq] = s * qrp + c * qrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

  std::vector<double> lam(n);
  std::vector<double> qs(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    lam[c] = diag[order[c]];
    for (std::size_t r = 0; r < n; ++r) qs[r * n + c] = q[r * n + order[c]];
  }
  return EigenDecomposition{Spectrum{std::move(lam)}, std::move(qs), n};
}

Linearization F_and_linearization(const OperatorSpec& op, const SymMatrix& a) {
  if (a.n() != op.n) throw invalid_input("F_and_linearization: dimension mismatch");
  EigenDecomposition ed = eigen_sym(a);
  const double f = f_eval(op, ed.lambda);  // throws not_admissible when outside cone
  const std::vector<double> g = f_grad(op, ed.lambda);
  const std::size_t n = op.n;
  SymMatrix lmat(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        s += ed.q_col(i, m) * g[m] * ed.q_col(j, m);
      }
      lmat.set(i, j, s);
    }
  }
  return Linearization{f, std::move(lmat)};
}

GardingEstimate estimate_garding_d(const OperatorSpec& op, std::size_t sample_count,
                                   std::uint64_t seed) {
  if (sample_count < 1) throw invalid_input("estimate_garding_d: need samples >= 1");
  GardingEstimate out;
  out.samples = sample_count;
  out.seed = seed;
  out.quotient_warning = (op.kind == OperatorKind::HessianQuotient);

  ConeSampler cone_sampler(op.cone(), seed);
  ConeSampler tau_sampler(ConeSpec::gamma_k(op.n, op.n), seed ^ 0x1234567ull);
  const double inv_n = 1.0 / static_cast<double>(op.n);

  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < sample_count; ++it) {
    Spectrum lambda = cone_sampler.draw();
    const double f0 = f_eval(op, lambda);
    lambda = lambda.scaled(1.0 / f0);  // homogeneity: now f(lambda) = 1

    Spectrum tau = tau_sampler.draw_positive_loguniform(1e-3, 1e3);
    double log_geo = 0.0;
    std::vector<double> sum(op.n);
    for (std::size_t i = 0; i < op.n; ++i) {
      log_geo += std::log(tau[i]);
      sum[i] = lambda[i] + tau[i];
    }
    const double geo = std::exp(log_geo * inv_n);
    const double gain = f_eval(op, Spectrum{std::move(sum)}) - 1.0;
    dmin = std::min(dmin, gain / geo);
  }
  out.d_hat = dmin;
  return out;
}

ConditionNConstants condition_n_constants(const OperatorSpec& op, double d) {
  if (!(d > 0.0)) throw invalid_input("condition_n_constants: need d > 0");
  return ConditionNConstants{std::pow(2.0 / d, static_cast<double>(op.n)),
                             static_cast<double>(op.n - 1)};
}

}  // namespace hesslab
