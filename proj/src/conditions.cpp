#include "hesslab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hesslab/grid.hpp"
#include "hesslab/symfun.hpp"

namespace hesslab {

ConditionReport check_condition_d(const OperatorSpec& op, const Spectrum& lambda_raw, double d1,
                                  double d2) {
  const double f0 = f_eval(op, lambda_raw);  // throws if not admissible
  Spectrum lambda = lambda_raw.scaled(1.0 / f0);
  if (std::abs(f_eval(op, lambda) - 1.0) > 1e-8) {
    throw not_admissible("check_condition_d: normalization to f = 1 failed");
  }
  const std::vector<double> g = f_grad(op, lambda);

  ConditionReport rep;
  rep.d1 = d1;
  rep.d2 = d2;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambda.n(); ++i) {
    if (lambda[i] > d1) {
      const double margin = d2 - g[i] * lambda[i];
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_index = i;
      }
    }
  }
  rep.satisfied = rep.worst_margin > 0.0;
  return rep;
}

ConditionReport check_cns(const ConeSpec& cone, const Spectrum& lambda, double r) {
  if (!contains(cone, lambda, 0.0)) {
    throw not_admissible("check_cns: point outside " + cone.name());
  }
  ConditionReport rep;
  rep.r = r;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambda.n(); ++i) {
    const double margin = cone_margin(cone, lambda.replaced(i, r));
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_index = i;
    }
  }
  rep.satisfied = rep.worst_margin > 0.0;
  return rep;
}

ConditionReport check_k_hessian_lower_bound(const Spectrum& lambda, std::size_t k, double a) {
  const std::size_t n = lambda.n();
  if (k < 1 || k + 1 > n) throw invalid_input("check_k_hessian_lower_bound: need 1 <= k <= n-1");
  const ConeSpec gk = ConeSpec::gamma_k(k, n);
  if (!contains(gk, lambda, 0.0)) {
    throw not_admissible("check_k_hessian_lower_bound: point outside " + gk.name());
  }
  const std::vector<double> s = sigma_all(lambda);

  ConditionReport rep;
  rep.a = a;
  rep.worst_margin = s[k + 1] + a * s[k];
  rep.satisfied = rep.worst_margin >= 0.0;

  if (rep.satisfied) {
    // Replace the largest entry by a value strictly above a; the replaced
    // vector must still be k-admissible.
    const double r = a * (1.0 + 1e-6) + 1e-6;
    Spectrum sorted = lambda.sorted_descending();
    rep.conclusion_holds = contains(gk, sorted.replaced(0, r), 0.0);
  }
  return rep;
}

ConditionReport check_pma_partial_sums(const Spectrum& lambda, std::size_t p, double a) {
  const std::size_t n = lambda.n();
  if (p < 2 || p > n) throw invalid_input("check_pma_partial_sums: need 2 <= p <= n");
  const ConeSpec hat = ConeSpec::gamma_hat_p(p, n);
  if (!contains(hat, lambda, 0.0)) {
    throw not_admissible("check_pma_partial_sums: point outside " + hat.name());
  }
  std::vector<double> v = lambda.values();
  std::sort(v.begin(), v.end());
  double smallest = 0.0;
  for (std::size_t i = 0; i + 1 < p; ++i) smallest += v[i];

  ConditionReport rep;
  rep.a = a;
  rep.worst_margin = smallest + a;
  rep.satisfied = rep.worst_margin >= 0.0;

  if (rep.satisfied) {
    const double r = a + 1e-6 * std::max(1.0, std::abs(a));
    rep.conclusion_holds =
        contains(ConeSpec::gamma_hat_p(p - 1, n), lambda.shifted(r), 0.0);
  }
  return rep;
}

FieldConditionReport field_condition_scan(const OperatorSpec& op, const GridField& field,
                                          ConditionId which,
                                          const FieldConditionParams& params) {
  const GridGeometry& g = field.geom();
  if (g.dim() != static_cast<int>(op.n)) {
    throw invalid_input("field_condition_scan: operator dimension != grid dimension");
  }
  FieldConditionReport rep;
  rep.which = which;
  rep.params = params;
  rep.satisfied = true;
  rep.worst_margin = std::numeric_limits<double>::infinity();

  for (std::size_t dof = 0; dof < g.dof_count(); ++dof) {
    const int node = g.node_of_dof(static_cast<int>(dof));
    const Spectrum lambda = eigen_sym(hessian_fd(field, static_cast<int>(dof))).lambda;
    ConditionReport point;
    try {
      switch (which) {
        case ConditionId::D:
          point = check_condition_d(op, lambda, params.d1, params.d2);
          break;
        case ConditionId::Cns:
          point = check_cns(op.cone(), lambda, params.r);
          break;
        case ConditionId::KHessianLowerBound:
          point = check_k_hessian_lower_bound(lambda, op.k, params.a);
          break;
        case ConditionId::PmaPartialSums:
          point = check_pma_partial_sums(lambda, op.p, params.a);
          break;
      }
    } catch (const not_admissible& e) {
      throw not_admissible(std::string(e.what()) + " at node " +
                           g.node_location_string(node));
    }
    if (point.worst_margin < rep.worst_margin) {
      rep.worst_margin = point.worst_margin;
      rep.worst_location = g.node_location_string(node);
    }
    rep.satisfied = rep.satisfied && point.satisfied;
    ++rep.nodes_scanned;
  }
  return rep;
}

}  // namespace hesslab
