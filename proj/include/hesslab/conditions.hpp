#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "hesslab/operators.hpp"

namespace hesslab {

// Result of one pointwise structural-condition check. worst_margin <= 0
// exactly when satisfied is false; worst_index identifies the eigenvalue
// slot (or replacement slot) that realizes the margin, when one exists.
struct ConditionReport {
  bool satisfied = false;
  double worst_margin = 0.0;
  std::optional<std::size_t> worst_index;
  // Parameters echoed back for report serialization.
  double d1 = 0.0, d2 = 0.0, r = 0.0, a = 0.0;
  // Secondary conclusion attached by the k-Hessian / p-sum checkers: the
  // implied single-entry replacement (or shift) stays admissible.
  std::optional<bool> conclusion_holds;
};

// Large-eigenvalue damping check: after normalizing f(lambda) = 1 by
// homogeneity, every index with lambda_i > d1 must satisfy
// f_i(lambda) * lambda_i <= d2. Vacuously satisfied when no eigenvalue
// exceeds d1 (worst_margin = +inf).
ConditionReport check_condition_d(const OperatorSpec& op, const Spectrum& lambda, double d1,
                                  double d2);

// Single-entry replacement check: for every i, lambda with entry i replaced
// by r must stay in the cone. worst_margin is the minimal cone margin over
// the n replacements.
ConditionReport check_cns(const ConeSpec& cone, const Spectrum& lambda, double r);

// sigma_{k+1}(lambda) >= -a * sigma_k(lambda) for lambda in Gamma_k
// (k <= n-1). When the hypothesis holds, also verifies that replacing the
// largest entry by r = a*(1+1e-6)+1e-6 lands back in Gamma_k
// (conclusion_holds); the epsilon keeps the required strict r > a under
// floating point.
ConditionReport check_k_hessian_lower_bound(const Spectrum& lambda, std::size_t k, double a);

// For lambda in GammaHat_p (p >= 2): every (p-1)-sum >= -a, equivalently the
// sum of the p-1 smallest entries >= -a. conclusion_holds records whether
// lambda + (a + eps) * 1 is (p-1)-admissible.
ConditionReport check_pma_partial_sums(const Spectrum& lambda, std::size_t p, double a);

enum class ConditionId : int { D, Cns, KHessianLowerBound, PmaPartialSums };

struct FieldConditionParams {
  double d1 = 0.0, d2 = 0.0;  // condition D
  double r = 0.0;             // CNS replacement value
  double a = 0.0;             // lower-bound constant
};

struct FieldConditionReport {
  bool satisfied = false;
  double worst_margin = 0.0;
  std::string worst_location;
  std::size_t nodes_scanned = 0;
  ConditionId which = ConditionId::D;
  FieldConditionParams params;
};

class GridField;  // grid.hpp

// Applies the pointwise checker to the discrete Hessian spectrum at every
// interior node; aggregates the worst margin and where it occurs. Pointwise
// admissibility failures are rethrown with the node location attached.
FieldConditionReport field_condition_scan(const OperatorSpec& op, const GridField& field,
                                          ConditionId which,
                                          const FieldConditionParams& params);

}  // namespace hesslab
