#pragma once

#include <optional>
#include <vector>

#include "hesslab/analytic.hpp"
#include "hesslab/grid.hpp"
#include "hesslab/operators.hpp"
#include "hesslab/solver.hpp"

namespace hesslab {

// Weighted interior-estimate functional
//   sup_Omega ( (-u) + (-u)^alpha |Du| + (-u)^beta |D^2 u| )
// with |Du| Euclidean and |D^2 u| the spectral norm. The (-u)-weights damp
// the boundary-adjacent nodes, so the sup is an interior quantity.
struct EstimateReport {
  double alpha = 0.0;
  double beta = 0.0;
  double sup_neg_u = 0.0;        // sup (-u)
  double sup_grad_term = 0.0;    // sup (-u)^alpha |Du|
  double sup_hess_term = 0.0;    // sup (-u)^beta |D^2 u|
  double functional_sup = 0.0;   // sup of the pointwise sum
  double c0_bound = 0.0;         // diam^2 / (2 f(1)); filled by study/CLI paths
  double h = 0.0;
  std::optional<double> stabilization_ratio;  // |F_i - F_{i-1}| / F_{i-1}
};

// Sufficient exponents implied by the interior-estimate derivation, from
// N2 = n - 1: alpha = (N2 + 2)/2 (so 2*alpha > N2 + 1) and
// beta = N2 + (4*alpha + 2) + 1.
struct AlphaBeta {
  double alpha;
  double beta;
};
AlphaBeta default_alpha_beta(const OperatorSpec& op);

// Evaluates the functional on a solved field. corner_clip excludes nodes
// within clip_distance of a box corner (corner kinks are artifacts of the
// test domain, reported separately from the interior behavior).
EstimateReport estimate_functional(const GridField& field, double alpha, double beta,
                                   double corner_clip_distance = 0.0);

struct C0Check {
  bool holds = false;
  double c = 0.0;  // the quadratic start field's depth
};

// -C - 1e-8 <= u < 0 at every interior node, C = diam^2/(2 f(1)).
C0Check c0_check(const GridField& field, const OperatorSpec& op, const DomainSpec& domain);

// One solve + estimate per h (descending h_list); each row after the first
// records the relative change of the functional. Box domains clip nodes
// within 4h of the corners.
std::vector<EstimateReport> refinement_study(const OperatorSpec& op, const DomainSpec& domain,
                                             const std::vector<double>& h_list, double alpha,
                                             double beta,
                                             const SolveOptions& opts = SolveOptions{});

// Blow-down v_R(y) = (u(Ry) - R^2)/R^2 of an entire candidate with quadratic
// growth u(x) >= |x|^2/C - C, sampled over the box covering
// {|y|^2 <= C(C+1)}. Per R: the sublevel set Omega_R = {v_R < 0}, its node
// diameter against the growth bound 2 sqrt(C(C+1)), the core
// Omega'_R = {v_R <= -1/2}, the Hessian sup on the core, and the node-wise
// deviation of v_R from the first R in the list.
struct BlowdownRow {
  double r = 0.0;
  double diam_omega = 0.0;
  double sup_hess_core = 0.0;
  double invariance_defect = 0.0;
  std::size_t omega_nodes = 0;
  std::size_t core_nodes = 0;
  bool core_inside_omega = false;
};

struct BlowdownReport {
  double growth_c = 0.0;
  double diam_bound = 0.0;       // 2 sqrt(C(C+1))
  double sample_halfwidth = 0.0; // sqrt(C(C+1))
  int nodes_per_axis = 0;
  std::vector<BlowdownRow> rows;
};

BlowdownReport blowdown(const AnalyticSource& source, const std::vector<double>& r_list,
                        double growth_c, int nodes_per_axis = 0);

// Solved-field variant: the field (on a ball) is multilinearly interpolated;
// every sample R*y must land inside the source ball.
BlowdownReport blowdown(const GridField& source, const std::vector<double>& r_list,
                        double growth_c, int nodes_per_axis = 0);

// Independent-path check of D^2 v_R(y) = D^2 u(Ry): left side from the
// coefficient-transformed source, right side from the original one.
double hessian_equivariance_defect(const AnalyticSource& source, double r,
                                   int samples_per_axis = 9);

// Least-squares quadratic fit over the interior nodes; deviation is the
// sup over nodes of the spectral norm of (discrete Hessian - fitted Hessian).
struct QuadraticFit {
  SymMatrix hessian{2};
  std::vector<double> linear;
  double constant = 0.0;
  double deviation = 0.0;
};

QuadraticFit liouville_probe(const GridField& field);

}  // namespace hesslab
