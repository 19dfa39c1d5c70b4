#pragma once

#include <memory>
#include <vector>

#include "hesslab/grid.hpp"
#include "hesslab/operators.hpp"

namespace hesslab {

// Dirichlet problem F(D^2 u) = 1 in Omega, u = 0 on the boundary, by damped
// Newton iteration on the interior node values. Every accepted iterate keeps
// the discrete Hessian spectrum inside the operator's cone (margin >= 1e-10
// at all interior nodes); the boundary data is driven from the quadratic
// start field's own trace to zero by an adaptive continuation, since clamping
// it in one shot can push cut-adjacent nodes out of the cone.

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 200;                  // total Newton iterations across stages
  double admissibility_margin = 1e-10; // cone slack every accepted iterate keeps
  double linear_reduction = 1e-8;      // required relative linear-solve residual
  bool verbose = false;                // stage/line-search trace on stderr
};

struct SolveReport {
  GridField field;  // converged solution with zero boundary data
  double residual_max = 0.0;
  int newton_iterations = 0;
  int line_search_backtracks = 0;
  int continuation_stages = 0;
  bool admissible = false;
  double h = 0.0;
};

// The quadratic start field u0(x) = (A/2)(|x - x_c|^2 - diam^2) with
// A = 1/f(1,...,1): solves F(D^2 u0) = 1 exactly, is <= 0 on the closed
// domain, and carries its own (nonzero) boundary trace in the field data.
GridField initial_guess(const OperatorSpec& op, std::shared_ptr<const GridGeometry> geom);

// Depth of the start field: max |u0| = diam^2 / (2 f(1)).
double initial_guess_depth(const OperatorSpec& op, const DomainSpec& domain);

// Per-dof residual F(D^2 u) - 1. Throws not_admissible naming the first
// offending node if the spectrum leaves the cone anywhere.
std::vector<double> residual_field(const OperatorSpec& op, const GridField& field);

// Sparse Newton matrix d(residual)/d(interior values) in coordinate form:
// sum_ij F^{ij} against the stencil weights, rows and columns over dofs.
struct SparseCoo {
  std::size_t rows = 0, cols = 0;
  std::vector<int> row, col;
  std::vector<double> value;
};
SparseCoo newton_jacobian(const OperatorSpec& op, const GridField& field);

SolveReport solve(const OperatorSpec& op, const DomainSpec& domain, double h,
                  const SolveOptions& opts = SolveOptions{});

}  // namespace hesslab
