#include "hesslab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "hesslab/errors.hpp"

namespace hesslab {

GridField initial_guess(const OperatorSpec& op, std::shared_ptr<const GridGeometry> geom) {
  const DomainSpec& dom = geom->domain();
  const double a = 1.0 / op.f_at_ones();
  const double diam2 = dom.diameter() * dom.diameter();
  const Point c = dom.centroid();
  const int dim = dom.dim;
  return GridField::sampled(geom, [a, diam2, c, dim](const Point& x) {
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
    return 0.5 * a * (r2 - diam2);
  });
}

double initial_guess_depth(const OperatorSpec& op, const DomainSpec& domain) {
  return domain.diameter() * domain.diameter() / (2.0 * op.f_at_ones());
}

std::vector<double> residual_field(const OperatorSpec& op, const GridField& field) {
  const GridGeometry& g = field.geom();
  if (g.dim() != static_cast<int>(op.n)) {
    throw invalid_input("residual_field: operator dimension != grid dimension");
  }
  const ConeSpec cone = op.cone();
  std::vector<double> r(g.dof_count());
  for (std::size_t dof = 0; dof < g.dof_count(); ++dof) {
    const SymMatrix h = hessian_fd(field, static_cast<int>(dof));
    const EigenDecomposition ed = eigen_sym(h);
    if (!contains(cone, ed.lambda, 0.0)) {
      throw not_admissible("residual: spectrum outside " + cone.name() + " at node " +
                           g.node_location_string(g.node_of_dof(static_cast<int>(dof))));
    }
    r[dof] = f_eval(op, ed.lambda) - 1.0;
  }
  return r;
}

namespace {

struct NodeState {
  double residual = 0.0;
  SymMatrix linearization{2};
};

struct FieldState {
  bool admissible = false;
  double min_margin = std::numeric_limits<double>::infinity();
  double residual_max = std::numeric_limits<double>::infinity();
  std::vector<NodeState> nodes;  // filled only when with_linearization
};

// Quiet evaluation: never throws on inadmissible spectra, just reports the
// margin so the line search can reject the step.
FieldState evaluate(const OperatorSpec& op, const GridField& field, double margin_floor,
                    bool with_linearization) {
  const GridGeometry& g = field.geom();
  const ConeSpec cone = op.cone();
  FieldState st;
  st.residual_max = 0.0;
  if (with_linearization) st.nodes.resize(g.dof_count(), NodeState{0.0, SymMatrix(op.n)});
  for (std::size_t dof = 0; dof < g.dof_count(); ++dof) {
    const SymMatrix h = hessian_fd(field, static_cast<int>(dof));
    const EigenDecomposition ed = eigen_sym(h);
    const double margin = cone_margin(cone, ed.lambda);
    st.min_margin = std::min(st.min_margin, margin);
    if (margin < margin_floor) {
      st.admissible = false;
      st.residual_max = std::numeric_limits<double>::infinity();
      return st;
    }
    const double f = f_eval(op, ed.lambda);
    const double r = f - 1.0;
    st.residual_max = std::max(st.residual_max, std::abs(r));
    if (with_linearization) {
      const std::vector<double> grad = f_grad(op, ed.lambda);
      SymMatrix lmat(op.n);
      for (std::size_t i = 0; i < op.n; ++i) {
        for (std::size_t j = i; j < op.n; ++j) {
          double s = 0.0;
          for (std::size_t m = 0; m < op.n; ++m) s += ed.q_col(i, m) * grad[m] * ed.q_col(j, m);
          lmat.set(i, j, s);
        }
      }
      st.nodes[dof] = NodeState{r, std::move(lmat)};
    }
  }
  st.admissible = true;
  return st;
}

using SpMat = Eigen::SparseMatrix<double>;

// Newton system: rows are interior dofs, d r_p / d u_q with the Hessian
// stencil weights composed against the nodal linearization F^{ij}.
SpMat assemble_jacobian(const GridField& field, const FieldState& st) {
  const GridGeometry& g = field.geom();
  const int dim = g.dim();
  const auto& h = g.spacing();
  const std::size_t ndof = g.dof_count();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(ndof * static_cast<std::size_t>(dim == 2 ? 9 : 19));

  auto add = [&](std::size_t row, const Arm& arm_target, double w) {
    if (arm_target.node < 0) return;  // cut value: constant, no column
    const int q = g.dof_of_node(arm_target.node);
    if (q < 0) return;  // box boundary node: fixed data
    trips.emplace_back(static_cast<int>(row), q, w);
  };

  for (std::size_t dof = 0; dof < ndof; ++dof) {
    const SymMatrix& lmat = st.nodes[dof].linearization;
    double center = 0.0;

    // sum_a L_aa * d(H_aa)/du + 2 sum_{a<b} L_ab * d(H_ab)/du
    for (int a = 0; a < dim; ++a) {
      const Arm& ap = g.arm(static_cast<int>(dof), g.axis_line(a), 0);
      const Arm& am = g.arm(static_cast<int>(dof), g.axis_line(a), 1);
      const double coef = lmat(static_cast<std::size_t>(a), static_cast<std::size_t>(a)) /
                          (h[a] * h[a]);
      const double tp = ap.theta, tm = am.theta;
      add(dof, ap, coef * 2.0 / (tp * (tp + tm)));
      add(dof, am, coef * 2.0 / (tm * (tp + tm)));
      center += -coef * 2.0 / (tp * tm);
    }
    for (int pr = 0; pr < g.pair_count(); ++pr) {
      const auto ab = g.pair_axes(pr);
      const double coef = 2.0 *
                          lmat(static_cast<std::size_t>(ab[0]), static_cast<std::size_t>(ab[1])) /
                          (4.0 * h[ab[0]] * h[ab[1]]);
      for (int sgn = 0; sgn < 2; ++sgn) {
        const int line = (sgn == 0) ? g.diag_plus_line(pr) : g.diag_minus_line(pr);
        const double orient = (sgn == 0) ? 1.0 : -1.0;
        const Arm& ap = g.arm(static_cast<int>(dof), line, 0);
        const Arm& am = g.arm(static_cast<int>(dof), line, 1);
        const double tp = ap.theta, tm = am.theta;
        add(dof, ap, orient * coef * 2.0 / (tp * (tp + tm)));
        add(dof, am, orient * coef * 2.0 / (tm * (tp + tm)));
        center += -orient * coef * 2.0 / (tp * tm);
      }
    }
    trips.emplace_back(static_cast<int>(dof), static_cast<int>(dof), center);
  }

  SpMat jac(static_cast<int>(ndof), static_cast<int>(ndof));
  jac.setFromTriplets(trips.begin(), trips.end());
  return jac;
}

Eigen::VectorXd solve_linear(const SpMat& jac, const Eigen::VectorXd& rhs,
                             double reduction, bool prefer_direct) {
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return Eigen::VectorXd::Zero(rhs.size());

  if (!prefer_direct) {
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> it;
    it.preconditioner().setDroptol(1e-5);
    it.preconditioner().setFillfactor(30);
    it.setTolerance(0.01 * reduction);
    it.setMaxIterations(600);
    it.compute(jac);
    if (it.info() == Eigen::Success) {
      Eigen::VectorXd x = it.solve(rhs);
      if (it.info() == Eigen::Success && (jac * x - rhs).norm() <= reduction * rhs_norm) {
        return x;
      }
    }
    // fall through to the direct factorization
  }

  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(jac);
  lu.factorize(jac);
  if (lu.info() != Eigen::Success) {
    throw solve_error(solve_error::Kind::LinearSolveFailure, "sparse LU factorization failed");
  }
  Eigen::VectorXd x = lu.solve(rhs);
  if ((jac * x - rhs).norm() > reduction * rhs_norm) {
    throw solve_error(solve_error::Kind::LinearSolveFailure,
                      "linear residual reduction not met");
  }
  return x;
}

struct NewtonStats {
  int iterations = 0;
  int backtracks = 0;
};

// Damped Newton at fixed boundary data. Returns false on line-search
// stagnation (caller shrinks the continuation step); throws on linear-solve
// failure or when the shared iteration budget runs out.
bool newton_inner(const OperatorSpec& op, GridField& field, const SolveOptions& opts,
                  int& iter_budget, NewtonStats& stats, bool prefer_direct) {
  const GridGeometry& g = field.geom();
  const std::size_t ndof = g.dof_count();

  FieldState st = evaluate(op, field, opts.admissibility_margin, true);
  if (!st.admissible) return false;

  while (st.residual_max > opts.tol) {
    if (iter_budget <= 0) {
      throw solve_error(solve_error::Kind::MaxIterExceeded,
                        "Newton iteration budget exhausted (residual " +
                            std::to_string(st.residual_max) + ")");
    }
    --iter_budget;
    ++stats.iterations;

    const SpMat jac = assemble_jacobian(field, st);
    Eigen::VectorXd rhs(static_cast<int>(ndof));
    for (std::size_t i = 0; i < ndof; ++i) rhs[static_cast<int>(i)] = -st.nodes[i].residual;
    const Eigen::VectorXd step = solve_linear(jac, rhs, opts.linear_reduction, prefer_direct);

    const bool dbg = opts.verbose;
    double s = 1.0;
    for (;;) {
      GridField cand = field;
      for (std::size_t i = 0; i < ndof; ++i) {
        cand.node_values()[static_cast<std::size_t>(g.node_of_dof(static_cast<int>(i)))] +=
            s * step[static_cast<int>(i)];
      }
      FieldState cst = evaluate(op, cand, opts.admissibility_margin, false);
      if (dbg) {
        std::fprintf(stderr, "  ls: s=%g adm=%d margin=%.3e rmax=%.6e (cur %.6e)\n", s,
                     (int)cst.admissible, cst.min_margin, cst.residual_max, st.residual_max);
      }
      if (cst.admissible && cst.residual_max < st.residual_max) {
        field = std::move(cand);
        break;
      }
      ++stats.backtracks;
      s *= 0.5;
      if (s < 1e-12) return false;  // stagnation at this boundary data
    }
    st = evaluate(op, field, opts.admissibility_margin, true);
    if (!st.admissible) return false;
  }
  return true;
}

}  // namespace

SparseCoo newton_jacobian(const OperatorSpec& op, const GridField& field) {
  FieldState st = evaluate(op, field, 0.0, true);
  if (!st.admissible) {
    throw not_admissible("newton_jacobian: field is not admissible");
  }
  const SpMat jac = assemble_jacobian(field, st);
  SparseCoo coo;
  coo.rows = coo.cols = field.geom().dof_count();
  for (int k = 0; k < jac.outerSize(); ++k) {
    for (SpMat::InnerIterator it(jac, k); it; ++it) {
      coo.row.push_back(static_cast<int>(it.row()));
      coo.col.push_back(static_cast<int>(it.col()));
      coo.value.push_back(it.value());
    }
  }
  return coo;
}

SolveReport solve(const OperatorSpec& op, const DomainSpec& domain, double h,
                  const SolveOptions& opts) {
  if (static_cast<int>(op.n) != domain.dim) {
    throw invalid_input("solve: operator dimension must match domain dimension");
  }
  auto geom = GridGeometry::make(domain, h);
  const GridGeometry& g = *geom;
  const bool prefer_direct = (g.dim() == 2);

  const GridField start = initial_guess(op, geom);

  auto set_boundary = [&](GridField& f, double s_new) {
    const double w = 1.0 - s_new;
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      if (g.node_class(static_cast<int>(node)) == NodeClass::Boundary) {
        f.node_values()[node] = w * start.node_values()[node];
      }
    }
    for (std::size_t c = 0; c < g.cut_count(); ++c) {
      f.cut_values()[c] = w * start.cut_values()[c];
    }
  };

  // Boundary-data continuation from the start field's own trace (s = 0,
  // where the start field solves the PDE exactly) to the homogeneous data
  // (s = 1). Each stage begins with an Euler predictor along the solution
  // path: the residual is linear in the boundary data through the stencils,
  // so d(residual) is tr(F^{ij} dH) of the pure boundary increment and the
  // tangent solves J du = -dr. A plain warm start (previous interior, new
  // boundary) is useless here: the data jump enters the boundary-adjacent
  // Hessians at O(1/h^2) and throws them out of the cone.
  auto predict = [&](const GridField& from, double s_old, double s_new) {
    FieldState st = evaluate(op, from, opts.admissibility_margin, true);
    if (!st.admissible) {
      throw solve_error(solve_error::Kind::LineSearchStagnation,
                        "continuation base state lost admissibility");
    }
    GridField db(geom);
    const double scale = s_old - s_new;  // b(s_new) - b(s_old) = (s_old - s_new) * trace
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      if (g.node_class(static_cast<int>(node)) == NodeClass::Boundary) {
        db.node_values()[node] = scale * start.node_values()[node];
      }
    }
    for (std::size_t c = 0; c < g.cut_count(); ++c) {
      db.cut_values()[c] = scale * start.cut_values()[c];
    }
    const std::size_t ndof = g.dof_count();
    Eigen::VectorXd rhs(static_cast<int>(ndof));
    for (std::size_t dof = 0; dof < ndof; ++dof) {
      const SymMatrix dh = hessian_fd(db, static_cast<int>(dof));
      const SymMatrix& lmat = st.nodes[dof].linearization;
      double dr = 0.0;
      for (std::size_t a = 0; a < op.n; ++a) {
        dr += lmat(a, a) * dh(a, a);
        for (std::size_t b = a + 1; b < op.n; ++b) dr += 2.0 * lmat(a, b) * dh(a, b);
      }
      rhs[static_cast<int>(dof)] = -dr;
    }
    const SpMat jac = assemble_jacobian(from, st);
    const Eigen::VectorXd du = solve_linear(jac, rhs, opts.linear_reduction, prefer_direct);
    GridField out = from;
    set_boundary(out, s_new);
    for (std::size_t dof = 0; dof < ndof; ++dof) {
      out.node_values()[static_cast<std::size_t>(g.node_of_dof(static_cast<int>(dof)))] +=
          du[static_cast<int>(dof)];
    }
    return out;
  };

  NewtonStats stats;
  int iter_budget = opts.max_iter;
  int stages = 0;

  double s_done = 0.0;
  double ds = 1.0;
  GridField last_good = start;
  while (s_done < 1.0) {
    const double s = std::min(1.0, s_done + ds);
    GridField field = predict(last_good, s_done, s);
    ++stages;
    if (opts.verbose) {
      std::fprintf(stderr, "stage s=%g ds=%g budget=%d\n", s, ds, iter_budget);
    }
    if (newton_inner(op, field, opts, iter_budget, stats, prefer_direct)) {
      s_done = s;
      last_good = std::move(field);
      ds = std::min(2.0 * ds, 1.0);
    } else {
      ds *= 0.5;
      if (ds < 1.0 / 1024.0) {
        throw solve_error(solve_error::Kind::LineSearchStagnation,
                          "line search stagnated; continuation step below 1/1024");
      }
    }
  }

  SolveReport rep{std::move(last_good), 0.0, stats.iterations, stats.backtracks, stages, false,
                  g.representative_h()};
  const std::vector<double> r = residual_field(op, rep.field);
  for (double v : r) rep.residual_max = std::max(rep.residual_max, std::abs(v));
  rep.admissible = true;  // residual_field would have thrown otherwise

  // Comparison-principle bracket: start-depth <= u < 0 at interior nodes.
  const double depth = initial_guess_depth(op, domain);
  for (std::size_t dof = 0; dof < g.dof_count(); ++dof) {
    const double u = rep.field.at_node(g.node_of_dof(static_cast<int>(dof)));
    if (!(u < 0.0) || u < -depth - 1e-8) {
      throw std::runtime_error("solve: converged field violates the sign/depth bracket at node " +
                               g.node_location_string(g.node_of_dof(static_cast<int>(dof))));
    }
  }
  return rep;
}

}  // namespace hesslab
