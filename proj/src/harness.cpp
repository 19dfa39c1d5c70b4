#include "hesslab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "hesslab/errors.hpp"

namespace hesslab {

AlphaBeta default_alpha_beta(const OperatorSpec& op) {
  const double n2 = condition_n_constants(op, 1.0).n2;  // n2 = n - 1, d-independent
  const double alpha = 0.5 * (n2 + 2.0);
  const double gamma = 4.0 * alpha + 2.0;
  return AlphaBeta{alpha, n2 + gamma + 1.0};
}

namespace {

double spectral_norm(const SymMatrix& m) {
  const EigenDecomposition ed = eigen_sym(m);
  double v = 0.0;
  for (double x : ed.lambda.values()) v = std::max(v, std::abs(x));
  return v;
}

double euclid(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Distance from x to the nearest box corner (infinity for balls).
double corner_distance(const DomainSpec& dom, const Point& x) {
  if (dom.shape != DomainSpec::Shape::Box) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  const int ncorners = 1 << dom.dim;
  for (int mask = 0; mask < ncorners; ++mask) {
    double s = 0.0;
    for (int a = 0; a < dom.dim; ++a) {
      const double ca = (mask >> a) & 1 ? dom.hi[a] : dom.lo[a];
      s += (x[a] - ca) * (x[a] - ca);
    }
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

}  // namespace

EstimateReport estimate_functional(const GridField& field, double alpha, double beta,
                                   double corner_clip_distance) {
  const GridGeometry& g = field.geom();
  EstimateReport rep;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.h = g.representative_h();

  for (std::size_t dof = 0; dof < g.dof_count(); ++dof) {
    const int node = g.node_of_dof(static_cast<int>(dof));
    if (corner_clip_distance > 0.0 &&
        corner_distance(g.domain(), g.node_point(node)) < corner_clip_distance) {
      continue;
    }
    const double u = field.at_node(node);
    if (!(u < 0.0)) {
      throw invalid_input("estimate_functional: nonnegative u at interior node " +
                          g.node_location_string(node));
    }
    const double w = -u;
    const double grad_term = std::pow(w, alpha) * euclid(gradient_fd(field, static_cast<int>(dof)));
    const double hess_term = std::pow(w, beta) * spectral_norm(hessian_fd(field, static_cast<int>(dof)));
    rep.sup_neg_u = std::max(rep.sup_neg_u, w);
    rep.sup_grad_term = std::max(rep.sup_grad_term, grad_term);
    rep.sup_hess_term = std::max(rep.sup_hess_term, hess_term);
    rep.functional_sup = std::max(rep.functional_sup, w + grad_term + hess_term);
  }
  return rep;
}

C0Check c0_check(const GridField& field, const OperatorSpec& op, const DomainSpec& domain) {
  C0Check out;
  out.c = initial_guess_depth(op, domain);
  out.holds = true;
  const GridGeometry& g = field.geom();
  for (std::size_t dof = 0; dof < g.dof_count(); ++dof) {
    const double u = field.at_node(g.node_of_dof(static_cast<int>(dof)));
    if (!(u < 0.0) || u < -out.c - 1e-8) {
      out.holds = false;
      break;
    }
  }
  return out;
}

std::vector<EstimateReport> refinement_study(const OperatorSpec& op, const DomainSpec& domain,
                                             const std::vector<double>& h_list, double alpha,
                                             double beta, const SolveOptions& opts) {
  if (h_list.empty()) throw invalid_input("refinement_study: empty h list");
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    if (!(h_list[i] < h_list[i - 1])) {
      throw invalid_input("refinement_study: h list must be strictly descending");
    }
  }
  std::vector<EstimateReport> rows;
  rows.reserve(h_list.size());
  for (double h : h_list) {
    SolveReport sol = solve(op, domain, h, opts);
    const double clip = domain.shape == DomainSpec::Shape::Box ? 4.0 * h : 0.0;
    EstimateReport rep = estimate_functional(sol.field, alpha, beta, clip);
    rep.c0_bound = initial_guess_depth(op, domain);
    if (!rows.empty()) {
      rep.stabilization_ratio =
          std::abs(rep.functional_sup - rows.back().functional_sup) / rows.back().functional_sup;
    }
    rows.push_back(std::move(rep));
  }
  return rows;
}

namespace {

struct SampledBlowdown {
  std::vector<double> values;  // v_R on the sample lattice
  int nodes = 0;               // per axis
  int dim = 0;
  double lo = 0.0, step = 0.0;

  std::size_t count() const {
    std::size_t c = static_cast<std::size_t>(nodes) * static_cast<std::size_t>(nodes);
    return dim == 3 ? c * static_cast<std::size_t>(nodes) : c;
  }
  Point point(std::size_t idx) const {
    Point p{0, 0, 0};
    if (dim == 2) {
      p[0] = lo + step * static_cast<double>(idx / static_cast<std::size_t>(nodes));
      p[1] = lo + step * static_cast<double>(idx % static_cast<std::size_t>(nodes));
    } else {
      const std::size_t nn = static_cast<std::size_t>(nodes);
      p[0] = lo + step * static_cast<double>(idx / (nn * nn));
      p[1] = lo + step * static_cast<double>((idx / nn) % nn);
      p[2] = lo + step * static_cast<double>(idx % nn);
    }
    return p;
  }
};

// Shared engine: vals(y) evaluates v_R on lattice points, hess(y) its
// Hessian (analytic or finite-difference, per source kind).
BlowdownReport blowdown_impl(
    int dim, const std::vector<double>& r_list, double growth_c, int nodes_per_axis,
    const std::function<double(double, const Point&)>& u_at,  // u(R*y) with growth check
    const std::function<std::optional<SymMatrix>(double, const Point&)>&
        hess_v_at)  // D^2 v_R(y); nullopt when not evaluable at y
{
  if (r_list.empty()) throw invalid_input("blowdown: empty R list");
  if (!(growth_c > 0.0)) throw invalid_input("blowdown: growth constant must be positive");
  BlowdownReport rep;
  rep.growth_c = growth_c;
  rep.sample_halfwidth = std::sqrt(growth_c * (growth_c + 1.0));
  rep.diam_bound = 2.0 * rep.sample_halfwidth;
  rep.nodes_per_axis = nodes_per_axis > 0 ? nodes_per_axis : (dim == 2 ? 65 : 33);

  SampledBlowdown ref;
  for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
    const double r = r_list[ri];
    if (!(r > 0.0)) throw invalid_input("blowdown: R values must be positive");

    SampledBlowdown sb;
    sb.nodes = rep.nodes_per_axis;
    sb.dim = dim;
    sb.lo = -rep.sample_halfwidth;
    sb.step = 2.0 * rep.sample_halfwidth / (sb.nodes - 1);
    sb.values.resize(sb.count());

    BlowdownRow row;
    row.r = r;
    for (std::size_t idx = 0; idx < sb.count(); ++idx) {
      const Point y = sb.point(idx);
      const double u = u_at(r, y);
      double y2 = 0.0;
      for (int a = 0; a < dim; ++a) y2 += y[a] * y[a];
      const double x2 = r * r * y2;
      if (u < x2 / growth_c - growth_c - 1e-9 * (1.0 + std::abs(u))) {
        throw invalid_input("blowdown: growth constant inconsistent with samples");
      }
      sb.values[idx] = (u - r * r) / (r * r);
    }

    // Omega_R membership and its node diameter via the shell of the set.
    std::vector<std::size_t> shell;
    const std::size_t nn = static_cast<std::size_t>(sb.nodes);
    auto member = [&](std::size_t idx) { return sb.values[idx] < 0.0; };
    for (std::size_t idx = 0; idx < sb.count(); ++idx) {
      if (!member(idx)) continue;
      ++row.omega_nodes;
      if (sb.values[idx] <= -0.5) ++row.core_nodes;
      bool boundary_of_set = false;
      // face neighbors in lattice index space
      const std::size_t strides[3] = {dim == 2 ? nn : nn * nn, dim == 2 ? 1 : nn, 1};
      std::size_t coord[3] = {0, 0, 0};
      if (dim == 2) {
        coord[0] = idx / nn;
        coord[1] = idx % nn;
      } else {
        coord[0] = idx / (nn * nn);
        coord[1] = (idx / nn) % nn;
        coord[2] = idx % nn;
      }
      for (int a = 0; a < dim; ++a) {
        if (coord[a] == 0 || coord[a] + 1 >= nn) {
          boundary_of_set = true;
          break;
        }
        if (!member(idx - strides[a]) || !member(idx + strides[a])) {
          boundary_of_set = true;
          break;
        }
      }
      if (boundary_of_set) shell.push_back(idx);
    }
    double diam2 = 0.0;
    for (std::size_t a = 0; a < shell.size(); ++a) {
      const Point pa = sb.point(shell[a]);
      for (std::size_t b = a + 1; b < shell.size(); ++b) {
        const Point pb = sb.point(shell[b]);
        double d2 = 0.0;
        for (int c = 0; c < dim; ++c) d2 += (pa[c] - pb[c]) * (pa[c] - pb[c]);
        diam2 = std::max(diam2, d2);
      }
    }
    row.diam_omega = std::sqrt(diam2);

    row.core_inside_omega = true;  // v <= -1/2 implies v < 0 node-wise
    double sup_hess = 0.0;
    for (std::size_t idx = 0; idx < sb.count(); ++idx) {
      if (sb.values[idx] <= -0.5) {
        const std::optional<SymMatrix> hv = hess_v_at(r, sb.point(idx));
        if (hv) sup_hess = std::max(sup_hess, spectral_norm(*hv));
      }
    }
    row.sup_hess_core = sup_hess;

    if (ri == 0) {
      ref = sb;
      row.invariance_defect = 0.0;
    } else {
      double defect = 0.0;
      for (std::size_t idx = 0; idx < sb.count(); ++idx) {
        defect = std::max(defect, std::abs(sb.values[idx] - ref.values[idx]));
      }
      row.invariance_defect = defect;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace

BlowdownReport blowdown(const AnalyticSource& source, const std::vector<double>& r_list,
                        double growth_c, int nodes_per_axis) {
  const AnalyticSource u = source.normalized_at_origin();
  const int dim = u.dim();
  return blowdown_impl(
      dim, r_list, growth_c, nodes_per_axis,
      [&u, dim](double r, const Point& y) {
        Point x{0, 0, 0};
        for (int a = 0; a < dim; ++a) x[a] = r * y[a];
        return u.value(x);
      },
      [&u](double r, const Point& y) { return std::optional<SymMatrix>(u.rescaled(r).hessian(y)); });
}

namespace {

// Multilinear interpolation of a grid field; the query must stay inside the
// sampled bounding box.
double interpolate(const GridField& field, const Point& x) {
  const GridGeometry& g = field.geom();
  const int dim = g.dim();
  const auto& nn = g.nodes_per_axis();
  const auto& h = g.spacing();
  const Point origin = g.node_point(0);
  int base[3] = {0, 0, 0};
  double frac[3] = {0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    const double t = (x[a] - origin[a]) / h[a];
    if (t < 0.0 || t > nn[a] - 1) {
      throw invalid_input("blowdown: sample point outside the source field");
    }
    base[a] = std::min(static_cast<int>(t), nn[a] - 2);
    frac[a] = t - base[a];
  }
  double acc = 0.0;
  const int corners = 1 << dim;
  for (int mask = 0; mask < corners; ++mask) {
    double w = 1.0;
    int idx[3] = {base[0], base[1], base[2]};
    for (int a = 0; a < dim; ++a) {
      if ((mask >> a) & 1) {
        idx[a] += 1;
        w *= frac[a];
      } else {
        w *= 1.0 - frac[a];
      }
    }
    const int node = (idx[0] * nn[1] + idx[1]) * nn[2] + (dim == 3 ? idx[2] : 0);
    acc += w * field.at_node(node);
  }
  return acc;
}

}  // namespace

BlowdownReport blowdown(const GridField& source, const std::vector<double>& r_list,
                        double growth_c, int nodes_per_axis) {
  const int dim = source.geom().dim();
  const double u0 = interpolate(source, Point{0, 0, 0});
  auto u_at = [&source, u0, dim](double r, const Point& y) {
    Point x{0, 0, 0};
    for (int a = 0; a < dim; ++a) x[a] = r * y[a];
    return interpolate(source, x) - u0;
  };
  // D^2 v_R(y) = D^2 u(R y): read the source field's discrete Hessian at the
  // nearest interior node of R*y.
  auto hess_at = [&source, dim](double r, const Point& y) -> std::optional<SymMatrix> {
    const GridGeometry& g = source.geom();
    const auto& nn = g.nodes_per_axis();
    const auto& h = g.spacing();
    const Point origin = g.node_point(0);
    int idx[3] = {0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      const double t = (r * y[a] - origin[a]) / h[a];
      idx[a] = std::clamp(static_cast<int>(std::lround(t)), 0, nn[a] - 1);
    }
    const int node = (idx[0] * nn[1] + idx[1]) * nn[2] + (dim == 3 ? idx[2] : 0);
    if (g.dof_of_node(node) < 0) return std::nullopt;
    return hessian_fd_at_node(source, node);
  };
  return blowdown_impl(dim, r_list, growth_c, nodes_per_axis, u_at, hess_at);
}

double hessian_equivariance_defect(const AnalyticSource& source, double r,
                                   int samples_per_axis) {
  const AnalyticSource u = source.normalized_at_origin();
  const AnalyticSource v = u.rescaled(r);
  const int dim = u.dim();
  double defect = 0.0;
  const double lo = -1.5, hi = 1.5;
  const int m = std::max(2, samples_per_axis);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (;;) {
    Point y{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      y[a] = lo + (hi - lo) * idx[static_cast<std::size_t>(a)] / (m - 1);
    }
    Point x{0, 0, 0};
    for (int a = 0; a < dim; ++a) x[a] = r * y[a];
    const SymMatrix lhs = v.hessian(y);   // coefficient-transformed path
    const SymMatrix rhs = u.hessian(x);   // argument-scaled path
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        defect = std::max(defect, std::abs(lhs(static_cast<std::size_t>(a),
                                               static_cast<std::size_t>(b)) -
                                           rhs(static_cast<std::size_t>(a),
                                               static_cast<std::size_t>(b))));
      }
    }
    int a = 0;
    while (a < dim && ++idx[static_cast<std::size_t>(a)] == m) {
      idx[static_cast<std::size_t>(a)] = 0;
      ++a;
    }
    if (a == dim) break;
  }
  return defect;
}

QuadraticFit liouville_probe(const GridField& field) {
  const GridGeometry& g = field.geom();
  const int dim = g.dim();
  const std::size_t nbasis = 1 + static_cast<std::size_t>(dim) +
                             static_cast<std::size_t>(dim * (dim + 1) / 2);
  if (g.dof_count() < 2 * nbasis) {
    throw invalid_input("liouville_probe: too few interior nodes for a quadratic fit");
  }

  auto basis = [&](const Point& x, std::vector<double>& phi) {
    std::size_t m = 0;
    phi[m++] = 1.0;
    for (int a = 0; a < dim; ++a) phi[m++] = x[a];
    for (int a = 0; a < dim; ++a) {
      for (int b = a; b < dim; ++b) phi[m++] = 0.5 * x[a] * x[b] * (a == b ? 1.0 : 2.0);
    }
  };

  Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(static_cast<int>(nbasis), static_cast<int>(nbasis));
  Eigen::VectorXd atb = Eigen::VectorXd::Zero(static_cast<int>(nbasis));
  std::vector<double> phi(nbasis);
  for (std::size_t dof = 0; dof < g.dof_count(); ++dof) {
    const int node = g.node_of_dof(static_cast<int>(dof));
    basis(g.node_point(node), phi);
    const double u = field.at_node(node);
    for (std::size_t i = 0; i < nbasis; ++i) {
      atb[static_cast<int>(i)] += phi[i] * u;
      for (std::size_t j = 0; j < nbasis; ++j) {
        ata(static_cast<int>(i), static_cast<int>(j)) += phi[i] * phi[j];
      }
    }
  }
  const Eigen::VectorXd coef = ata.colPivHouseholderQr().solve(atb);

  QuadraticFit fit;
  fit.constant = coef[0];
  fit.linear.assign(static_cast<std::size_t>(dim), 0.0);
  for (int a = 0; a < dim; ++a) fit.linear[static_cast<std::size_t>(a)] = coef[1 + a];
  fit.hessian = SymMatrix(static_cast<std::size_t>(dim));
  {
    int m = 1 + dim;
    for (int a = 0; a < dim; ++a) {
      for (int b = a; b < dim; ++b) {
        fit.hessian.set(static_cast<std::size_t>(a), static_cast<std::size_t>(b), coef[m++]);
      }
    }
  }

  double dev = 0.0;
  for (std::size_t dof = 0; dof < g.dof_count(); ++dof) {
    SymMatrix diff = hessian_fd(field, static_cast<int>(dof));
    for (int a = 0; a < dim; ++a) {
      for (int b = a; b < dim; ++b) {
        diff.set(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                 diff(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) -
                     fit.hessian(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
      }
    }
    dev = std::max(dev, spectral_norm(diff));
  }
  fit.deviation = dev;
  return fit;
}

}  // namespace hesslab
