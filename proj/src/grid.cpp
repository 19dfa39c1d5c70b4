#include "hesslab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hesslab/errors.hpp"

namespace hesslab {

namespace {
constexpr int kMaxNodesPerAxis2D = 257;
constexpr int kMaxNodesPerAxis3D = 65;
constexpr int kMinIntervalsPerAxis = 9;  // >= 8 interior nodes per axis
constexpr double kMinTheta = 1e-9;
}  // namespace

DomainSpec DomainSpec::box(int dim, const Point& lo, const Point& hi) {
  if (dim != 2 && dim != 3) throw invalid_input("DomainSpec: dim must be 2 or 3");
  for (int a = 0; a < dim; ++a) {
    if (!(hi[a] > lo[a])) throw invalid_input("DomainSpec: box needs positive extents");
  }
  DomainSpec d;
  d.shape = Shape::Box;
  d.dim = dim;
  d.lo = lo;
  d.hi = hi;
  return d;
}

DomainSpec DomainSpec::ball(int dim, const Point& center, double radius) {
  if (dim != 2 && dim != 3) throw invalid_input("DomainSpec: dim must be 2 or 3");
  if (!(radius > 0.0)) throw invalid_input("DomainSpec: ball needs positive radius");
  DomainSpec d;
  d.shape = Shape::Ball;
  d.dim = dim;
  d.center = center;
  d.radius = radius;
  return d;
}

double DomainSpec::diameter() const {
  if (shape == Shape::Ball) return 2.0 * radius;
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += (hi[a] - lo[a]) * (hi[a] - lo[a]);
  return std::sqrt(s);
}

Point DomainSpec::centroid() const {
  if (shape == Shape::Ball) return center;
  Point c{0, 0, 0};
  for (int a = 0; a < dim; ++a) c[a] = 0.5 * (lo[a] + hi[a]);
  return c;
}

double DomainSpec::level_set(const Point& x) const {
  if (shape == Shape::Ball) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += (x[a] - center[a]) * (x[a] - center[a]);
    return std::sqrt(s) - radius;
  }
  double m = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim; ++a) {
    m = std::max(m, std::max(lo[a] - x[a], x[a] - hi[a]));
  }
  return m;
}

std::string DomainSpec::name() const {
  std::ostringstream os;
  if (shape == Shape::Ball) {
    os << "ball(dim=" << dim << ",r=" << radius << ")";
  } else {
    os << "box(dim=" << dim << ")";
  }
  return os.str();
}

int GridGeometry::node_index(int i, int j, int k) const {
  return (i * nn_[1] + j) * nn_[2] + k;
}

Point GridGeometry::node_point(int node) const {
  const int k = node % nn_[2];
  const int j = (node / nn_[2]) % nn_[1];
  const int i = node / (nn_[1] * nn_[2]);
  Point p{origin_[0] + i * h_[0], origin_[1] + j * h_[1], 0.0};
  if (domain_.dim == 3) p[2] = origin_[2] + k * h_[2];
  return p;
}

std::string GridGeometry::node_location_string(int node) const {
  const Point p = node_point(node);
  std::ostringstream os;
  os << "(" << p[0] << ", " << p[1];
  if (dim() == 3) os << ", " << p[2];
  os << ")";
  return os.str();
}

std::array<int, 2> GridGeometry::pair_axes(int pair) const {
  if (dim() == 2) return {0, 1};
  static constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
  return kPairs[static_cast<std::size_t>(pair)];
}

namespace {

// Root in (0, 1] of the quadratic interpolant of phi through t = -1, 0, 1
// (phi0 < 0 <= phi1). Falls back to the linear secant root when the
// interpolant misbehaves.
double cut_fraction(bool has_phim, double phim, double phi0, double phi1) {
  const double linear = phi0 / (phi0 - phi1);
  if (!has_phim) return std::clamp(linear, kMinTheta, 1.0);
  const double a = 0.5 * (phi1 - 2.0 * phi0 + phim);
  const double b = 0.5 * (phi1 - phim);
  const double c = phi0;
  double root = linear;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (std::abs(a) > 1e-14 * scale) {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double r1 = (-b + sq) / (2.0 * a);
      const double r2 = (-b - sq) / (2.0 * a);
      double best = std::numeric_limits<double>::quiet_NaN();
      for (double r : {r1, r2}) {
        if (r > 0.0 && r <= 1.0 + 1e-12) {
          if (std::isnan(best) || std::abs(r - linear) < std::abs(best - linear)) best = r;
        }
      }
      if (!std::isnan(best)) root = best;
    }
  } else if (std::abs(b) > 0.0) {
    const double r = -c / b;
    if (r > 0.0 && r <= 1.0 + 1e-12) root = r;
  }
  return std::clamp(root, kMinTheta, 1.0);
}

}  // namespace

std::shared_ptr<const GridGeometry> GridGeometry::make(const DomainSpec& domain, double h) {
  if (!(h > 0.0)) throw invalid_input("GridGeometry: need h > 0");
  auto geom = std::shared_ptr<GridGeometry>(new GridGeometry());
  GridGeometry& g = *geom;
  g.domain_ = domain;
  const int dim = domain.dim;

  Point lo = domain.lo, hi = domain.hi;
  if (domain.shape == DomainSpec::Shape::Ball) {
    for (int a = 0; a < dim; ++a) {
      lo[a] = domain.center[a] - domain.radius;
      hi[a] = domain.center[a] + domain.radius;
    }
  }
  const int cap = (dim == 2) ? kMaxNodesPerAxis2D : kMaxNodesPerAxis3D;
  g.nn_ = {1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    const double extent = hi[a] - lo[a];
    const int intervals = static_cast<int>(std::lround(extent / h));
    if (intervals < kMinIntervalsPerAxis) {
      throw invalid_input("GridGeometry: grid does not resolve the domain");
    }
    if (intervals + 1 > cap) {
      throw invalid_input("GridGeometry: grid exceeds per-axis node cap (" +
                          std::to_string(cap) + ")");
    }
    g.nn_[a] = intervals + 1;
    g.h_[a] = extent / intervals;
    g.origin_[a] = lo[a];
  }

  // Stencil line directions (index offsets).
  g.nlines_ = dim + 2 * (dim == 2 ? 1 : 3);
  int ln = 0;
  for (int a = 0; a < dim; ++a) {
    std::array<int, 3> d{0, 0, 0};
    d[a] = 1;
    g.line_dir_[ln++] = d;
  }
  const int npairs = (dim == 2) ? 1 : 3;
  for (int pr = 0; pr < npairs; ++pr) {
    const auto ab = (dim == 2) ? std::array<int, 2>{0, 1}
                               : std::array<std::array<int, 2>, 3>{{{0, 1}, {0, 2}, {1, 2}}}[pr];
    std::array<int, 3> dplus{0, 0, 0}, dminus{0, 0, 0};
    dplus[ab[0]] = 1;
    dplus[ab[1]] = 1;
    dminus[ab[0]] = 1;
    dminus[ab[1]] = -1;
    g.line_dir_[ln++] = dplus;
    g.line_dir_[ln++] = dminus;
  }

  const std::size_t total = static_cast<std::size_t>(g.nn_[0]) * g.nn_[1] * g.nn_[2];
  g.cls_.assign(total, NodeClass::Exterior);
  g.dof_of_node_.assign(total, -1);

  auto classify = [&](int i, int j, int k) {
    const int node = g.node_index(i, j, k);
    if (domain.shape == DomainSpec::Shape::Box) {
      bool on_face = (i == 0 || i == g.nn_[0] - 1 || j == 0 || j == g.nn_[1] - 1);
      if (dim == 3) on_face = on_face || (k == 0 || k == g.nn_[2] - 1);
      g.cls_[static_cast<std::size_t>(node)] =
          on_face ? NodeClass::Boundary : NodeClass::Interior;
    } else {
      const Point p = g.node_point(node);
      g.cls_[static_cast<std::size_t>(node)] =
          domain.level_set(p) < 0.0 ? NodeClass::Interior : NodeClass::Exterior;
    }
  };
  for (int i = 0; i < g.nn_[0]; ++i) {
    for (int j = 0; j < g.nn_[1]; ++j) {
      for (int k = 0; k < g.nn_[2]; ++k) classify(i, j, k);
    }
  }

  for (std::size_t node = 0; node < total; ++node) {
    if (g.cls_[node] == NodeClass::Interior) {
      g.dof_of_node_[node] = static_cast<int>(g.node_of_dof_.size());
      g.node_of_dof_.push_back(static_cast<int>(node));
    }
  }
  if (g.node_of_dof_.empty()) throw invalid_input("GridGeometry: no interior nodes");

  // Arms. For each interior node and each line, both sides. Any side whose
  // neighbor is exterior becomes a cut arm with theta from the interpolated
  // level-set root along the line.
  g.arms_.assign(g.node_of_dof_.size() * static_cast<std::size_t>(g.nlines_) * 2, Arm{});
  auto in_bounds = [&](int i, int j, int k) {
    return i >= 0 && i < g.nn_[0] && j >= 0 && j < g.nn_[1] && k >= 0 && k < g.nn_[2];
  };

  for (std::size_t dof = 0; dof < g.node_of_dof_.size(); ++dof) {
    const int node = g.node_of_dof_[dof];
    const int k0 = node % g.nn_[2];
    const int j0 = (node / g.nn_[2]) % g.nn_[1];
    const int i0 = node / (g.nn_[1] * g.nn_[2]);
    const Point p0 = g.node_point(node);
    const double phi0 = domain.level_set(p0);

    for (int line = 0; line < g.nlines_; ++line) {
      const auto& d = g.line_dir_[line];
      for (int side = 0; side < 2; ++side) {
        const int sgn = (side == 0) ? 1 : -1;
        const int i1 = i0 + sgn * d[0], j1 = j0 + sgn * d[1], k1 = k0 + sgn * d[2];
        Arm arm;
        if (!in_bounds(i1, j1, k1)) {
          throw invalid_input("GridGeometry: interior node touching grid edge");
        }
        const int nb = g.node_index(i1, j1, k1);
        if (g.cls_[static_cast<std::size_t>(nb)] != NodeClass::Exterior) {
          arm.node = nb;
          arm.theta = 1.0;
        } else {
          const Point p1 = g.node_point(nb);
          const double phi1 = domain.level_set(p1);
          // Third sample on the opposite side of the node (always in bounds
          // for interior nodes of a ball grid).
          const int im = i0 - sgn * d[0], jm = j0 - sgn * d[1], km = k0 - sgn * d[2];
          const bool has_phim = in_bounds(im, jm, km);
          const double phim =
              has_phim ? domain.level_set(g.node_point(g.node_index(im, jm, km))) : 0.0;
          const double theta = cut_fraction(has_phim, phim, phi0, phi1);
          Point pc = p0;
          for (int a = 0; a < 3; ++a) pc[a] += theta * (p1[a] - p0[a]);
          arm.cut = static_cast<int>(g.cut_points_.size());
          arm.theta = theta;
          g.cut_points_.push_back(pc);
        }
        g.arms_[(dof * static_cast<std::size_t>(g.nlines_) + static_cast<std::size_t>(line)) * 2 +
                static_cast<std::size_t>(side)] = arm;
      }
    }
  }
  return geom;
}

GridField::GridField(std::shared_ptr<const GridGeometry> geom)
    : geom_(std::move(geom)),
      node_values_(geom_->node_count(), 0.0),
      cut_values_(geom_->cut_count(), 0.0) {}

GridField GridField::sampled(std::shared_ptr<const GridGeometry> geom,
                             const std::function<double(const Point&)>& f) {
  GridField field(geom);
  const GridGeometry& g = *geom;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    if (g.node_class(static_cast<int>(node)) != NodeClass::Exterior) {
      field.node_values_[node] = f(g.node_point(static_cast<int>(node)));
    }
  }
  for (std::size_t c = 0; c < g.cut_count(); ++c) {
    field.cut_values_[c] = f(g.cut_point(static_cast<int>(c)));
  }
  return field;
}

void GridField::zero_boundary() {
  const GridGeometry& g = *geom_;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    if (g.node_class(static_cast<int>(node)) == NodeClass::Boundary) {
      node_values_[node] = 0.0;
    }
  }
  std::fill(cut_values_.begin(), cut_values_.end(), 0.0);
}

namespace {

// Second difference along one line in step units: exact on quadratics for
// any arm lengths.
inline double second_diff(const GridField& f, double u0, const Arm& plus, const Arm& minus) {
  const double tp = plus.theta, tm = minus.theta;
  const double up = f.arm_value(plus), um = f.arm_value(minus);
  return 2.0 * (up / (tp * (tp + tm)) - u0 / (tp * tm) + um / (tm * (tp + tm)));
}

inline double first_diff(const GridField& f, double u0, const Arm& plus, const Arm& minus) {
  const double tp = plus.theta, tm = minus.theta;
  const double up = f.arm_value(plus), um = f.arm_value(minus);
  return (tm * tm * up - tp * tp * um + (tp * tp - tm * tm) * u0) / (tp * tm * (tp + tm));
}

}  // namespace

SymMatrix hessian_fd(const GridField& field, int dof) {
  const GridGeometry& g = field.geom();
  const int dim = g.dim();
  const int node = g.node_of_dof(dof);
  const double u0 = field.at_node(node);
  const auto& h = g.spacing();
  SymMatrix out(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    const double d2 = second_diff(field, u0, g.arm(dof, g.axis_line(a), 0),
                                  g.arm(dof, g.axis_line(a), 1));
    out.set(static_cast<std::size_t>(a), static_cast<std::size_t>(a), d2 / (h[a] * h[a]));
  }
  for (int pr = 0; pr < g.pair_count(); ++pr) {
    const auto ab = g.pair_axes(pr);
    const double dp = second_diff(field, u0, g.arm(dof, g.diag_plus_line(pr), 0),
                                  g.arm(dof, g.diag_plus_line(pr), 1));
    const double dm = second_diff(field, u0, g.arm(dof, g.diag_minus_line(pr), 0),
                                  g.arm(dof, g.diag_minus_line(pr), 1));
    out.set(static_cast<std::size_t>(ab[0]), static_cast<std::size_t>(ab[1]),
            (dp - dm) / (4.0 * h[ab[0]] * h[ab[1]]));
  }
  return out;
}

std::vector<double> gradient_fd(const GridField& field, int dof) {
  const GridGeometry& g = field.geom();
  const int dim = g.dim();
  const int node = g.node_of_dof(dof);
  const double u0 = field.at_node(node);
  const auto& h = g.spacing();
  std::vector<double> grad(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    const double d1 = first_diff(field, u0, g.arm(dof, g.axis_line(a), 0),
                                 g.arm(dof, g.axis_line(a), 1));
    grad[static_cast<std::size_t>(a)] = d1 / h[a];
  }
  return grad;
}

SymMatrix hessian_fd_at_node(const GridField& field, int node) {
  const int dof = field.geom().dof_of_node(node);
  if (dof < 0) {
    throw invalid_input("hessian_fd: node " + field.geom().node_location_string(node) +
                        " is not interior");
  }
  return hessian_fd(field, dof);
}

std::vector<double> gradient_fd_at_node(const GridField& field, int node) {
  const int dof = field.geom().dof_of_node(node);
  if (dof < 0) {
    throw invalid_input("gradient_fd: node " + field.geom().node_location_string(node) +
                        " is not interior");
  }
  return gradient_fd(field, dof);
}

}  // namespace hesslab
