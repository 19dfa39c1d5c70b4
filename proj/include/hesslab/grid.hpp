#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hesslab/spectrum.hpp"

namespace hesslab {

using Point = std::array<double, 3>;  // trailing coordinates unused below dim

struct DomainSpec {
  enum class Shape : int { Box, Ball };
  Shape shape = Shape::Box;
  int dim = 2;  // 2 or 3
  Point lo{0, 0, 0}, hi{1, 1, 1};  // Box
  Point center{0, 0, 0};           // Ball
  double radius = 1.0;

  static DomainSpec box(int dim, const Point& lo, const Point& hi);
  static DomainSpec ball(int dim, const Point& center, double radius);

  double diameter() const;   // box diagonal or 2*radius
  Point centroid() const;
  // Level-set description: negative inside, zero on the boundary. Ball:
  // |x - center| - radius. Box: max over faces of the outward distance.
  double level_set(const Point& x) const;
  bool inside(const Point& x) const { return level_set(x) < 0.0; }
  std::string name() const;
};

enum class NodeClass : std::uint8_t { Interior, Boundary, Exterior };

// One arm of a difference stencil along a fixed line direction. Either it
// reaches a grid node carrying a value (node >= 0), or it is clipped at the
// domain boundary at fraction theta of the full step, where the field's
// boundary data applies (cut >= 0 indexes into GridField::cut_values).
struct Arm {
  int node = -1;
  int cut = -1;
  double theta = 1.0;  // in (0, 1]
};

// Uniform node-centered Cartesian grid over the domain's bounding box with
// per-axis spacing ~h. Boxes put boundary nodes exactly on the faces; balls
// classify outside nodes as exterior and clip stencil arms at the boundary.
// Cut fractions come from quadratic interpolation of the sampled level-set
// along each stencil line (root of the interpolant), the usual
// embedded-boundary treatment; the geometry is consumed only through those
// node samples.
class GridGeometry {
public:
  static std::shared_ptr<const GridGeometry> make(const DomainSpec& domain, double h);

  const DomainSpec& domain() const { return domain_; }
  int dim() const { return domain_.dim; }
  const std::array<int, 3>& nodes_per_axis() const { return nn_; }
  const std::array<double, 3>& spacing() const { return h_; }
  double representative_h() const { return h_[0]; }

  std::size_t node_count() const { return cls_.size(); }
  std::size_t dof_count() const { return node_of_dof_.size(); }
  std::size_t cut_count() const { return cut_points_.size(); }

  NodeClass node_class(int node) const { return cls_[static_cast<std::size_t>(node)]; }
  int dof_of_node(int node) const { return dof_of_node_[static_cast<std::size_t>(node)]; }
  int node_of_dof(int dof) const { return node_of_dof_[static_cast<std::size_t>(dof)]; }

  Point node_point(int node) const;
  Point cut_point(int cut) const { return cut_points_[static_cast<std::size_t>(cut)]; }
  std::string node_location_string(int node) const;

  // Stencil lines: axes first (0..dim-1), then for each axis pair (a,b) in
  // lexicographic order the two diagonals a+b and a-b.
  int line_count() const { return nlines_; }
  int axis_line(int axis) const { return axis; }
  int pair_count() const { return dim() == 2 ? 1 : 3; }
  std::array<int, 2> pair_axes(int pair) const;
  int diag_plus_line(int pair) const { return dim() + 2 * pair; }
  int diag_minus_line(int pair) const { return dim() + 2 * pair + 1; }

  const Arm& arm(int dof, int line, int side) const {  // side: 0 = +, 1 = -
    return arms_[(static_cast<std::size_t>(dof) * static_cast<std::size_t>(nlines_) +
                  static_cast<std::size_t>(line)) * 2 + static_cast<std::size_t>(side)];
  }

private:
  DomainSpec domain_;
  std::array<int, 3> nn_{1, 1, 1};
  std::array<double, 3> h_{0, 0, 0};
  std::array<double, 3> origin_{0, 0, 0};
  int nlines_ = 0;
  std::array<std::array<int, 3>, 9> line_dir_{};  // index offsets per line
  std::vector<NodeClass> cls_;
  std::vector<int> dof_of_node_;
  std::vector<int> node_of_dof_;
  std::vector<Arm> arms_;
  std::vector<Point> cut_points_;

  GridGeometry() = default;
  int node_index(int i, int j, int k) const;
  friend class GridField;
};

// Grid function: one value per grid node plus one value per cut point.
// Boundary data lives in the box-face node values and the cut values; a
// Dirichlet-zero field has all of those equal to zero exactly.
class GridField {
public:
  explicit GridField(std::shared_ptr<const GridGeometry> geom);

  const GridGeometry& geom() const { return *geom_; }
  std::shared_ptr<const GridGeometry> geom_ptr() const { return geom_; }

  std::vector<double>& node_values() { return node_values_; }
  const std::vector<double>& node_values() const { return node_values_; }
  std::vector<double>& cut_values() { return cut_values_; }
  const std::vector<double>& cut_values() const { return cut_values_; }

  double at_node(int node) const { return node_values_[static_cast<std::size_t>(node)]; }

  // Samples f at every non-exterior node and every cut point.
  static GridField sampled(std::shared_ptr<const GridGeometry> geom,
                           const std::function<double(const Point&)>& f);

  // Zeroes all boundary data (box-face nodes and cut values).
  void zero_boundary();

  double arm_value(const Arm& a) const {
    return a.node >= 0 ? node_values_[static_cast<std::size_t>(a.node)]
                       : cut_values_[static_cast<std::size_t>(a.cut)];
  }

private:
  std::shared_ptr<const GridGeometry> geom_;
  std::vector<double> node_values_;
  std::vector<double> cut_values_;
};

// Discrete Hessian at an interior node (by dof id): unequal-arm second
// differences along the axes; mixed entries from the difference of the two
// diagonal second differences of the same axis pair, which reduces to the
// standard 4-point cross stencil when no arm is clipped. Exact on quadratics
// consistent with the stored boundary data.
SymMatrix hessian_fd(const GridField& field, int dof);

// Discrete gradient at an interior node (by dof id), central/unequal-arm.
std::vector<double> gradient_fd(const GridField& field, int dof);

// Hessian of a node given by global node id; throws invalid_input if the
// node is not interior.
SymMatrix hessian_fd_at_node(const GridField& field, int node);
std::vector<double> gradient_fd_at_node(const GridField& field, int node);

}  // namespace hesslab
