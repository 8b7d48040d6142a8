#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace aclab {

enum class NodeKind : std::uint8_t { Exterior = 0, Interior = 1, Boundary = 2 };

// Spatial point; coordinates beyond the grid dimension are zero.
using Point = std::array<double, 3>;

// Cube grid [-L, L]^n with spacing h, the origin on a node, masked to the
// ball B_{R_max}. Interior nodes satisfy |x| <= R_max; boundary nodes are the
// exterior nodes with an interior axis neighbor (where Dirichlet data live).
// Two further layers of padding keep every stencil read inside the array.
class Grid {
 public:
  static std::shared_ptr<const Grid> make(int dim, double h, double r_max);

  int dim() const noexcept { return dim_; }
  double h() const noexcept { return h_; }
  double r_max() const noexcept { return r_max_; }
  std::size_t axis_size() const noexcept { return axis_size_; }
  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t stride(int axis) const noexcept { return strides_[axis]; }
  const std::size_t* strides() const noexcept { return strides_.data(); }
  double cell_volume() const noexcept { return cell_volume_; }

  double coordinate(std::size_t j) const noexcept { return (static_cast<double>(j) - center_) * h_; }
  std::array<std::size_t, 3> multi_index(std::size_t node) const noexcept;
  std::size_t index(const std::array<std::size_t, 3>& ijk) const noexcept;
  Point point(std::size_t node) const noexcept;
  double radius(std::size_t node) const noexcept;

  NodeKind kind(std::size_t node) const noexcept { return kinds_[node]; }
  std::span<const NodeKind> kinds() const noexcept { return kinds_; }
  // 1.0 on interior nodes, 0.0 elsewhere.
  std::span<const double> interior_mask() const noexcept { return interior_mask_; }
  // Weight of the edge (i, i + stride(axis)): 1.0 when either end is interior.
  std::span<const double> edge_weights(int axis) const noexcept { return edge_weights_[axis]; }
  std::span<const std::size_t> interior_nodes() const noexcept { return interior_nodes_; }
  std::span<const std::size_t> boundary_nodes() const noexcept { return boundary_nodes_; }

  // Flat range whose axis neighbors all lie inside the array.
  std::size_t stencil_begin() const noexcept { return strides_[dim_ - 1]; }
  std::size_t stencil_end() const noexcept { return node_count_ - strides_[dim_ - 1]; }
  // True when the node sits on a face of the array cube.
  bool on_array_face(std::size_t node) const noexcept;

 private:
  Grid() = default;

  int dim_ = 2;
  double h_ = 0.0;
  double r_max_ = 0.0;
  std::size_t axis_size_ = 0;
  std::size_t node_count_ = 0;
  double center_ = 0.0;
  double cell_volume_ = 0.0;
  std::array<std::size_t, 3> strides_{1, 0, 0};
  std::vector<NodeKind> kinds_;
  std::vector<double> interior_mask_;
  std::array<std::vector<double>, 3> edge_weights_;
  std::vector<std::size_t> interior_nodes_;
  std::vector<std::size_t> boundary_nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

// m-component field stored component-major (one contiguous plane per
// component). Values exist on every array node; solvers only write interior
// nodes, so boundary values act as pinned Dirichlet data.
class VectorField {
 public:
  VectorField(GridPtr grid, int m, double fill = 0.0);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  int m() const noexcept { return m_; }
  std::size_t node_count() const noexcept { return grid_->node_count(); }

  std::span<double> component(int c) noexcept { return {data_.data() + plane(c), grid_->node_count()}; }
  std::span<const double> component(int c) const noexcept { return {data_.data() + plane(c), grid_->node_count()}; }
  double& at(std::size_t node, int c) noexcept { return data_[plane(c) + node]; }
  double at(std::size_t node, int c) const noexcept { return data_[plane(c) + node]; }
  void get(std::size_t node, double* out) const noexcept;
  void set(std::size_t node, const double* values) noexcept;

  // Per-component plane pointers, for the batch potential evaluators.
  std::vector<const double*> planes() const;
  std::vector<double*> planes();

  std::vector<double>& raw() noexcept { return data_; }
  const std::vector<double>& raw() const noexcept { return data_; }

 private:
  std::size_t plane(int c) const noexcept { return static_cast<std::size_t>(c) * grid_->node_count(); }

  GridPtr grid_;
  int m_;
  std::vector<double> data_;
};

class ScalarField {
 public:
  explicit ScalarField(GridPtr grid, double fill = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t node) noexcept { return values_[node]; }
  double operator[](std::size_t node) const noexcept { return values_[node]; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

}  // namespace aclab
