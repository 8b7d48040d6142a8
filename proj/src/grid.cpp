#include "aclab/grid.hpp"

#include <cmath>
#include <string>

#include "aclab/error.hpp"

namespace aclab {

namespace {
constexpr std::size_t kPadding = 3;  // boundary layer + two stencil layers
}

std::shared_ptr<const Grid> Grid::make(int dim, double h, double r_max) {
  if (dim != 2 && dim != 3) throw InvalidArgument("grid dimension must be 2 or 3");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("grid spacing must be positive");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw InvalidArgument("grid radius must be positive");
  const double half_nodes = std::ceil(r_max / h - 1e-9);
  if (half_nodes > 4096 || (dim == 3 && half_nodes > 400))
    throw InvalidArgument("grid too large: R_max / h = " + std::to_string(r_max / h));

  std::shared_ptr<Grid> g(new Grid());
  g->dim_ = dim;
  g->h_ = h;
  g->r_max_ = r_max;
  const std::size_t half = static_cast<std::size_t>(half_nodes) + kPadding;
  g->axis_size_ = 2 * half + 1;
  g->center_ = static_cast<double>(half);
  g->strides_ = {1, g->axis_size_, dim == 3 ? g->axis_size_ * g->axis_size_ : 0};
  g->node_count_ = 1;
  for (int d = 0; d < dim; ++d) g->node_count_ *= g->axis_size_;
  g->cell_volume_ = std::pow(h, dim);

  const std::size_t total = g->node_count_;
  g->kinds_.assign(total, NodeKind::Exterior);
  const double limit2 = r_max * r_max * (1.0 + 1e-12);
  for (std::size_t i = 0; i < total; ++i) {
    const Point p = g->point(i);
    const double r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    if (r2 <= limit2) g->kinds_[i] = NodeKind::Interior;
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (g->kinds_[i] != NodeKind::Interior) continue;
    const auto ijk = g->multi_index(i);
    for (int d = 0; d < dim; ++d) {
      if (ijk[d] < 2 || ijk[d] + 2 >= g->axis_size_)
        throw MaskConstructionError("interior node " + std::to_string(i) + " lacks a stencil neighbor");
      for (std::size_t nb : {i - g->strides_[d], i + g->strides_[d]})
        if (g->kinds_[nb] == NodeKind::Exterior) g->kinds_[nb] = NodeKind::Boundary;
    }
  }

  g->interior_mask_.assign(total, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    if (g->kinds_[i] == NodeKind::Interior) {
      g->interior_mask_[i] = 1.0;
      g->interior_nodes_.push_back(i);
    } else if (g->kinds_[i] == NodeKind::Boundary) {
      g->boundary_nodes_.push_back(i);
    }
  }
  for (int d = 0; d < dim; ++d) {
    auto& w = g->edge_weights_[d];
    w.assign(total, 0.0);
    const std::size_t s = g->strides_[d];
    for (std::size_t i = 0; i + s < total; ++i)
      if (g->kinds_[i] == NodeKind::Interior || g->kinds_[i + s] == NodeKind::Interior) w[i] = 1.0;
  }
  return g;
}

std::array<std::size_t, 3> Grid::multi_index(std::size_t node) const noexcept {
  std::array<std::size_t, 3> ijk{0, 0, 0};
  ijk[0] = node % axis_size_;
  node /= axis_size_;
  ijk[1] = node % axis_size_;
  if (dim_ == 3) ijk[2] = node / axis_size_;
  return ijk;
}

std::size_t Grid::index(const std::array<std::size_t, 3>& ijk) const noexcept {
  return ijk[0] + strides_[1] * ijk[1] + (dim_ == 3 ? strides_[2] * ijk[2] : 0);
}

Point Grid::point(std::size_t node) const noexcept {
  const auto ijk = multi_index(node);
  Point p{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d) p[d] = coordinate(ijk[d]);
  return p;
}

double Grid::radius(std::size_t node) const noexcept {
  const Point p = point(node);
  return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}

bool Grid::on_array_face(std::size_t node) const noexcept {
  const auto ijk = multi_index(node);
  for (int d = 0; d < dim_; ++d)
    if (ijk[d] == 0 || ijk[d] + 1 == axis_size_) return true;
  return false;
}

VectorField::VectorField(GridPtr grid, int m, double fill) : grid_(std::move(grid)), m_(m) {
  if (!grid_) throw InvalidArgument("field needs a grid");
  if (m < 1) throw InvalidArgument("field needs at least one component");
  data_.assign(static_cast<std::size_t>(m) * grid_->node_count(), fill);
}

void VectorField::get(std::size_t node, double* out) const noexcept {
  for (int c = 0; c < m_; ++c) out[c] = data_[plane(c) + node];
}

void VectorField::set(std::size_t node, const double* values) noexcept {
  for (int c = 0; c < m_; ++c) data_[plane(c) + node] = values[c];
}

std::vector<const double*> VectorField::planes() const {
  std::vector<const double*> p(m_);
  for (int c = 0; c < m_; ++c) p[c] = data_.data() + plane(c);
  return p;
}

std::vector<double*> VectorField::planes() {
  std::vector<double*> p(m_);
  for (int c = 0; c < m_; ++c) p[c] = data_.data() + plane(c);
  return p;
}

ScalarField::ScalarField(GridPtr grid, double fill) : grid_(std::move(grid)) {
  if (!grid_) throw InvalidArgument("field needs a grid");
  values_.assign(grid_->node_count(), fill);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("field needs a grid");
  if (values_.size() != grid_->node_count()) throw InvalidArgument("scalar field size does not match its grid");
}

}  // namespace aclab
