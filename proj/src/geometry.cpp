#include "pndg/geometry.hpp"

#include "pndg/errors.hpp"

#include <algorithm>
#include <string>

namespace pndg {

PeriodicCartesianMesh::PeriodicCartesianMesh(int dim, std::vector<int> cells_per_axis)
    : dim_(dim), cells_(std::move(cells_per_axis)), num_elements_(1) {
  if (dim_ != 1 && dim_ != 2) throw InputError("mesh dimension must be 1 or 2");
  if (static_cast<int>(cells_.size()) != dim_) {
    throw InputError("expected " + std::to_string(dim_) + " cell counts, got " +
                     std::to_string(cells_.size()));
  }
  for (int n : cells_) {
    if (n < 1) throw InputError("cell count per axis must be at least 1");
    num_elements_ *= n;
  }
  faces_.reserve(static_cast<std::size_t>(dim_) * num_elements_);
  for (int axis = 0; axis < dim_; ++axis) {
    double measure = 1.0;
    for (int other = 0; other < dim_; ++other) {
      if (other != axis) measure *= width(other);
    }
    for (int e = 0; e < num_elements_; ++e) {
      auto c = coords(e);
      c[axis] = (c[axis] + 1) % cells_[axis];
      faces_.push_back(Face{e, element_at(c), axis, measure});
    }
  }
}

double PeriodicCartesianMesh::h() const {
  return 1.0 / *std::min_element(cells_.begin(), cells_.end());
}

double PeriodicCartesianMesh::element_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= width(a);
  return v;
}

std::array<int, 2> PeriodicCartesianMesh::coords(int element) const {
  if (dim_ == 1) return {element, 0};
  return {element % cells_[0], element / cells_[0]};
}

int PeriodicCartesianMesh::element_at(std::array<int, 2> c) const {
  if (dim_ == 1) return c[0];
  return c[0] + cells_[0] * c[1];
}

std::array<double, 2> PeriodicCartesianMesh::origin(int element) const {
  const auto c = coords(element);
  std::array<double, 2> x{0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = c[a] * width(a);
  return x;
}

FaceRef PeriodicCartesianMesh::neighbor(int element, int local_face) const {
  if (element < 0 || element >= num_elements_ || local_face < 0 || local_face >= 2 * dim_) {
    throw InputError("neighbor: element or local face out of range");
  }
  const int axis = local_face / 2;
  const bool upper = local_face % 2 == 1;
  auto c = coords(element);
  const int n = cells_[axis];
  c[axis] = upper ? (c[axis] + 1) % n : (c[axis] + n - 1) % n;
  return {element_at(c), local_face ^ 1};
}

int PeriodicCartesianMesh::face_index(int element, int local_face) const {
  const int axis = local_face / 2;
  const bool upper = local_face % 2 == 1;
  const int lower_cell = upper ? element : neighbor(element, local_face).element;
  return axis * num_elements_ + lower_cell;
}

PeriodicCartesianMesh build_mesh(int dim, const std::vector<int>& cells_per_axis) {
  return PeriodicCartesianMesh(dim, cells_per_axis);
}

}  // namespace pndg
