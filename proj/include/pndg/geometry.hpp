#pragma once

#include <array>
#include <vector>

namespace pndg {

/// A face shared by two cells of a periodic grid. `left` is the cell on the
/// lower side along `axis`, so the face normal seen from `left` is +e_axis.
struct Face {
  int left = 0;
  int right = 0;
  int axis = 0;
  double measure = 1.0;
};

/// Local faces are numbered 2*axis (lower side) and 2*axis + 1 (upper side).
struct FaceRef {
  int element = 0;
  int local_face = 0;
  friend bool operator==(const FaceRef&, const FaceRef&) = default;
};

/// Uniform periodic partition of (0,1)^d, d in {1, 2}. Cells are numbered
/// lexicographically with the first axis fastest; faces are numbered
/// axis-major, each identified by its lower cell.
class PeriodicCartesianMesh {
 public:
  PeriodicCartesianMesh(int dim, std::vector<int> cells_per_axis);

  int dim() const { return dim_; }
  int num_elements() const { return num_elements_; }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  const std::vector<int>& cells_per_axis() const { return cells_; }
  double width(int axis) const { return 1.0 / cells_[axis]; }
  /// Largest cell width.
  double h() const;
  double element_volume() const;

  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int index) const { return faces_[index]; }

  std::array<int, 2> coords(int element) const;
  int element_at(std::array<int, 2> coords) const;
  /// Lower corner of the cell.
  std::array<double, 2> origin(int element) const;

  /// Cell across the given local face, and that cell's matching local face.
  FaceRef neighbor(int element, int local_face) const;
  /// Global face index behind a local face.
  int face_index(int element, int local_face) const;

 private:
  int dim_;
  std::vector<int> cells_;
  int num_elements_;
  std::vector<Face> faces_;
};

PeriodicCartesianMesh build_mesh(int dim, const std::vector<int>& cells_per_axis);

}  // namespace pndg
