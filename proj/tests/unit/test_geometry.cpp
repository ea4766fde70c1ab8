#include "pndg/errors.hpp"
#include "pndg/geometry.hpp"

#include <doctest.h>

using namespace pndg;

TEST_CASE("1D periodic mesh") {
  const auto mesh = build_mesh(1, {4});
  CHECK(mesh.num_elements() == 4);
  CHECK(mesh.num_faces() == 4);
  CHECK(mesh.h() == doctest::Approx(0.25));
  CHECK(mesh.neighbor(3, 1) == FaceRef{0, 0});
  CHECK(mesh.neighbor(0, 0) == FaceRef{3, 1});
  CHECK(mesh.origin(2)[0] == doctest::Approx(0.5));
  // Face i is the upper face of cell i.
  for (int e = 0; e < 4; ++e) {
    CHECK(mesh.face(mesh.face_index(e, 1)).left == e);
    CHECK(mesh.face(mesh.face_index(e, 1)).right == (e + 1) % 4);
  }
}

TEST_CASE("single periodic cell is its own neighbor") {
  const auto mesh = build_mesh(1, {1});
  CHECK(mesh.num_elements() == 1);
  CHECK(mesh.num_faces() == 1);
  CHECK(mesh.neighbor(0, 0) == FaceRef{0, 1});
  CHECK(mesh.neighbor(0, 1) == FaceRef{0, 0});
}

TEST_CASE("2D periodic mesh") {
  const auto mesh = build_mesh(2, {3, 2});
  CHECK(mesh.num_elements() == 6);
  CHECK(mesh.num_faces() == 12);
  CHECK(mesh.element_volume() == doctest::Approx(1.0 / 6.0));
  const int e21 = mesh.element_at({2, 1});
  CHECK(e21 == 5);
  CHECK(mesh.coords(e21) == std::array<int, 2>{2, 1});
  CHECK(mesh.neighbor(e21, 1) == FaceRef{mesh.element_at({0, 1}), 0});
  CHECK(mesh.neighbor(mesh.element_at({1, 1}), 3) == FaceRef{mesh.element_at({1, 0}), 2});
  for (const auto& f : mesh.faces()) CHECK(f.measure == doctest::Approx(f.axis == 0 ? 0.5 : 1.0 / 3.0));
}

TEST_CASE("neighbor is an involution and faces are shared") {
  for (const auto& [dim, cells] : {std::pair{1, std::vector<int>{7}}, std::pair{2, std::vector<int>{5, 3}},
                                   std::pair{2, std::vector<int>{1, 4}}}) {
    const auto mesh = build_mesh(dim, cells);
    for (int e = 0; e < mesh.num_elements(); ++e) {
      for (int lf = 0; lf < 2 * dim; ++lf) {
        const FaceRef n = mesh.neighbor(e, lf);
        CHECK(n.local_face == (lf ^ 1));
        CHECK(mesh.neighbor(n.element, n.local_face) == FaceRef{e, lf});
        CHECK(mesh.face_index(e, lf) == mesh.face_index(n.element, n.local_face));
      }
    }
  }
}

TEST_CASE("mesh input validation") {
  CHECK_THROWS_AS(build_mesh(3, {2, 2, 2}), InputError);
  CHECK_THROWS_AS(build_mesh(1, {0}), InputError);
  CHECK_THROWS_AS(build_mesh(2, {4}), InputError);
}
