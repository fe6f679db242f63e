#ifndef NAVSTACK_HOMOGRAPHY_HPP
#define NAVSTACK_HOMOGRAPHY_HPP

#include <array>
#include <utility>

#include "navstack/geometry.hpp"

namespace navstack {

// Plane projective transform, row-major 3x3, acting on homogeneous (x, y, 1).
struct Homography {
    std::array<double, 9> m = {1, 0, 0, 0, 1, 0, 0, 0, 1};

    // Maps p and divides by the homogeneous w. If w_out is given it receives
    // w before the division (its sign tells back-projections from forward
    // ones; callers rendering a ground plane use that as a horizon test).
    Vec2 apply(const Vec2& p, double* w_out = nullptr) const;

    double det() const;
    // Adjugate over determinant. Throws InvalidState when |det| <= 1e-12.
    Homography inverse() const;
    // Composition: (a * b)(p) = a(b(p)).
    Homography operator*(const Homography& o) const;
};

// Direct linear transform from exactly four src -> dst correspondences
// (8x8 Gaussian elimination with partial pivoting, h33 fixed to 1).
// Throws InvalidState when the points are degenerate (three collinear).
Homography homography_from_points(
    const std::array<std::pair<Vec2, Vec2>, 4>& correspondences);

}  // namespace navstack

#endif
