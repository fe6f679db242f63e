#include "navstack/homography.hpp"

#include <cmath>

#include "navstack/errors.hpp"

namespace navstack {

Vec2 Homography::apply(const Vec2& p, double* w_out) const {
    const double x = m[0] * p.x + m[1] * p.y + m[2];
    const double y = m[3] * p.x + m[4] * p.y + m[5];
    const double w = m[6] * p.x + m[7] * p.y + m[8];
    if (w_out) *w_out = w;
    return {x / w, y / w};
}

double Homography::det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::inverse() const {
    const double d = det();
    if (std::abs(d) <= 1e-12) throw InvalidState("homography: singular, cannot invert");
    Homography inv;
    inv.m[0] = (m[4] * m[8] - m[5] * m[7]) / d;
    inv.m[1] = (m[2] * m[7] - m[1] * m[8]) / d;
    inv.m[2] = (m[1] * m[5] - m[2] * m[4]) / d;
    inv.m[3] = (m[5] * m[6] - m[3] * m[8]) / d;
    inv.m[4] = (m[0] * m[8] - m[2] * m[6]) / d;
    inv.m[5] = (m[2] * m[3] - m[0] * m[5]) / d;
    inv.m[6] = (m[3] * m[7] - m[4] * m[6]) / d;
    inv.m[7] = (m[1] * m[6] - m[0] * m[7]) / d;
    inv.m[8] = (m[0] * m[4] - m[1] * m[3]) / d;
    return inv;
}

Homography Homography::operator*(const Homography& o) const {
    Homography r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m[3 * i + k] * o.m[3 * k + j];
            r.m[3 * i + j] = s;
        }
    return r;
}

Homography homography_from_points(
    const std::array<std::pair<Vec2, Vec2>, 4>& correspondences) {
    // Rows of the DLT system A h = b with h = (h11..h32), h33 = 1.
    double a[8][9] = {};
    for (int i = 0; i < 4; ++i) {
        const Vec2& s = correspondences[i].first;
        const Vec2& d = correspondences[i].second;
        double* r0 = a[2 * i];
        double* r1 = a[2 * i + 1];
        r0[0] = s.x; r0[1] = s.y; r0[2] = 1.0;
        r0[6] = -d.x * s.x; r0[7] = -d.x * s.y; r0[8] = d.x;
        r1[3] = s.x; r1[4] = s.y; r1[5] = 1.0;
        r1[6] = -d.y * s.x; r1[7] = -d.y * s.y; r1[8] = d.y;
    }

    // Gaussian elimination with partial pivoting on the 8x9 tableau.
    for (int col = 0; col < 8; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-12)
            throw InvalidState("homography: degenerate correspondences");
        if (pivot != col)
            for (int c = 0; c < 9; ++c) std::swap(a[pivot][c], a[col][c]);
        for (int r = 0; r < 8; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
        }
    }

    Homography h;
    for (int i = 0; i < 8; ++i) h.m[i] = a[i][8] / a[i][i];
    h.m[8] = 1.0;
    return h;
}

}  // namespace navstack
