#include "navstack/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "navstack/errors.hpp"

namespace navstack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared distance transform (Felzenszwalb & Huttenlocher lower envelope).
// Entries of f may be +inf; d gets min_j (q - j)^2 + f(j).
void dt_1d(const std::vector<double>& f, std::vector<double>& d) {
    const int n = static_cast<int>(f.size());
    d.assign(n, kInf);

    int first = 0;
    while (first < n && f[first] == kInf) ++first;
    if (first == n) return;

    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    int k = 0;
    v[0] = first;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = first + 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        double s;
        while (true) {
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) { --k; } else break;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}
}  // namespace

void InflationParams::validate() const {
    if (!(inflation_radius >= inscribed_radius) || !(inscribed_radius >= 0.0) ||
        !(cost_scaling_factor >= 0.0)) {
        throw ConfigError("inflation params: need inflation_radius >= inscribed_radius >= 0 "
                          "and cost_scaling_factor >= 0");
    }
}

void PlannerCostParams::validate() const {
    if (!(neutral_cost >= 1.0) || !(cost_factor >= 0.0)) {
        throw ConfigError("planner cost params: need neutral_cost >= 1 and cost_factor >= 0");
    }
}

Costmap::Costmap(double resolution, int width, int height, const Pose2D& origin,
                 std::uint8_t fill)
    : resolution_(resolution), width_(width), height_(height), origin_(origin),
      cells_(static_cast<std::size_t>(width) * height, fill) {
    if (resolution <= 0.0 || width <= 0 || height <= 0) {
        throw ConfigError("costmap needs positive resolution and dimensions");
    }
}

bool Costmap::world_to_cell(const Vec2& world, int& ix, int& iy) const {
    ix = static_cast<int>(std::lround((world.x - origin_.x) / resolution_));
    iy = static_cast<int>(std::lround((world.y - origin_.y) / resolution_));
    return in_bounds(ix, iy);
}

void mark_obstacles(Costmap& map, const std::vector<Circle>& obstacles) {
    const double res = map.resolution();
    for (const auto& ob : obstacles) {
        int cx, cy;
        map.world_to_cell(ob.center, cx, cy);  // may be out of bounds, loop clips
        const int span = static_cast<int>(std::ceil(ob.radius / res)) + 1;
        for (int iy = cy - span; iy <= cy + span; ++iy) {
            for (int ix = cx - span; ix <= cx + span; ++ix) {
                if (!map.in_bounds(ix, iy)) continue;
                if (ob.contains(map.cell_center(ix, iy))) map.set(ix, iy, kCostLethal);
            }
        }
    }
}

std::vector<double> distance_field(const Costmap& map) {
    const int w = map.width(), h = map.height();
    std::vector<double> sq(static_cast<std::size_t>(w) * h);
    for (int iy = 0; iy < h; ++iy) {
        for (int ix = 0; ix < w; ++ix) {
            sq[map.index(ix, iy)] = (map.at(ix, iy) == kCostLethal) ? 0.0 : kInf;
        }
    }

    // columns, then rows, in squared cell units
    std::vector<double> f, d;
    f.resize(h);
    for (int ix = 0; ix < w; ++ix) {
        for (int iy = 0; iy < h; ++iy) f[iy] = sq[map.index(ix, iy)];
        dt_1d(f, d);
        for (int iy = 0; iy < h; ++iy) sq[map.index(ix, iy)] = d[iy];
    }
    f.resize(w);
    for (int iy = 0; iy < h; ++iy) {
        for (int ix = 0; ix < w; ++ix) f[ix] = sq[map.index(ix, iy)];
        dt_1d(f, d);
        for (int ix = 0; ix < w; ++ix) sq[map.index(ix, iy)] = d[ix];
    }

    for (auto& s : sq) s = (s == kInf) ? kInf : std::sqrt(s) * map.resolution();
    return sq;
}

void inflate(Costmap& map, const InflationParams& p) {
    p.validate();
    const std::vector<double> dist = distance_field(map);
    for (int iy = 0; iy < map.height(); ++iy) {
        for (int ix = 0; ix < map.width(); ++ix) {
            const std::uint8_t prior = map.at(ix, iy);
            if (prior == kCostLethal || prior == kCostUnknown) continue;
            const double d = dist[map.index(ix, iy)];
            std::uint8_t value;
            if (d <= p.inscribed_radius) {
                value = kCostInscribed;
            } else if (d <= p.inflation_radius) {
                const double decay =
                    252.0 * std::exp(-p.cost_scaling_factor * (d - p.inscribed_radius));
                value = static_cast<std::uint8_t>(std::lround(decay));
            } else {
                continue;
            }
            map.set(ix, iy, std::max(prior, value));
        }
    }
}

double traversal_cost(const Costmap& map, int ix, int iy, const PlannerCostParams& p) {
    if (!map.in_bounds(ix, iy)) throw PlanningError("traversal_cost: cell out of bounds");
    const std::uint8_t c = map.at(ix, iy);
    if (c >= kCostInscribed) return kInf;
    return p.neutral_cost + p.cost_factor * static_cast<double>(c);
}

std::vector<double> raycast_scan(const std::vector<Circle>& obstacles, const Pose2D& pose,
                                 int n_beams, double max_range) {
    if (n_beams < 1) throw ConfigError("raycast_scan: n_beams must be >= 1");
    std::vector<double> ranges(n_beams, max_range);
    const Vec2 o = pose.position();
    for (int k = 0; k < n_beams; ++k) {
        const double angle = pose.theta + 2.0 * M_PI * k / n_beams;
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        double best = max_range;
        for (const auto& ob : obstacles) {
            const Vec2 oc = ob.center - o;
            const double b = dir.dot(oc);
            const double disc = b * b - (oc.squared_norm() - ob.radius * ob.radius);
            if (disc < 0.0) continue;
            const double root = std::sqrt(disc);
            const double t_near = b - root;
            const double t_far = b + root;
            if (t_near >= 0.0) {
                best = std::min(best, t_near);
            } else if (t_far >= 0.0) {
                best = 0.0;  // sensor inside the obstacle
            }
        }
        ranges[k] = best;
    }
    return ranges;
}

std::vector<Circle> cluster_scan(const Pose2D& pose, const std::vector<double>& ranges,
                                 double max_range, double gap_threshold, double radius_pad) {
    const int n = static_cast<int>(ranges.size());
    std::vector<Vec2> hits;
    std::vector<int> beam_of_hit;
    for (int k = 0; k < n; ++k) {
        if (ranges[k] >= max_range - 1e-9) continue;
        const double angle = pose.theta + 2.0 * M_PI * k / n;
        hits.push_back(pose.position() + Vec2{std::cos(angle), std::sin(angle)} * ranges[k]);
        beam_of_hit.push_back(k);
    }
    if (hits.empty()) return {};

    std::vector<std::vector<int>> clusters{{0}};
    for (int i = 1; i < static_cast<int>(hits.size()); ++i) {
        const bool adjacent_beam = beam_of_hit[i] - beam_of_hit[i - 1] <= 2;
        if (adjacent_beam && distance(hits[i], hits[i - 1]) <= gap_threshold) {
            clusters.back().push_back(i);
        } else {
            clusters.push_back({i});
        }
    }
    // scan wraps around: merge last into first when their boundary hits connect
    if (clusters.size() > 1) {
        const int first_hit = clusters.front().front();
        const int last_hit = clusters.back().back();
        const bool adjacent_beam = (beam_of_hit[first_hit] + n) - beam_of_hit[last_hit] <= 2;
        if (adjacent_beam && distance(hits[first_hit], hits[last_hit]) <= gap_threshold) {
            for (int idx : clusters.back()) clusters.front().push_back(idx);
            clusters.pop_back();
        }
    }

    std::vector<Circle> circles;
    circles.reserve(clusters.size());
    for (const auto& cluster : clusters) {
        Vec2 centroid{0, 0};
        for (int idx : cluster) centroid += hits[idx];
        centroid = centroid / static_cast<double>(cluster.size());
        double spread = 0.0;
        for (int idx : cluster) spread = std::max(spread, distance(centroid, hits[idx]));
        circles.push_back({centroid, spread + radius_pad});
    }
    return circles;
}

void write_pgm(const Costmap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("write_pgm: cannot open " + path);
    out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
    for (int iy = map.height() - 1; iy >= 0; --iy) {
        out.write(reinterpret_cast<const char*>(&map.cells()[map.index(0, iy)]), map.width());
    }
}

}  // namespace navstack
