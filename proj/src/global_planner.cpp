#include "navstack/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "navstack/errors.hpp"

namespace navstack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kDiag = std::sqrt(2.0);

struct Move {
    int dx, dy;
    bool diagonal;
};
const Move kMoves[8] = {{1, 0, false},  {-1, 0, false}, {0, 1, false},  {0, -1, false},
                        {1, 1, true},   {1, -1, true},  {-1, 1, true},  {-1, -1, true}};

// Path cost held as exact components (step counts and integer cell-cost
// sums) so equal-cost paths tie exactly and ties survive rescaling of the
// cost params. Evaluated cost = neutral*n + factor*sum, diagonals at sqrt(2).
struct PathCost {
    std::int32_t n_axial = 0;
    std::int32_t n_diag = 0;
    double cell_sum_axial = 0.0;
    double cell_sum_diag = 0.0;

    double eval(const PlannerCostParams& p) const {
        return p.neutral_cost * n_axial + p.cost_factor * cell_sum_axial +
               kDiag * (p.neutral_cost * n_diag + p.cost_factor * cell_sum_diag);
    }
    PathCost stepped(bool diagonal, std::uint8_t cell_cost) const {
        PathCost out = *this;
        if (diagonal) {
            out.n_diag += 1;
            out.cell_sum_diag += cell_cost;
        } else {
            out.n_axial += 1;
            out.cell_sum_axial += cell_cost;
        }
        return out;
    }
};
}  // namespace

GlobalPath plan(const Costmap& map, const PlannerCostParams& p, const Vec2& start,
                const Vec2& goal) {
    int sx, sy, gx, gy;
    if (!map.world_to_cell(start, sx, sy)) throw InvalidEndpoint("start outside map");
    if (!map.world_to_cell(goal, gx, gy)) throw InvalidEndpoint("goal outside map");
    if (traversal_cost(map, sx, sy, p) == kInf) throw InvalidEndpoint("start cell impassable");
    if (traversal_cost(map, gx, gy, p) == kInf) throw InvalidEndpoint("goal cell impassable");

    const std::size_t n_cells = map.cells().size();
    const std::size_t start_idx = map.index(sx, sy);
    const std::size_t goal_idx = map.index(gx, gy);

    std::vector<double> dist(n_cells, kInf);
    std::vector<PathCost> best(n_cells);
    std::vector<std::int32_t> parent(n_cells, -1);
    std::vector<bool> settled(n_cells, false);

    using Entry = std::pair<double, std::size_t>;  // (evaluated cost, row-major index)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    dist[start_idx] = 0.0;
    frontier.push({0.0, start_idx});

    while (!frontier.empty()) {
        const auto [cost, idx] = frontier.top();
        frontier.pop();
        if (settled[idx]) continue;
        settled[idx] = true;
        if (idx == goal_idx) break;

        const int ix = static_cast<int>(idx) % map.width();
        const int iy = static_cast<int>(idx) / map.width();
        for (const auto& mv : kMoves) {
            const int nx = ix + mv.dx, ny = iy + mv.dy;
            if (!map.in_bounds(nx, ny)) continue;
            const std::uint8_t cell = map.at(nx, ny);
            if (cell >= kCostInscribed) continue;  // impassable
            const std::size_t nidx = map.index(nx, ny);
            const PathCost stepped = best[idx].stepped(mv.diagonal, cell);
            const double candidate = stepped.eval(p);
            if (candidate < dist[nidx]) {
                dist[nidx] = candidate;
                best[nidx] = stepped;
                parent[nidx] = static_cast<std::int32_t>(idx);
                frontier.push({candidate, nidx});
            }
        }
    }

    if (dist[goal_idx] == kInf) throw UnreachableGoal("no path from start to goal");

    GlobalPath path;
    path.total_cost = dist[goal_idx];
    for (std::int32_t idx = static_cast<std::int32_t>(goal_idx); idx >= 0; idx = parent[idx]) {
        const int ix = idx % map.width();
        const int iy = idx / map.width();
        path.waypoints.push_back(map.cell_center(ix, iy));
        if (static_cast<std::size_t>(idx) == start_idx) break;
    }
    std::reverse(path.waypoints.begin(), path.waypoints.end());
    return path;
}

Vec2 prune_to_window(const GlobalPath& path, const Pose2D& pose, double window_radius) {
    if (path.waypoints.empty()) throw PlanningError("prune_to_window: empty path");
    for (auto it = path.waypoints.rbegin(); it != path.waypoints.rend(); ++it) {
        if (distance(*it, pose.position()) <= window_radius) return *it;
    }
    // nothing in the window: recover with the nearest waypoint
    const Vec2* best = &path.waypoints.front();
    double best_d = kInf;
    for (const auto& wp : path.waypoints) {
        const double d = distance(wp, pose.position());
        if (d < best_d) {
            best_d = d;
            best = &wp;
        }
    }
    return *best;
}

}  // namespace navstack
