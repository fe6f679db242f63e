#ifndef NAVSTACK_GLOBAL_PLANNER_HPP
#define NAVSTACK_GLOBAL_PLANNER_HPP

#include <vector>

#include "navstack/costmap.hpp"
#include "navstack/geometry.hpp"

namespace navstack {

struct GlobalPath {
    std::vector<Vec2> waypoints;  // world frame, consecutive 8-neighbour cell centers
    double total_cost = 0.0;
};

// Dijkstra over the 8-connected grid. Each move costs (1 or sqrt(2)) times
// the traversal cost of the entered cell; ties between frontier nodes break
// on the row-major cell index. Throws InvalidEndpoint when start or goal is
// outside the map or impassable, UnreachableGoal when no path exists.
GlobalPath plan(const Costmap& map, const PlannerCostParams& p, const Vec2& start,
                const Vec2& goal);

// Furthest-along-path waypoint within window_radius of the pose; falls back
// to the nearest waypoint when nothing is inside the window.
Vec2 prune_to_window(const GlobalPath& path, const Pose2D& pose, double window_radius);

}  // namespace navstack

#endif
