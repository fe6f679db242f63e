#ifndef NAVSTACK_TEB_HPP
#define NAVSTACK_TEB_HPP

#include <optional>
#include <utility>
#include <vector>

#include "navstack/geometry.hpp"
#include "navstack/global_planner.hpp"
#include "navstack/vehicle_model.hpp"

namespace navstack {

// Trajectory as a sequence of poses plus the time spent on each segment.
struct ElasticBand {
    std::vector<Pose2D> nodes;
    std::vector<double> dts;  // dts.size() == nodes.size() - 1, all > 0
    bool fixed_first = true;
    bool fixed_last = true;

    double total_time() const;
};

struct TebConfig {
    double weight_time = 1.0;
    double weight_vel = 10.0;
    double weight_acc = 2.0;
    double weight_turn_radius = 10.0;
    double weight_obstacle = 100.0;
    double weight_kinematics = 50.0;
    double min_obstacle_dist = 0.3;  // m, from pose point to circle edge
    double dt_ref = 0.3;             // s, resize target
    double dt_hysteresis = 0.1;      // s
    int max_iterations = 40;
    int n_alternatives = 3;  // incumbent plus detour candidates

    // Throws ConfigError: weights >= 0, dt_ref > dt_hysteresis > 0,
    // max_iterations >= 1, n_alternatives >= 1, min_obstacle_dist > 0.
    void validate() const;
};

// Record of the accepted line-search steps of one optimize() call:
// (objective before, objective after) per step, each pair non-increasing.
struct OptimizeTrace {
    std::vector<std::pair<double, double>> steps;
    int n_insertions = 0;
    int n_removals = 0;
};

// Band sampled along the global path between pose and goal at arc spacing
// dt_ref * v_max, segment times seeded at segment_length / v_max. A
// zero-length path degenerates to two coincident nodes with dt = dt_ref.
ElasticBand seed_band(const Pose2D& pose, const Pose2D& goal, const GlobalPath& global_path,
                      const TebConfig& cfg, const VehicleParams& params);

// Weighted sum of the squared exterior penalties:
//   time        weight_time * sum(dt)
//   velocity    per segment, pen(|v| - v_max)^2, v = chord length / dt
//   accel       per segment pair, pen(|a| - a_max)^2
//   turning     per segment, pen(R_min - r)^2, r = chord / |heading change|
//   obstacles   per node, pen(min_obstacle_dist - clearance)^2
//   kinematics  per segment, angle(travel direction, mean heading)^2
// with pen(x) = max(0, x).
double band_objective(const ElasticBand& band, const std::vector<Circle>& obstacles,
                      const TebConfig& cfg, const VehicleParams& params);

// Central finite-difference gradient of band_objective over the free
// variables, ordered [x, y, theta per interior node..., dts...].
std::vector<double> band_gradient(const ElasticBand& band, const std::vector<Circle>& obstacles,
                                  const TebConfig& cfg, const VehicleParams& params,
                                  double h = 1e-5);

// Gradient descent with backtracking line search on the free variables,
// interleaved with resizing (split a segment when dt > dt_ref + hysteresis,
// merge when dt < dt_ref - hysteresis). Endpoints stay fixed. Stops on
// max_iterations, a failed line search, or relative improvement < 1e-6.
// Throws OptimizationDiverged when the objective turns non-finite.
ElasticBand optimize(ElasticBand band, const std::vector<Circle>& obstacles,
                     const TebConfig& cfg, const VehicleParams& params,
                     OptimizeTrace* trace = nullptr);

// Keeps an incumbent band across ticks and races it against freshly seeded
// alternatives that detour left/right around the nearest blocking obstacle.
// The incumbent only changes when a candidate beats it strictly; among
// equal candidates the earlier one (left before right) wins.
class TebPlanner {
public:
    TebPlanner(TebConfig cfg, VehicleParams params);

    // Optimizes the candidate set and emits the first-segment command of the
    // best feasible band, v = chord/dt clamped to [0, v_max] and gamma from
    // the segment curvature clamped to gamma_max. Returns the stop command
    // and drops the incumbent when every candidate is infeasible.
    ControlCommand plan_step(const VehicleState& state, const Pose2D& interim_goal,
                             const GlobalPath& global_path,
                             const std::vector<Circle>& obstacles);

    const std::optional<ElasticBand>& incumbent() const { return incumbent_; }
    void reset() { incumbent_.reset(); }

private:
    TebConfig cfg_;
    VehicleParams params_;
    std::optional<ElasticBand> incumbent_;
};

}  // namespace navstack

#endif
