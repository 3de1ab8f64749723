#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "locreq/engine.hpp"
#include "locreq/error.hpp"
#include "locreq/normal.hpp"
#include "locreq/rng.hpp"
#include "locreq/spatial.hpp"
#include "locreq/uncertainty.hpp"

namespace locreq {

// z such that a standard normal lands in [-z, z] with the given mass.
inline double two_sided_z(double confidence) {
    if (std::isnan(confidence) || confidence <= 0.0 || confidence >= 1.0)
        fail(Errc::domain, "two_sided_z: confidence must lie strictly inside (0, 1)");
    return norm_quantile(0.5 * (1.0 + confidence));
}

// Standard deviation such that |error| <= percentile_value with
// probability exactly `confidence` for zero-mean Gaussian noise.
inline double calibrate_sigma(double percentile_value, double confidence) {
    if (std::isnan(percentile_value) || percentile_value < 0.0)
        fail(Errc::domain, "calibrate_sigma: percentile value must be nonnegative");
    return percentile_value / two_sided_z(confidence);
}

struct Waypoint {
    double t = 0.0;  // seconds
    Pose pose;
};

// Piecewise-linear motion of the device frame. Heading interpolates along
// the shortest arc.
class Trajectory {
public:
    explicit Trajectory(std::vector<Waypoint> waypoints) : wp_(std::move(waypoints)) {
        if (wp_.empty()) fail(Errc::domain, "trajectory: at least one waypoint required");
        for (std::size_t i = 1; i < wp_.size(); ++i)
            if (!(wp_[i].t > wp_[i - 1].t))
                fail(Errc::domain, "trajectory: waypoint times must be strictly increasing");
    }

    double start_time() const { return wp_.front().t; }
    double end_time() const { return wp_.back().t; }
    const std::vector<Waypoint>& waypoints() const { return wp_; }

    // Throws if any segment implies a per-axis speed above the bound.
    void enforce_speed_bound(const VelocityBound& v) const {
        constexpr double tol = 1e-9;
        for (std::size_t i = 1; i < wp_.size(); ++i) {
            const double dt = wp_[i].t - wp_[i - 1].t;
            const Pose& a = wp_[i - 1].pose;
            const Pose& b = wp_[i].pose;
            const std::array<double, 4> step{b.x - a.x, b.y - a.y, b.z - a.z,
                                             shortest_yaw_delta(a.yaw, b.yaw)};
            for (Axis ax : kAxisOrder) {
                if (std::fabs(step[axis_index(ax)]) > dt * (v.at(ax) + tol) + tol)
                    fail(Errc::domain, std::string("trajectory: segment ") + std::to_string(i) +
                                           " exceeds the velocity bound on axis '" +
                                           std::string(axis_name(ax)) + "'");
            }
        }
    }

    Pose pose_at(double t) const {
        if (std::isnan(t) || t < wp_.front().t || t > wp_.back().t)
            fail(Errc::out_of_range, "trajectory: time " + std::to_string(t) +
                                         " outside [" + std::to_string(wp_.front().t) + ", " +
                                         std::to_string(wp_.back().t) + "]");
        // Exact waypoint hits return the stored pose bit-for-bit.
        const auto it = std::lower_bound(
            wp_.begin(), wp_.end(), t,
            [](const Waypoint& w, double when) { return w.t < when; });
        if (it == wp_.end()) return wp_.back().pose;
        const Waypoint& b = *it;
        if (b.t == t) return b.pose;
        const Waypoint& a = *(it - 1);
        if (a.t == t) return a.pose;
        const double u = (t - a.t) / (b.t - a.t);
        return Pose{a.pose.x + u * (b.pose.x - a.pose.x), a.pose.y + u * (b.pose.y - a.pose.y),
                    a.pose.z + u * (b.pose.z - a.pose.z),
                    normalize_yaw(a.pose.yaw + u * shortest_yaw_delta(a.pose.yaw, b.pose.yaw))};
    }

private:
    std::vector<Waypoint> wp_;
};

inline Pose pose_at(const Trajectory& trajectory, double t) { return trajectory.pose_at(t); }

// Zero-mean Gaussian measurement noise, independent per axis and update.
struct NoiseModel {
    double x = 0.0;    // sigma, meters
    double y = 0.0;    // sigma, meters
    double z = 0.0;    // sigma, meters
    double yaw = 0.0;  // sigma, radians

    NoiseModel() = default;

    NoiseModel(double x_, double y_, double z_, double yaw_) : x(x_), y(y_), z(z_), yaw(yaw_) {
        for (double s : {x, y, z, yaw})
            if (std::isnan(s) || std::isinf(s) || s < 0.0)
                fail(Errc::domain, "noise model: sigmas must be finite and nonnegative");
    }

    double at(Axis a) const {
        switch (a) {
            case Axis::x: return x;
            case Axis::y: return y;
            case Axis::z: return z;
            case Axis::yaw: return yaw;
        }
        return 0.0;
    }
};

struct SimConfig {
    LocalizationFunctionSpec function;
    NoiseModel noise;
    UpdateModel update;  // periodic only
    double latency_s = 0.0;
    Trajectory trajectory;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;

    void validate() const {
        function.validate();
        if (update.kind() != UpdateModel::Kind::periodic)
            fail(Errc::config, "simulation: only the periodic update model is supported");
        if (std::isnan(latency_s) || latency_s < 0.0)
            fail(Errc::config, "simulation: latency must be nonnegative");
        if (trials < 1) fail(Errc::config, "simulation: at least one trial required");
        trajectory.enforce_speed_bound(function.max_velocity);
    }
};

// Empirical false-event statistics. A false outside on an axis means the
// estimate fell outside the interest interval while the truth, at
// classification time, was inside the motion space.
struct SimReport {
    std::uint64_t updates_total = 0;       // simulated update instants
    std::uint64_t updates_classified = 0;  // truth inside the motion space when classified
    DofMask axes;
    std::array<std::uint64_t, 4> false_outside_count{};
    std::array<double, 4> false_outside_rate{};
    std::uint64_t false_outside_joint_count = 0;
    double false_outside_joint = 0.0;
    double confidence_target = 0.0;
    std::array<double, 4> standard_error{};  // binomial SE at the target rate
    double union_bound = 0.0;                // dof count * (1 - C), context only
    bool pass = false;

    double rate_at(Axis a) const { return false_outside_rate[axis_index(a)]; }
    double se_at(Axis a) const { return standard_error[axis_index(a)]; }
    double bound_at(Axis a) const { return (1.0 - confidence_target) + 3.0 * se_at(a); }

    friend bool operator==(const SimReport&, const SimReport&) = default;
};

// Runs the measurement/classification loop.
//
// Per trial, noise comes from stream `trial` of the seeded generator, one
// draw per axis per update in the fixed order x, y, z, yaw. At each update
// instant t_k = k/rate the device-frame estimate is the true device pose
// plus noise; it is transformed to the interest frame and classified
// against the interest space when it becomes available at t_k + latency.
// Truth is evaluated at that availability time; updates whose truth lies
// outside the motion space do not count toward the rate denominators.
// Identical configs produce identical reports; trial streams are
// independent of execution order.
inline SimReport run_simulation(const SimConfig& cfg) {
    cfg.validate();

    const double t_gap = cfg.update.time_gap_s();
    const double t0 = cfg.trajectory.start_time();
    const double t_end = cfg.trajectory.end_time();
    constexpr double time_eps = 1e-9;

    // Update clock is absolute: t_k = k * t_gap, restricted to instants
    // whose measurement and availability times both lie on the trajectory.
    std::uint64_t k_first = 0;
    if (t0 > 0.0) {
        const double kf = std::ceil((t0 - time_eps) / t_gap);
        k_first = kf <= 0.0 ? 0 : static_cast<std::uint64_t>(kf);
    }
    while (static_cast<double>(k_first) * t_gap < t0) ++k_first;

    std::vector<double> measure_times;
    for (std::uint64_t k = k_first;; ++k) {
        const double t_meas = static_cast<double>(k) * t_gap;
        if (t_meas + cfg.latency_s > t_end + time_eps) break;
        measure_times.push_back(std::min(t_meas, t_end));
    }

    const DofMask& dof = cfg.function.dof;
    const RigidTransform& t_li = cfg.function.transform_L_to_I;
    const double retention = cfg.function.confidence.retention();

    SimReport report;
    report.axes = dof;
    report.confidence_target = retention;
    report.union_bound = std::min(1.0, static_cast<double>(dof.count()) * (1.0 - retention));

    for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
        Xoshiro256pp rng = Xoshiro256pp::for_stream(cfg.seed, trial);
        for (double t_meas : measure_times) {
            // One draw per axis per update, fixed order: the stream layout
            // is part of the reproducibility contract.
            const double eps_x = rng.gaussian(cfg.noise.x);
            const double eps_y = rng.gaussian(cfg.noise.y);
            const double eps_z = rng.gaussian(cfg.noise.z);
            const double eps_w = rng.gaussian(cfg.noise.yaw);

            const Pose truth_device = cfg.trajectory.pose_at(t_meas);
            const Pose estimate_device{truth_device.x + eps_x, truth_device.y + eps_y,
                                       truth_device.z + eps_z,
                                       normalize_yaw(truth_device.yaw + eps_w)};
            const Pose estimate = transform_pose(t_li, estimate_device);

            const double t_avail = std::min(t_meas + cfg.latency_s, t_end);
            const Pose truth = transform_pose(t_li, cfg.trajectory.pose_at(t_avail));

            ++report.updates_total;
            if (!contains(cfg.function.motion_space, truth, dof)) continue;
            ++report.updates_classified;

            bool any_outside = false;
            for (Axis a : dof.axes()) {
                const AxisInterval& iv = cfg.function.interest_space.interval(a);
                if (!iv.contains(estimate.coord(a))) {
                    ++report.false_outside_count[axis_index(a)];
                    any_outside = true;
                }
            }
            if (any_outside) ++report.false_outside_joint_count;
        }
    }

    const double n = static_cast<double>(report.updates_classified);
    const double p0 = 1.0 - retention;
    report.pass = true;
    for (Axis a : dof.axes()) {
        const std::size_t i = axis_index(a);
        report.false_outside_rate[i] = n > 0.0 ? report.false_outside_count[i] / n : 0.0;
        report.standard_error[i] = n > 0.0 ? std::sqrt(p0 * retention / n) : 0.0;
        if (report.false_outside_rate[i] > p0 + 3.0 * report.standard_error[i])
            report.pass = false;
    }
    report.false_outside_joint = n > 0.0 ? report.false_outside_joint_count / n : 0.0;
    return report;
}

namespace detail {

struct BindingSide {
    double bound = 0.0;  // motion-space bound the truth touches
    double sign = 1.0;   // -1: excursions go below the bound, +1: above
};

// Picks the side with the smaller interest/motion gap (ties: lower side).
inline BindingSide binding_side(const AxisInterval& interest, const AxisInterval& motion) {
    const double gap_lo = side_gap(interest.lo, motion.lo, true);
    const double gap_hi = side_gap(interest.hi, motion.hi, false);
    if (std::isinf(gap_lo) && std::isinf(gap_hi)) {
        // No bounded side: the axis cannot produce false-outside events;
        // park the truth anywhere inside the motion interval.
        const double anchor = std::isfinite(motion.lo) ? motion.lo
                              : std::isfinite(motion.hi) ? motion.hi
                                                         : 0.0;
        return BindingSide{anchor, 0.0};
    }
    return gap_lo <= gap_hi ? BindingSide{motion.lo, -1.0} : BindingSide{motion.hi, 1.0};
}

}  // namespace detail

// Adversarial device-frame trajectory for the boundary experiment.
//
// Per axis, the interest-frame truth runs a triangle wave of period
// 2 * t_gap at the axis speed bound: it touches the binding motion-space
// bound exactly at every even classification instant k * t_gap +
// classify_offset and excursions beyond the bound (toward the interest
// boundary) in between, so the odd instants are excluded from the rate
// denominators. With classify_offset = t_gap the measurement feeding each
// counted classification was taken a full time gap earlier, at exactly
// the solved budget distance from the interest boundary.
inline Trajectory make_worst_case_trajectory(const LocalizationFunctionSpec& spec, double t_gap_s,
                                             double classify_offset_s,
                                             std::size_t updates_per_trial) {
    if (!(t_gap_s > 0.0) || classify_offset_s < 0.0 || updates_per_trial < 1)
        fail(Errc::domain, "worst-case trajectory: invalid timing parameters");

    struct AxisWave {
        detail::BindingSide side;
        double speed = 0.0;
        double inward = 0.0;
    };
    // Nudge touch points a hair inside the motion space when the frames
    // differ: the estimate path re-applies the transform, and a 1-ulp
    // round-trip error must not tip boundary poses into exclusion. Pinned
    // (zero-width) intervals get no nudge.
    const bool identity = spec.transform_L_to_I.is_identity();
    std::array<AxisWave, 4> waves{};
    for (Axis a : spec.dof.axes()) {
        const AxisInterval& motion = spec.motion_space.interval(a);
        AxisWave w{detail::binding_side(spec.interest_space.interval(a), motion),
                   spec.max_velocity.at(a), 0.0};
        if (w.side.sign == 0.0) w.speed = 0.0;  // no bounded side to exercise
        if (!identity && std::isfinite(motion.width()))
            w.inward = std::min(1e-9, motion.width() / 2.0);
        waves[axis_index(a)] = w;
    }

    const double t_end = static_cast<double>(updates_per_trial - 1) * t_gap_s + classify_offset_s;

    // Wave vertices live at m * t_gap + classify_offset, sharing the float
    // expression of the classification instants so exact waypoint lookups
    // land on the touch poses. Depth comes from the vertex index, not the
    // float time: even vertices touch (depth 0), odd ones are troughs.
    std::vector<std::pair<double, double>> vertices;  // (time, depth in seconds)
    std::int64_t m = static_cast<std::int64_t>(std::floor(-classify_offset_s / t_gap_s)) - 1;
    for (;; ++m) {
        const double t = static_cast<double>(m) * t_gap_s + classify_offset_s;
        if (t < 0.0) continue;
        if (t > t_end + 1e-12) break;
        vertices.emplace_back(t, (m % 2 == 0) ? 0.0 : t_gap_s);
    }
    // Closed-form depth for the synthetic endpoints off the vertex grid.
    auto depth_at = [&](double t) {
        double s = std::fmod(t - classify_offset_s, 2.0 * t_gap_s);
        if (s < 0.0) s += 2.0 * t_gap_s;
        return std::min(s, 2.0 * t_gap_s - s);
    };
    if (vertices.empty() || vertices.front().first != 0.0)
        vertices.insert(vertices.begin(), {0.0, depth_at(0.0)});
    if (vertices.back().first != t_end) vertices.emplace_back(t_end, depth_at(t_end));

    const RigidTransform to_device = spec.transform_L_to_I.inverse();
    std::vector<Waypoint> waypoints;
    waypoints.reserve(vertices.size());
    for (const auto& [t, depth] : vertices) {
        std::array<double, 4> coord{};
        for (Axis a : spec.dof.axes()) {
            const AxisWave& w = waves[axis_index(a)];
            coord[axis_index(a)] = w.side.bound + w.side.sign * (w.speed * depth - w.inward);
        }
        const Pose interest_pose{coord[0], coord[1], coord[2],
                                 spec.dof.contains(Axis::yaw) ? coord[3] : 0.0};
        waypoints.push_back(Waypoint{t, transform_pose(to_device, interest_pose)});
    }
    return Trajectory(std::move(waypoints));
}

// Builds the full boundary-experiment configuration: noise calibrated to
// the given budgets at the function's confidence level, and classification
// delayed by t_gap + t_delay so each estimate is judged at its last moment
// of use, just before the next update becomes available.
inline SimConfig make_worst_case_config(const LocalizationFunctionSpec& spec,
                                        const UpdateModel& update, double latency_s,
                                        const MarginVector& ils_budget, std::uint64_t trials,
                                        std::uint64_t seed,
                                        std::size_t updates_per_trial = 200) {
    spec.validate();
    if (update.kind() != UpdateModel::Kind::periodic)
        fail(Errc::config, "worst-case experiment: requires a periodic update model");
    if (ils_budget.axes() != spec.dof)
        fail(Errc::axis_mismatch, "worst-case experiment: budget axes must equal the dof axes");

    const double t_gap = update.time_gap_s();
    const double t_delay = spec.realtime_required ? latency_s : 0.0;

    // Feasibility gate: the function must admit a nonnegative budget.
    const MarginVector margin =
        requirement_margin(spec.interest_space, spec.motion_space, spec.safety_margin, spec.dof);
    (void)solve_accuracy_budget(margin, spec.max_velocity, t_gap, t_delay);

    const double retention = spec.confidence.retention();
    std::array<double, 4> sigma{};
    for (Axis a : spec.dof.axes()) {
        const double b = ils_budget[a];
        sigma[axis_index(a)] = std::isfinite(b) ? calibrate_sigma(b, retention) : 0.0;
    }

    SimConfig cfg{spec,
                  NoiseModel{sigma[0], sigma[1], sigma[2], sigma[3]},
                  update,
                  t_gap + t_delay,
                  make_worst_case_trajectory(spec, t_gap, t_gap + t_delay, updates_per_trial),
                  trials,
                  seed};
    return cfg;
}

// Empirical verification that budgets solved from the margin inequality
// keep the per-axis false-outside rate at or below 1 - C, under boundary
// motion at the speed bound with worst-phase update alignment.
inline SimReport worst_case_experiment(const LocalizationFunctionSpec& spec,
                                       const UpdateModel& update, double latency_s,
                                       const MarginVector& ils_budget, std::uint64_t trials,
                                       std::uint64_t seed) {
    return run_simulation(
        make_worst_case_config(spec, update, latency_s, ils_budget, trials, seed));
}

}  // namespace locreq
