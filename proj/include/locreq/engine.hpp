#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "locreq/axes.hpp"
#include "locreq/error.hpp"
#include "locreq/spatial.hpp"
#include "locreq/uncertainty.hpp"

namespace locreq {

enum class LocalizationType { absolute, relative };

inline std::string_view localization_type_name(LocalizationType t) {
    return t == LocalizationType::absolute ? "absolute" : "relative";
}

// Declarative description of one localization function: which entity must
// be detected inside which space, with what confidence, and how it moves.
struct LocalizationFunctionSpec {
    std::string name;
    std::string entity;
    LocalizationType localization_type = LocalizationType::absolute;
    DofMask dof;
    AxisSpace interest_space;
    AxisSpace motion_space;
    MarginVector safety_margin;  // over dof axes
    StaticBasis reference_basis = StaticBasis::ground_truth;
    ConfidenceLevel confidence;
    VelocityBound max_velocity;
    bool realtime_required = false;
    RigidTransform transform_L_to_I;

    void validate() const {
        if (dof.empty()) fail(Errc::config, "function.dof: at least one axis required");
        if (safety_margin.axes() != dof)
            fail(Errc::config, "function.safety_margin: must cover exactly the dof axes");
        for (Axis a : dof.axes()) {
            const std::string name_str{axis_name(a)};
            if (!interest_space.defines(a))
                fail(Errc::config, "function.interest_space." + name_str + ": missing interval");
            if (!motion_space.defines(a))
                fail(Errc::config, "function.motion_space." + name_str + ": missing interval");
            const AxisInterval& iv = interest_space.interval(a);
            const AxisInterval& mv = motion_space.interval(a);
            if (mv.lo < iv.lo || mv.hi > iv.hi)
                fail(Errc::containment, "function.motion_space." + name_str +
                                            ": not contained in interest_space." + name_str);
            if (!std::isfinite(safety_margin[a]))
                fail(Errc::config, "function.safety_margin." + name_str + ": must be finite");
        }
    }
};

// Result of the derivation pipeline: the geometric margin and the error
// budgets the system's percentiles must fit into.
struct DataRequirements {
    MarginVector requirement_margin;
    MarginVector accuracy_budget_at_interest_frame;
    std::optional<MarginVector> accuracy_budget_at_device_frame;
    double time_gap_s = 0.0;  // effective values the budgets were solved with
    double latency_s = 0.0;
    ConfidenceLevel confidence;
    StaticBasis basis = StaticBasis::ground_truth;
};

// Outcome of comparing a requirement margin against an uncertainty space.
struct Verdict {
    bool feasible = false;
    DofMask axes;
    std::array<double, 4> slack{};  // signed, R - U per axis
    Axis binding_axis = Axis::x;    // axis with minimum slack (ties: x, y, z, yaw)

    double slack_at(Axis a) const {
        if (!axes.contains(a))
            fail(Errc::missing_axis, std::string("verdict does not carry axis '") +
                                         std::string(axis_name(a)) + "'");
        return slack[axis_index(a)];
    }
};

// Elementwise R >= U test with per-axis slack.
inline Verdict check_feasible(const MarginVector& r, const MarginVector& u) {
    if (r.axes() != u.axes())
        fail(Errc::axis_mismatch, "check_feasible: axis sets differ ('" + r.axes().to_string() +
                                      "' vs '" + u.axes().to_string() + "')");
    Verdict v;
    v.axes = r.axes();
    bool first = true;
    double min_slack = 0.0;
    for (Axis a : v.axes.axes()) {
        double s = r[a] - u[a];
        // Exactly-saturating budgets are a meaningful boundary case; snap
        // float residue to a true zero so they read as zero slack.
        if (std::fabs(s) < 1e-12) s = 0.0;
        v.slack[axis_index(a)] = s;
        if (first || s < min_slack) {
            min_slack = s;
            v.binding_axis = a;
            first = false;
        }
    }
    v.feasible = min_slack >= 0.0;
    return v;
}

// Solves the budget inequality for the static percentile term:
// budget = R - v * t_gap - v * t_delay, per axis.
inline MarginVector solve_accuracy_budget(const MarginVector& r, const VelocityBound& v,
                                          double t_gap_s, double t_delay_s) {
    if (std::isnan(t_gap_s) || t_gap_s < 0.0 || std::isnan(t_delay_s) || t_delay_s < 0.0)
        fail(Errc::domain, "solve_accuracy_budget: time gap and delay must be nonnegative");
    std::array<double, 4> out{};
    for (Axis a : r.axes().axes()) {
        const double dynamic = v.at(a) * t_gap_s + v.at(a) * t_delay_s;
        const double budget = r[a] - dynamic;
        if (budget < 0.0)
            fail(Errc::infeasible_timing,
                 std::string("axis '") + std::string(axis_name(a)) +
                     "': motion over the time gap and latency alone exceeds the requirement "
                     "margin");
        out[axis_index(a)] = budget;
    }
    return MarginVector(r.axes(), out);
}

// Converts an interest-frame budget into a device-frame one by removing
// the lever-arm share of the heading error from the horizontal axes.
inline MarginVector deflate_to_device_frame(const MarginVector& budget, const RigidTransform& t,
                                            double yaw_percentile) {
    if (std::isnan(yaw_percentile) || yaw_percentile < 0.0)
        fail(Errc::domain, "deflate_to_device_frame: yaw percentile must be nonnegative");
    const double chord = lever_arm_chord(t.planar_arm(), yaw_percentile);
    std::array<double, 4> out{};
    for (Axis a : budget.axes().axes()) {
        double v = budget[a];
        if (a == Axis::x || a == Axis::y) {
            v -= chord;
            if (v < 0.0)
                fail(Errc::budget_exhausted,
                     std::string("axis '") + std::string(axis_name(a)) +
                         "': lever arm and heading error consume the translational budget");
        }
        out[axis_index(a)] = v;
    }
    return MarginVector(budget.axes(), out);
}

// One grid point of the time-gap trade-off. Axes whose dynamic terms
// exceed the margin hold no value and are reported as infeasible.
struct TradeoffColumn {
    double t_gap_s = 0.0;
    std::array<std::optional<double>, 4> budget{};
};

struct TradeoffTable {
    DofMask axes;
    std::vector<TradeoffColumn> columns;
};

inline TradeoffTable tabulate_tradeoff(const MarginVector& r, const VelocityBound& v,
                                       const std::vector<double>& t_gap_grid, double t_delay_s) {
    if (std::isnan(t_delay_s) || t_delay_s < 0.0)
        fail(Errc::domain, "tabulate_tradeoff: time delay must be nonnegative");
    double prev = -1.0;
    for (double g : t_gap_grid) {
        if (std::isnan(g) || g < 0.0 || g <= prev)
            fail(Errc::domain, "tabulate_tradeoff: grid must be nonnegative, strictly increasing");
        prev = g;
    }
    TradeoffTable table;
    table.axes = r.axes();
    table.columns.reserve(t_gap_grid.size());
    for (double t_gap : t_gap_grid) {
        TradeoffColumn col;
        col.t_gap_s = t_gap;
        for (Axis a : r.axes().axes()) {
            const double budget = r[a] - v.at(a) * (t_gap + t_delay_s);
            if (budget >= 0.0) col.budget[axis_index(a)] = budget;
        }
        table.columns.push_back(col);
    }
    return table;
}

namespace detail {

template <typename Fn>
auto with_step_label(const char* step, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), std::string("step ") + step + ": " + e.what());
    }
}

}  // namespace detail

// The end-to-end derivation: requirement margin (B), time margins from the
// update model and latency (C), and the accuracy budget (D), with an
// optional device-frame deflation when a lever arm is present and the
// heading budget is available.
inline DataRequirements derive_requirements(const LocalizationFunctionSpec& spec,
                                            const UpdateModel& update, double latency_s) {
    spec.validate();
    if (std::isnan(latency_s) || latency_s < 0.0)
        fail(Errc::domain, "derive_requirements: latency must be nonnegative");

    const MarginVector margin = detail::with_step_label("B", [&] {
        return requirement_margin(spec.interest_space, spec.motion_space, spec.safety_margin,
                                  spec.dof);
    });

    const double t_gap = update.time_gap_s();
    const double t_delay = spec.realtime_required ? latency_s : 0.0;

    const MarginVector budget = detail::with_step_label(
        "D", [&] { return solve_accuracy_budget(margin, spec.max_velocity, t_gap, t_delay); });

    std::optional<MarginVector> device;
    if (!spec.transform_L_to_I.is_identity() && spec.dof.contains(Axis::yaw)) {
        // The derived heading budget bounds the device heading error, so it
        // also bounds the lever-arm share that must be deducted.
        device = detail::with_step_label("D", [&] {
            return deflate_to_device_frame(budget, spec.transform_L_to_I, budget[Axis::yaw]);
        });
    }

    return DataRequirements{margin, budget, device, t_gap, t_delay, spec.confidence,
                            spec.reference_basis};
}

// Full uncertainty breakdown for one candidate system against one spec.
struct IlsAssessment {
    std::string ils_name;
    MarginVector requirement;     // over dof
    MarginVector static_unc;      // over dof
    MarginVector gap_margin;      // over dof
    MarginVector delay_margin;    // over dof
    MarginVector uncertainty;     // over dof
    Verdict verdict;
};

inline IlsAssessment assess_ils(const LocalizationFunctionSpec& spec, const IlsSpec& ils) {
    spec.validate();
    const ErrorPercentiles& p = ils.percentiles_for(spec.reference_basis);
    // Quoting at higher confidence than required is conservative and
    // accepted; lower confidence cannot be rescaled without distribution
    // assumptions and is rejected.
    if (p.confidence.retention() + 1e-12 < spec.confidence.retention())
        fail(Errc::confidence_mismatch,
             "ils '" + ils.name + "': percentiles quoted at lower confidence than required");

    const MarginVector margin = detail::with_step_label("B", [&] {
        return requirement_margin(spec.interest_space, spec.motion_space, spec.safety_margin,
                                  spec.dof);
    });
    const MarginVector u_static = static_uncertainty(p, spec.transform_L_to_I);
    const MarginVector gap = time_gap_margin(spec.max_velocity, ils.update);
    const MarginVector delay =
        time_delay_margin(spec.max_velocity, ils.latency_s, spec.realtime_required);
    const MarginVector total = uncertainty_space(u_static, gap, delay).restricted(spec.dof);

    IlsAssessment a{ils.name,
                    margin,
                    u_static.restricted(spec.dof),
                    gap.restricted(spec.dof),
                    delay.restricted(spec.dof),
                    total,
                    check_feasible(margin, total)};
    return a;
}

// Suitability proof for a candidate system: R >= U with the system's own
// percentiles, update model, and latency.
inline Verdict check_ils(const LocalizationFunctionSpec& spec, const IlsSpec& ils) {
    return assess_ils(spec, ils).verdict;
}

}  // namespace locreq
