#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "locreq/axes.hpp"
#include "locreq/error.hpp"

namespace locreq {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Maps any angle into (-pi, pi].
inline double normalize_yaw(double yaw) {
    double r = std::remainder(yaw, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

// Smallest signed rotation taking `from` to `to`, in (-pi, pi].
inline double shortest_yaw_delta(double from, double to) {
    return normalize_yaw(to - from);
}

// 4-DoF location: position in meters, heading in radians (-pi, pi].
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double yaw = 0.0;

    Pose() = default;

    Pose(double x_, double y_, double z_, double yaw_) : x(x_), y(y_), z(z_), yaw(yaw_) {
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) || !std::isfinite(yaw))
            fail(Errc::domain, "pose: all components must be finite");
        yaw = normalize_yaw(yaw);
    }

    double coord(Axis a) const {
        switch (a) {
            case Axis::x: return x;
            case Axis::y: return y;
            case Axis::z: return z;
            case Axis::yaw: return yaw;
        }
        return 0.0;
    }
};

// Closed interval [lo, hi]. Translational axes may be unbounded on either
// side (+-inf); a degenerate lo == hi interval models a pinned axis.
struct AxisInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
    double width() const { return hi - lo; }
};

// Per-axis interval bounds: rectangles, cuboids, or points, with optional
// heading range. Axes not set are simply undefined for this space.
class AxisSpace {
public:
    AxisSpace() = default;

    AxisSpace& set(Axis a, double lo, double hi) {
        if (std::isnan(lo) || std::isnan(hi))
            fail(Errc::domain, std::string("space.") + std::string(axis_name(a)) + ": NaN bound");
        if (lo > hi)
            fail(Errc::domain, std::string("space.") + std::string(axis_name(a)) +
                                   ": interval has lo > hi" +
                                   (a == Axis::yaw ? " (wrap-around across +-pi is not supported)"
                                                   : ""));
        if (a == Axis::yaw) {
            if (!std::isfinite(lo) || !std::isfinite(hi))
                fail(Errc::domain, "space.yaw: bounds must be finite");
            if (lo <= -kPi || hi > kPi)
                fail(Errc::domain, "space.yaw: interval must lie within (-pi, pi]");
        }
        intervals_[axis_index(a)] = AxisInterval{lo, hi};
        return *this;
    }

    bool defines(Axis a) const { return intervals_[axis_index(a)].has_value(); }

    const AxisInterval& interval(Axis a) const {
        const auto& slot = intervals_[axis_index(a)];
        if (!slot)
            fail(Errc::missing_axis,
                 std::string("space does not define axis '") + std::string(axis_name(a)) + "'");
        return *slot;
    }

    std::optional<AxisInterval> maybe(Axis a) const { return intervals_[axis_index(a)]; }

    bool defines_all(const DofMask& dof) const {
        for (Axis a : dof.axes())
            if (!defines(a)) return false;
        return true;
    }

private:
    std::array<std::optional<AxisInterval>, 4> intervals_{};
};

// Rigid transform between the entity's device frame and the frame whose
// presence matters: planar lever arm plus heading offset.
struct RigidTransform {
    double tx = 0.0;
    double ty = 0.0;
    double tz = 0.0;
    double yaw_offset = 0.0;

    RigidTransform() = default;

    RigidTransform(double tx_, double ty_, double tz_, double yaw_offset_)
        : tx(tx_), ty(ty_), tz(tz_), yaw_offset(yaw_offset_) {
        if (!std::isfinite(tx) || !std::isfinite(ty) || !std::isfinite(tz) ||
            !std::isfinite(yaw_offset))
            fail(Errc::domain, "transform: all components must be finite");
    }

    bool is_identity() const { return tx == 0.0 && ty == 0.0 && tz == 0.0 && yaw_offset == 0.0; }

    // Planar distance of the lever arm; heading error acts on this radius.
    double planar_arm() const { return std::hypot(tx, ty); }

    RigidTransform inverse() const {
        const double c = std::cos(-yaw_offset);
        const double s = std::sin(-yaw_offset);
        return RigidTransform{-(c * tx - s * ty), -(s * tx + c * ty), -tz, -yaw_offset};
    }
};

// Applies t in the pose's own frame: planar rotation by the pose heading
// acts on (tx, ty), tz adds directly, heading offsets compose.
inline Pose transform_pose(const RigidTransform& t, const Pose& pose) {
    const double c = std::cos(pose.yaw);
    const double s = std::sin(pose.yaw);
    return Pose{pose.x + c * t.tx - s * t.ty, pose.y + s * t.tx + c * t.ty, pose.z + t.tz,
                normalize_yaw(pose.yaw + t.yaw_offset)};
}

// Worst-case translational displacement of a point at planar distance
// `radius` under a heading error of `angle`: 2 r sin(min(angle, pi)/2).
inline double lever_arm_chord(double radius, double angle) {
    if (std::isnan(radius) || std::isnan(angle) || radius < 0.0 || angle < 0.0)
        fail(Errc::domain, "lever_arm_chord: radius and angle must be nonnegative");
    const double a = std::min(angle, kPi);
    return 2.0 * radius * std::sin(a / 2.0);
}

// Nonnegative per-axis budget/margin over a fixed axis set. Translational
// components are meters, the yaw component radians. +inf is a valid
// component (an unbounded side); negative or NaN components are rejected.
class MarginVector {
public:
    MarginVector(DofMask axes, const std::array<double, 4>& components)
        : axes_(std::move(axes)), comp_{} {
        if (axes_.empty()) fail(Errc::domain, "margin vector: empty axis set");
        for (Axis a : axes_.axes()) {
            const double v = components[axis_index(a)];
            if (std::isnan(v) || v < 0.0)
                fail(Errc::negative_margin, std::string("margin vector: component '") +
                                                std::string(axis_name(a)) +
                                                "' must be nonnegative");
            comp_[axis_index(a)] = v;
        }
    }

    static MarginVector zeros(const DofMask& axes) { return MarginVector(axes, {}); }

    const DofMask& axes() const { return axes_; }

    double operator[](Axis a) const {
        if (!axes_.contains(a))
            fail(Errc::missing_axis, std::string("margin vector does not carry axis '") +
                                         std::string(axis_name(a)) + "'");
        return comp_[axis_index(a)];
    }

    MarginVector restricted(const DofMask& sub) const {
        if (!sub.subset_of(axes_))
            fail(Errc::missing_axis, "margin vector restriction: '" + sub.to_string() +
                                         "' is not a subset of '" + axes_.to_string() + "'");
        return MarginVector(sub, comp_);
    }

    friend MarginVector operator+(const MarginVector& a, const MarginVector& b) {
        if (a.axes_ != b.axes_)
            fail(Errc::axis_mismatch, "margin vector sum: axis sets differ ('" +
                                          a.axes_.to_string() + "' vs '" + b.axes_.to_string() +
                                          "')");
        std::array<double, 4> sum{};
        for (Axis ax : a.axes_.axes()) sum[axis_index(ax)] = a[ax] + b[ax];
        return MarginVector(a.axes_, sum);
    }

    friend bool operator==(const MarginVector&, const MarginVector&) = default;

private:
    DofMask axes_;
    std::array<double, 4> comp_;
};

// True iff every included axis coordinate lies within the closed interval.
inline bool contains(const AxisSpace& space, const Pose& pose, const DofMask& dof) {
    bool inside = true;
    for (Axis a : dof.axes()) {
        // interval() raises missing_axis even if an earlier axis already failed
        const AxisInterval& iv = space.interval(a);
        inside = inside && iv.contains(pose.coord(a));
    }
    return inside;
}

// Signed one-sided distance to the nearer interval bound: positive inside,
// zero on the boundary, negative outside. Unbounded sides contribute +inf.
inline double boundary_distance(const AxisSpace& space, const Pose& pose, Axis axis) {
    const AxisInterval& iv = space.interval(axis);
    const double c = pose.coord(axis);
    return std::min(c - iv.lo, iv.hi - c);
}

namespace detail {

// One-sided gap with unbounded sides treated as +inf (also when both the
// inner and outer bound are infinite on the same side).
inline double side_gap(double outer_bound, double inner_bound, bool lower_side) {
    if (std::isinf(outer_bound)) return kInf;
    return lower_side ? inner_bound - outer_bound : outer_bound - inner_bound;
}

}  // namespace detail

// Per included axis: min(M_lo - I_lo, I_hi - M_hi) - S. The motion space
// must sit inside the interest space; a negative result is an error.
inline MarginVector requirement_margin(const AxisSpace& interest, const AxisSpace& motion,
                                       const MarginVector& safety, const DofMask& dof) {
    if (safety.axes() != dof)
        fail(Errc::axis_mismatch, "requirement_margin: safety margin axes must equal dof axes");
    std::array<double, 4> out{};
    for (Axis a : dof.axes()) {
        const std::string name{axis_name(a)};
        const AxisInterval& iv = interest.interval(a);
        const AxisInterval& mv = motion.interval(a);
        if (mv.lo < iv.lo || mv.hi > iv.hi)
            fail(Errc::containment,
                 "motion_space." + name + ": not contained in interest_space." + name);
        const double s = safety[a];
        if (!std::isfinite(s))
            fail(Errc::domain, "safety_margin." + name + ": must be finite");
        const double gap_lo = detail::side_gap(iv.lo, mv.lo, true);
        const double gap_hi = detail::side_gap(iv.hi, mv.hi, false);
        const double r = std::min(gap_lo, gap_hi) - s;
        if (r < 0.0)
            fail(Errc::negative_margin, "requirement margin on axis '" + name +
                                            "' is negative (safety margin exceeds the gap)");
        out[axis_index(a)] = r;
    }
    return MarginVector(dof, out);
}

}  // namespace locreq
