#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "locreq/axes.hpp"
#include "locreq/error.hpp"
#include "locreq/normal.hpp"
#include "locreq/spatial.hpp"

namespace locreq {

// Retention probability for a sigma quality level, using the long-term
// 1.5-sigma shift convention: retention = Phi(sigma - 1.5). A 4-sigma
// level therefore retains 99.38% of estimates (0.62% outside). Levels at
// or below 1.5 would retain half or less and are rejected.
inline double confidence_from_sigma(double sigma_level) {
    if (std::isnan(sigma_level) || sigma_level <= 1.5)
        fail(Errc::domain, "confidence: sigma level must exceed 1.5 under the shifted convention");
    return norm_cdf(sigma_level - 1.5);
}

// Probability that a per-axis error stays below its quoted bound,
// expressed either directly as a percentile or as a sigma quality level.
class ConfidenceLevel {
public:
    static ConfidenceLevel percentile(double p) {
        if (std::isnan(p) || p <= 0.0 || p >= 1.0)
            fail(Errc::domain, "confidence: percentile must lie strictly inside (0, 1)");
        ConfidenceLevel c;
        c.percentile_ = p;
        return c;
    }

    static ConfidenceLevel sigma(double level) {
        ConfidenceLevel c;
        c.retention_cache_ = confidence_from_sigma(level);  // validates the level
        c.sigma_ = level;
        return c;
    }

    bool is_sigma() const { return sigma_.has_value(); }
    double sigma_level() const { return sigma_.value(); }
    double percentile_value() const { return percentile_.value(); }

    double retention() const { return sigma_ ? retention_cache_ : *percentile_; }

private:
    std::optional<double> percentile_;
    std::optional<double> sigma_;
    double retention_cache_ = 0.0;
};

// Per-axis error percentiles at an attached confidence level. Values are
// meaningless without the confidence, so it travels with them.
struct ErrorPercentiles {
    double x = 0.0;    // meters
    double y = 0.0;    // meters
    double z = 0.0;    // meters
    double yaw = 0.0;  // radians
    ConfidenceLevel confidence;

    ErrorPercentiles(double x_, double y_, double z_, double yaw_, ConfidenceLevel c)
        : x(x_), y(y_), z(z_), yaw(yaw_), confidence(c) {
        for (double v : {x, y, z, yaw})
            if (std::isnan(v) || std::isinf(v) || v < 0.0)
                fail(Errc::domain, "error percentiles: components must be finite and nonnegative");
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

// Per-axis speed bound of the entity's interest frame.
struct VelocityBound {
    double x = 0.0;    // m/s
    double y = 0.0;    // m/s
    double z = 0.0;    // m/s
    double yaw = 0.0;  // rad/s

    VelocityBound() = default;

    VelocityBound(double x_, double y_, double z_, double yaw_) : x(x_), y(y_), z(z_), yaw(yaw_) {
        for (double v : {x, y, z, yaw})
            if (std::isnan(v) || std::isinf(v) || v < 0.0)
                fail(Errc::domain, "velocity bound: components must be finite and nonnegative");
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

// How location updates are delivered.
class UpdateModel {
public:
    enum class Kind { periodic, on_request, on_event };

    static UpdateModel periodic(double rate_hz) {
        if (std::isnan(rate_hz) || std::isinf(rate_hz) || rate_hz <= 0.0)
            fail(Errc::domain, "update model: periodic rate must be strictly positive");
        UpdateModel u;
        u.kind_ = Kind::periodic;
        u.rate_hz_ = rate_hz;
        return u;
    }

    static UpdateModel on_request() { return UpdateModel{}; }

    static UpdateModel on_event() {
        UpdateModel u;
        u.kind_ = Kind::on_event;
        return u;
    }

    Kind kind() const { return kind_; }
    double rate_hz() const { return rate_hz_; }

    // Implied time gap between consecutive updates; zero for triggered
    // updates, which are requested when needed.
    double time_gap_s() const { return kind_ == Kind::periodic ? 1.0 / rate_hz_ : 0.0; }

private:
    Kind kind_ = Kind::on_request;
    double rate_hz_ = 0.0;
};

// Which data the interest space is anchored to: surveyed ground truth
// (accuracy applies) or a map recorded by the same system (repeatability).
enum class StaticBasis { ground_truth, same_system_map };

inline std::string_view basis_name(StaticBasis b) {
    return b == StaticBasis::ground_truth ? "ground_truth" : "same_system_map";
}

// A candidate system's quoted performance.
struct IlsSpec {
    std::string name;
    ErrorPercentiles accuracy;
    std::optional<ErrorPercentiles> repeatability;
    UpdateModel update;
    double latency_s = 0.0;

    IlsSpec(std::string name_, ErrorPercentiles accuracy_,
            std::optional<ErrorPercentiles> repeatability_, UpdateModel update_, double latency_s_)
        : name(std::move(name_)),
          accuracy(accuracy_),
          repeatability(std::move(repeatability_)),
          update(update_),
          latency_s(latency_s_) {
        if (std::isnan(latency_s) || std::isinf(latency_s) || latency_s < 0.0)
            fail(Errc::domain, "ils: latency must be finite and nonnegative");
    }

    const ErrorPercentiles& percentiles_for(StaticBasis basis) const {
        if (basis == StaticBasis::ground_truth) return accuracy;
        if (!repeatability)
            fail(Errc::missing_repeatability,
                 "ils '" + name + "': repeatability basis selected but no repeatability data");
        return *repeatability;
    }
};

// Motion-independent error bound at the interest frame: the device-frame
// percentiles plus the lever-arm chord from the heading percentile, added
// in full to both horizontal axes (the displacement direction is unknown).
inline MarginVector static_uncertainty(const ErrorPercentiles& p, const RigidTransform& t) {
    const double chord = lever_arm_chord(t.planar_arm(), p.yaw);
    std::array<double, 4> u{};
    u[axis_index(Axis::x)] = p.x + chord;
    u[axis_index(Axis::y)] = p.y + chord;
    u[axis_index(Axis::z)] = p.z;
    u[axis_index(Axis::yaw)] = p.yaw;
    return MarginVector(DofMask::all(), u);
}

inline MarginVector static_uncertainty(const IlsSpec& ils, const RigidTransform& t,
                                       StaticBasis basis) {
    return static_uncertainty(ils.percentiles_for(basis), t);
}

// Error bound from motion since the last periodic update: v * (1/rate).
// Triggered update modes carry no gap margin.
inline MarginVector time_gap_margin(const VelocityBound& v, const UpdateModel& update) {
    const double t_gap = update.time_gap_s();
    std::array<double, 4> m{};
    for (Axis a : kAxisOrder) m[axis_index(a)] = v.at(a) * t_gap;
    return MarginVector(DofMask::all(), m);
}

// Error bound from motion during the system latency; relevant only when
// the real-time location matters.
inline MarginVector time_delay_margin(const VelocityBound& v, double latency_s,
                                      bool realtime_required) {
    if (std::isnan(latency_s) || latency_s < 0.0)
        fail(Errc::domain, "time_delay_margin: latency must be nonnegative");
    std::array<double, 4> m{};
    if (realtime_required) {
        for (Axis a : kAxisOrder) m[axis_index(a)] = v.at(a) * latency_s;
    }
    return MarginVector(DofMask::all(), m);
}

// Total uncertainty at the interest frame: elementwise sum of the static,
// time-gap, and time-delay components.
inline MarginVector uncertainty_space(const MarginVector& u_static, const MarginVector& time_gap,
                                      const MarginVector& time_delay) {
    return u_static + time_gap + time_delay;
}

}  // namespace locreq
