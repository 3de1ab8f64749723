#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "locreq/error.hpp"

namespace locreq {

// Degrees of freedom handled by this library: translation plus heading.
enum class Axis : std::uint8_t { x = 0, y = 1, z = 2, yaw = 3 };

inline constexpr std::array<Axis, 4> kAxisOrder{Axis::x, Axis::y, Axis::z, Axis::yaw};

inline constexpr std::size_t axis_index(Axis a) { return static_cast<std::size_t>(a); }

inline constexpr bool axis_is_angular(Axis a) { return a == Axis::yaw; }

inline constexpr std::string_view axis_name(Axis a) {
    switch (a) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        case Axis::z: return "z";
        case Axis::yaw: return "yaw";
    }
    return "?";
}

inline Axis axis_from_name(std::string_view name) {
    for (Axis a : kAxisOrder) {
        if (axis_name(a) == name) return a;
    }
    fail(Errc::config, "unknown axis name: '" + std::string(name) + "'");
}

// Nonempty, duplicate-free subset of {x, y, z, yaw}. Iteration order is
// always the canonical x, y, z, yaw.
class DofMask {
public:
    DofMask() = default;  // empty; build real masks through of()/make()

    static DofMask of(std::initializer_list<Axis> axes) {
        return make(std::vector<Axis>(axes));
    }

    static DofMask make(const std::vector<Axis>& axes) {
        if (axes.empty()) fail(Errc::config, "dof: at least one axis required");
        DofMask m;
        for (Axis a : axes) {
            if (m.included_[axis_index(a)])
                fail(Errc::config, "dof: duplicate axis '" + std::string(axis_name(a)) + "'");
            m.included_[axis_index(a)] = true;
        }
        return m;
    }

    static DofMask all() { return of({Axis::x, Axis::y, Axis::z, Axis::yaw}); }

    bool contains(Axis a) const { return included_[axis_index(a)]; }

    std::size_t count() const {
        std::size_t n = 0;
        for (bool b : included_) n += b ? 1 : 0;
        return n;
    }

    bool empty() const { return count() == 0; }

    // Subset relation: every axis of this mask is also in `other`.
    bool subset_of(const DofMask& other) const {
        for (Axis a : kAxisOrder)
            if (contains(a) && !other.contains(a)) return false;
        return true;
    }

    std::vector<Axis> axes() const {
        std::vector<Axis> out;
        for (Axis a : kAxisOrder)
            if (contains(a)) out.push_back(a);
        return out;
    }

    std::string to_string() const {
        std::string s;
        for (Axis a : kAxisOrder) {
            if (!contains(a)) continue;
            if (!s.empty()) s += ",";
            s += axis_name(a);
        }
        return s;
    }

    friend bool operator==(const DofMask&, const DofMask&) = default;

private:
    std::array<bool, 4> included_{};
};

}  // namespace locreq
