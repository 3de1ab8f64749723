#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace locreq {

// Error taxonomy shared by all modules. The CLI maps these onto exit codes:
// infeasibility codes exit 2, everything else exits 1.
enum class Errc {
    domain,                 // argument outside its mathematical domain
    missing_axis,           // an axis was requested that the space/vector does not define
    axis_mismatch,          // two per-axis vectors carry different axis sets
    containment,            // motion space not contained in interest space
    negative_margin,        // safety margin exhausts the geometric gap
    infeasible_timing,      // dynamic terms alone exceed the requirement margin
    budget_exhausted,       // lever-arm deflation consumes the translational budget
    missing_repeatability,  // repeatability basis selected but no repeatability data
    confidence_mismatch,    // system percentiles quoted at lower confidence than required
    out_of_range,           // time outside the trajectory's span
    config,                 // configuration syntax/schema/invariant violation
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const noexcept { return code_; }

    // Infeasibility is a property of the inputs, not a usage mistake.
    bool infeasible() const noexcept {
        return code_ == Errc::negative_margin || code_ == Errc::infeasible_timing ||
               code_ == Errc::budget_exhausted;
    }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace locreq
