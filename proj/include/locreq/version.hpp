#pragma once

namespace locreq {

inline constexpr const char* kToolName = "locreq";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace locreq
