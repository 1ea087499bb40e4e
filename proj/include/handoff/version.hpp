#pragma once

namespace handoff {

inline constexpr const char* kVersion = "handoff-lab 0.1.0";

}  // namespace handoff
