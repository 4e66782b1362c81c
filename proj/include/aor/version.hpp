#pragma once

namespace aor {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace aor
