#pragma once

namespace multcount {

inline constexpr const char* kVersion = "0.1.0";

// Short commit id baked in at configure time, "unknown" when not built
// from a checkout.
const char* build_id();

}  // namespace multcount
