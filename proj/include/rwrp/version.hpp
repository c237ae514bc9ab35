#pragma once

namespace rwrp {

inline constexpr const char* kVersion = "0.1.0";

// Compact per-module version tag carried in every output row.
inline constexpr const char* kModuleVersions =
    "theory:1;lattice:1;env:1;fkmc:1;green:1;oracle:1;cli:1";

}  // namespace rwrp
