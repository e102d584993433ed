#pragma once

namespace cuecorr {

inline constexpr const char* kVersion = "1.0.0";

// Version of the JSON report layout emitted by the CLI. Bumped whenever a
// field is renamed or removed, so downstream parsers can detect drift.
inline constexpr int kReportFormatVersion = 1;

}  // namespace cuecorr
