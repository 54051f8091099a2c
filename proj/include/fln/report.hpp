#pragma once

#include <cstdint>
#include <string>

namespace fln {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64-bit over the canonical config string. Report headers carry it so
// outputs stay attributable to the run that produced them.
std::uint64_t fnv1a(const std::string& text);

// "# fln <version> config=<hex>" — first line of every report file.
std::string report_header(const std::string& canonical_config);

// Shortest round-trippable decimal ("%.10g").
std::string format_double(double value);

}  // namespace fln
