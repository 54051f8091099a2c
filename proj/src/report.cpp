#include "fln/report.hpp"

#include <cstdio>

namespace fln {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string report_header(const std::string& canonical_config) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "# fln %s config=%016llx\n", kToolVersion,
                static_cast<unsigned long long>(fnv1a(canonical_config)));
  return buf;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

}  // namespace fln
