#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fln {

// Dense node index into a FirstLinkGraph. Ids are contiguous 0..n-1.
using ArticleId = std::uint32_t;

// Sentinel for "no successor" in the packed successor array.
inline constexpr ArticleId kNoSuccessor = static_cast<ArticleId>(-1);

// Raised for anything wrong with user-supplied input: malformed files,
// duplicate sources, fits on degenerate data. The CLI maps it to exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fln
