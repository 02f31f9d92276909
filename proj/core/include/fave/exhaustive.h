#pragma once

#include <cstddef>
#include <string_view>

namespace fave {

inline constexpr std::size_t kDefaultExhaustiveLimit = 20;

// Largest link count for which exhaustive 2^N_l enumeration is allowed.
// FAVE_EXHAUSTIVE_LIMIT overrides the default of 20 (capped at 40).
std::size_t exhaustive_limit();

// Throws LimitExceeded naming `what` when n_links exceeds the limit.
void require_exhaustive(std::size_t n_links, std::string_view what);

}  // namespace fave
