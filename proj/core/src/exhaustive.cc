#include "fave/exhaustive.h"

#include <cstdlib>
#include <iostream>
#include <string>

#include "fave/errors.h"

namespace fave {

std::size_t exhaustive_limit() {
  const char* env = std::getenv("FAVE_EXHAUSTIVE_LIMIT");
  if (env == nullptr || *env == '\0') return kDefaultExhaustiveLimit;
  char* end = nullptr;
  unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0') throw InvalidArgument("FAVE_EXHAUSTIVE_LIMIT must be an integer");
  return std::min<unsigned long>(v, 40);
}

void require_exhaustive(std::size_t n_links, std::string_view what) {
  const std::size_t limit = exhaustive_limit();
  if (n_links > limit)
    throw LimitExceeded(std::string(what) + ": " + std::to_string(n_links) +
                        " links exceed the exhaustive limit of " + std::to_string(limit) +
                        " (set FAVE_EXHAUSTIVE_LIMIT to raise it)");
  if (n_links > kDefaultExhaustiveLimit)
    std::cerr << "warning: " << what << " enumerates 2^" << n_links << " configurations\n";
}

}  // namespace fave
