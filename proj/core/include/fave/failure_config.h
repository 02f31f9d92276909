#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "fave/link_set.h"

namespace fave {

class FailureConfig;

// Read-only view of the statuses of links 1..length of a configuration.
class PrefixView {
 public:
  PrefixView(const FailureConfig& config, std::size_t length);
  std::size_t length() const { return length_; }
  bool is_down(LinkId id) const;
  // Links down within the prefix.
  LinkSet down_links() const;

 private:
  const FailureConfig* config_;
  std::size_t length_;
};

// Link status vector x: bit i (1-based) is 1 when link i is down.
class FailureConfig {
 public:
  FailureConfig() = default;
  explicit FailureConfig(std::size_t n_links);
  // Statuses in link-id order, e.g. {1,0,1,0}.
  static FailureConfig from_statuses(std::initializer_list<int> statuses);
  // Bit k of `mask` is the status of link k+1. Requires n_links <= 64.
  static FailureConfig from_mask(std::uint64_t mask, std::size_t n_links);

  std::size_t size() const { return n_links_; }
  bool is_down(LinkId id) const {
    const std::size_t k = id - 1;
    return (words_[k >> 6] >> (k & 63)) & 1u;
  }
  void set(LinkId id, bool down);
  std::size_t down_count() const;
  std::uint64_t mask() const;  // requires size() <= 64
  std::span<const std::uint64_t> words() const { return words_; }

  PrefixView prefix(std::size_t length) const;
  std::string to_string() const;

  bool operator==(const FailureConfig&) const = default;

 private:
  std::size_t n_links_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace fave
