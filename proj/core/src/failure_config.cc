#include "fave/failure_config.h"

#include <bit>

#include "fave/errors.h"

namespace fave {

PrefixView::PrefixView(const FailureConfig& config, std::size_t length)
    : config_(&config), length_(length) {
  if (length > config.size()) throw InvalidArgument("prefix longer than configuration");
}

bool PrefixView::is_down(LinkId id) const {
  if (id == 0 || id > length_) throw InvalidLinkId("link " + std::to_string(id) + " outside prefix");
  return config_->is_down(id);
}

LinkSet PrefixView::down_links() const {
  std::vector<LinkId> ids;
  for (LinkId id = 1; id <= length_; ++id)
    if (config_->is_down(id)) ids.push_back(id);
  return LinkSet(std::move(ids));
}

FailureConfig::FailureConfig(std::size_t n_links)
    : n_links_(n_links), words_((n_links + 63) / 64, 0) {}

FailureConfig FailureConfig::from_statuses(std::initializer_list<int> statuses) {
  FailureConfig x(statuses.size());
  LinkId id = 1;
  for (int s : statuses) x.set(id++, s != 0);
  return x;
}

FailureConfig FailureConfig::from_mask(std::uint64_t mask, std::size_t n_links) {
  if (n_links > 64) throw InvalidArgument("from_mask supports at most 64 links");
  FailureConfig x(n_links);
  if (n_links > 0) {
    const std::uint64_t keep = n_links == 64 ? ~0ull : ((1ull << n_links) - 1);
    x.words_[0] = mask & keep;
  }
  return x;
}

void FailureConfig::set(LinkId id, bool down) {
  if (id == 0 || id > n_links_) throw InvalidLinkId("link id " + std::to_string(id) + " out of range");
  const std::size_t k = id - 1;
  const std::uint64_t bit = 1ull << (k & 63);
  if (down)
    words_[k >> 6] |= bit;
  else
    words_[k >> 6] &= ~bit;
}

std::size_t FailureConfig::down_count() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::uint64_t FailureConfig::mask() const {
  if (n_links_ > 64) throw InvalidArgument("mask() requires at most 64 links");
  return words_.empty() ? 0 : words_[0];
}

PrefixView FailureConfig::prefix(std::size_t length) const { return PrefixView(*this, length); }

std::string FailureConfig::to_string() const {
  std::string s;
  s.reserve(n_links_);
  for (LinkId id = 1; id <= n_links_; ++id) s += is_down(id) ? '1' : '0';
  return s;
}

}  // namespace fave
