#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fave {

// Links are numbered 1..N_l.
using LinkId = std::uint32_t;

// A set of link ids kept in canonical (sorted, duplicate-free) form so that
// structural equality is set equality.
class LinkSet {
 public:
  LinkSet() = default;
  LinkSet(std::initializer_list<LinkId> ids) : ids_(ids) { canonicalize(); }
  explicit LinkSet(std::vector<LinkId> ids) : ids_(std::move(ids)) { canonicalize(); }

  std::span<const LinkId> members() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  bool contains(LinkId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }
  bool is_subset_of(const LinkSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
  }
  bool is_proper_subset_of(const LinkSet& other) const {
    return size() < other.size() && is_subset_of(other);
  }

  LinkSet without(LinkId id) const;
  LinkSet with(LinkId id) const;
  LinkSet united(const LinkSet& other) const;

  // Largest member, or 0 for the empty set.
  LinkId max_id() const { return ids_.empty() ? 0 : ids_.back(); }

  std::string to_string() const;

  bool operator==(const LinkSet&) const = default;
  // Canonical collection order: by cardinality, then lexicographically.
  std::strong_ordering operator<=>(const LinkSet& other) const;

 private:
  void canonicalize();
  std::vector<LinkId> ids_;
};

}  // namespace fave
