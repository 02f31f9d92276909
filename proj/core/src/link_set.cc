#include "fave/link_set.h"

#include <iterator>

namespace fave {

void LinkSet::canonicalize() {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

LinkSet LinkSet::without(LinkId id) const {
  LinkSet out;
  out.ids_.reserve(ids_.size());
  std::copy_if(ids_.begin(), ids_.end(), std::back_inserter(out.ids_),
               [id](LinkId v) { return v != id; });
  return out;
}

LinkSet LinkSet::with(LinkId id) const {
  LinkSet out = *this;
  auto it = std::lower_bound(out.ids_.begin(), out.ids_.end(), id);
  if (it == out.ids_.end() || *it != id) out.ids_.insert(it, id);
  return out;
}

LinkSet LinkSet::united(const LinkSet& other) const {
  LinkSet out;
  out.ids_.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out.ids_));
  return out;
}

std::string LinkSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(ids_[i]);
  }
  return s + "}";
}

std::strong_ordering LinkSet::operator<=>(const LinkSet& other) const {
  if (auto c = ids_.size() <=> other.ids_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(ids_.begin(), ids_.end(), other.ids_.begin(),
                                                other.ids_.end());
}

}  // namespace fave
