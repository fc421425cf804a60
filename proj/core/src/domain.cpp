#include "genlim/domain.hpp"

#include <algorithm>
#include <cassert>

namespace genlim {

FiniteSet::FiniteSet(std::vector<Elem> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

FiniteSet FiniteSet::of_ids(std::initializer_list<std::uint64_t> ids) {
  std::vector<Elem> v;
  v.reserve(ids.size());
  for (auto id : ids) v.push_back(Elem{id});
  return FiniteSet(std::move(v));
}

FiniteSet FiniteSet::of_values(std::initializer_list<std::int64_t> values) {
  std::vector<Elem> v;
  v.reserve(values.size());
  for (auto value : values) v.push_back(zigzag_encode(value));
  return FiniteSet(std::move(v));
}

bool FiniteSet::contains(Elem e) const {
  return std::binary_search(elems_.begin(), elems_.end(), e);
}

void FiniteSet::insert(Elem e) {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), e);
  if (it == elems_.end() || *it != e) elems_.insert(it, e);
}

void FiniteSet::erase(Elem e) {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), e);
  if (it != elems_.end() && *it == e) elems_.erase(it);
}

FiniteSet FiniteSet::set_union(const FiniteSet& rhs) const {
  std::vector<Elem> out;
  out.reserve(elems_.size() + rhs.elems_.size());
  std::set_union(elems_.begin(), elems_.end(), rhs.elems_.begin(),
                 rhs.elems_.end(), std::back_inserter(out));
  FiniteSet r;
  r.elems_ = std::move(out);
  return r;
}

FiniteSet FiniteSet::set_difference(const FiniteSet& rhs) const {
  std::vector<Elem> out;
  std::set_difference(elems_.begin(), elems_.end(), rhs.elems_.begin(),
                      rhs.elems_.end(), std::back_inserter(out));
  FiniteSet r;
  r.elems_ = std::move(out);
  return r;
}

FiniteSet FiniteSet::set_intersection(const FiniteSet& rhs) const {
  std::vector<Elem> out;
  std::set_intersection(elems_.begin(), elems_.end(), rhs.elems_.begin(),
                        rhs.elems_.end(), std::back_inserter(out));
  FiniteSet r;
  r.elems_ = std::move(out);
  return r;
}

bool FiniteSet::subset_of(const FiniteSet& rhs) const {
  return std::includes(rhs.elems_.begin(), rhs.elems_.end(), elems_.begin(),
                       elems_.end());
}

std::uint64_t first_absent_id(const FiniteSet& set, std::uint64_t from) {
  auto elems = set.elems();
  auto base = std::lower_bound(elems.begin(), elems.end(), Elem{from}) - elems.begin();
  std::size_t lo = base, hi = elems.size();
  if (lo == hi || elems[lo].id != from) return from;
  // elems[q].id == from + (q - base) exactly while the run stays contiguous
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (elems[mid].id == from + (mid - base)) lo = mid + 1;
    else hi = mid;
  }
  return from + (lo - base);
}

} // namespace genlim
