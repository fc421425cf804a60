#pragma once

#include <cstdint>
#include <compare>
#include <optional>
#include <span>
#include <vector>

namespace genlim {

// Every countable domain is coded into ids 1, 2, 3, ...  Id 0 is reserved as
// the out-of-domain sentinel used by enumeration generators; it belongs to no
// language and no base set.
struct Elem {
  std::uint64_t id = 0;

  constexpr bool sentinel() const { return id == 0; }
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

constexpr Elem kSentinel{0};

// Fixed bijection between the integers and ids: 0,1,-1,2,-2,... <-> 1,2,3,4,5,...
// Integer-valued domains (the suffix collection) are always coded through it,
// so the canonical enumeration of Z is 0, 1, -1, 2, -2, ...
constexpr Elem zigzag_encode(std::int64_t value) {
  return value > 0 ? Elem{2 * static_cast<std::uint64_t>(value)}
                   : Elem{2 * static_cast<std::uint64_t>(-value) + 1};
}

constexpr std::int64_t zigzag_decode(Elem e) {
  return e.id % 2 == 0 ? static_cast<std::int64_t>(e.id / 2)
                       : -static_cast<std::int64_t>(e.id / 2);
}

// Exact count of a possibly-infinite set.
class Cardinality {
public:
  static constexpr Cardinality finite(std::uint64_t n) { return Cardinality(n); }
  static constexpr Cardinality infinite() { return Cardinality(); }

  constexpr bool is_finite() const { return count_.has_value(); }
  constexpr bool is_infinite() const { return !count_.has_value(); }

  // Only valid for finite cardinalities.
  constexpr std::uint64_t count() const { return *count_; }

  constexpr Cardinality operator+(Cardinality rhs) const {
    if (is_infinite() || rhs.is_infinite()) return infinite();
    return finite(count() + rhs.count());
  }

  friend constexpr bool operator==(Cardinality a, Cardinality b) {
    return a.count_ == b.count_;
  }

private:
  constexpr Cardinality() = default;
  constexpr explicit Cardinality(std::uint64_t n) : count_(n) {}
  std::optional<std::uint64_t> count_;
};

// Strictly sorted, duplicate-free sequence of elements.
class FiniteSet {
public:
  FiniteSet() = default;
  explicit FiniteSet(std::vector<Elem> elems);
  static FiniteSet of_ids(std::initializer_list<std::uint64_t> ids);
  static FiniteSet of_values(std::initializer_list<std::int64_t> values); // via zigzag

  bool contains(Elem e) const;
  void insert(Elem e);
  void erase(Elem e);
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }

  FiniteSet set_union(const FiniteSet& rhs) const;
  FiniteSet set_difference(const FiniteSet& rhs) const;
  FiniteSet set_intersection(const FiniteSet& rhs) const;
  bool subset_of(const FiniteSet& rhs) const;

  std::span<const Elem> elems() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  Elem front() const { return elems_.front(); }
  Elem back() const { return elems_.back(); }

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

private:
  std::vector<Elem> elems_;
};

// Smallest id >= from missing from the set; binary search over the sorted
// layout, so usable against large accumulated sample sets.
std::uint64_t first_absent_id(const FiniteSet& set, std::uint64_t from);

} // namespace genlim
