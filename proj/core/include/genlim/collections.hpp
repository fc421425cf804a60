#pragma once

#include <optional>
#include <string>

#include "genlim/sets.hpp"

namespace genlim {

enum class CollectionName { SingleRemoval, Suffixes, PrimeMultiples, ParityDemo };

const char* to_string(CollectionName name);
std::optional<CollectionName> collection_from_string(const std::string& s);

// Oracle suite a collection offers. Builtins ship with everything enabled;
// runs can mask capabilities off to study generators under restricted access.
struct Capabilities {
  bool membership = true;
  bool subset = true;
  bool finite_difference = true;
  bool telltale_strong = true;
  bool telltale_weak = true;
  bool vsi = true;
};

enum class TellTaleKind { Strong, Weak };

// Accumulates an observed sample set together with the aggregates (minimum
// decoded value, gcd of ids, parity tallies) that let every builtin
// consistency check "S inside L_i" run in O(1).
class SampleSet {
public:
  void insert(Elem e);
  bool contains(Elem e) const { return elems_.contains(e); }
  const FiniteSet& elems() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }

  std::int64_t min_decoded() const { return min_decoded_; } // INT64_MAX when empty
  std::uint64_t gcd_ids() const { return gcd_; }            // 0 when empty
  std::uint64_t even_id_count() const { return even_ids_; }
  std::uint64_t odd_id_above_one_count() const { return odd_ids_above_one_; }

private:
  FiniteSet elems_;
  std::int64_t min_decoded_ = INT64_MAX;
  std::uint64_t gcd_ = 0;
  std::uint64_t even_ids_ = 0;
  std::uint64_t odd_ids_above_one_ = 0;
};

// i-th prime, 1-indexed: prime(1) = 2. Thread-safe growing cache.
std::uint64_t prime(std::uint64_t i);

// The canonical language collections. Immutable; all oracles are pure.
class Collection {
public:
  static Collection builtin(CollectionName name);
  Collection with_capabilities(Capabilities caps) const;

  CollectionName name() const { return name_; }
  const Capabilities& capabilities() const { return caps_; }
  std::uint64_t index_begin() const { return begin_; }
  std::optional<std::uint64_t> index_end() const { return end_; } // exclusive
  bool in_range(std::uint64_t index) const;
  // Number of indices among the first `prefix` positions of the index range.
  std::uint64_t index_count(std::uint64_t prefix) const;
  std::uint64_t nth_index(std::uint64_t n) const { return begin_ + n; }

  Fms language_at(std::uint64_t index) const;

  bool membership_oracle(std::uint64_t index, Elem x) const;
  // Is L_i inside L_j?
  bool subset_oracle(std::uint64_t i, std::uint64_t j) const;
  // Given L_i proper subset of L_j: is L_j \ L_i finite? Raises
  // ContractViolation when the pair is not a proper inclusion.
  bool finite_difference_oracle(std::uint64_t i, std::uint64_t j) const;
  // First `take` elements of the tell-tale of L_i; stable across calls.
  FiniteSet telltale_oracle(std::uint64_t index, TellTaleKind kind,
                            std::uint64_t take) const;
  // Closed-form tell-tale entry, nullopt when the language provably has none
  // of the requested kind. Does not consult capability flags.
  std::optional<FiniteSet> telltale_entry(std::uint64_t index, TellTaleKind kind) const;

  // Intersection of every language consistent with the samples, in closed
  // form over the whole (unbounded) collection. Raises EmptyVersionSpace.
  Fms vsi_support(const FiniteSet& samples) const;
  bool vsi_membership(const FiniteSet& samples, Elem x) const;

  // samples inside L_index, from aggregates, O(1) for every builtin family.
  bool consistent(std::uint64_t index, const SampleSet& seen) const;
  // Smallest consistent index in [from, limit), or nullopt. Skips
  // inconsistent stretches in closed form.
  std::optional<std::uint64_t> next_consistent(std::uint64_t from,
                                               std::uint64_t limit,
                                               const SampleSet& seen) const;

private:
  Collection(CollectionName name, std::uint64_t begin,
             std::optional<std::uint64_t> end)
      : name_(name), begin_(begin), end_(end) {}

  void require(bool capability, const char* which) const;
  void check_range(std::uint64_t index) const;

  CollectionName name_;
  std::uint64_t begin_;
  std::optional<std::uint64_t> end_;
  Capabilities caps_;
};

} // namespace genlim
