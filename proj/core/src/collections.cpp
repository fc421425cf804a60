#include "genlim/collections.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <vector>

namespace genlim {

const char* to_string(CollectionName name) {
  switch (name) {
    case CollectionName::SingleRemoval: return "SINGLE_REMOVAL";
    case CollectionName::Suffixes: return "SUFFIXES";
    case CollectionName::PrimeMultiples: return "PRIME_MULTIPLES";
    case CollectionName::ParityDemo: return "PARITY_DEMO";
  }
  return "?";
}

std::optional<CollectionName> collection_from_string(const std::string& s) {
  if (s == "SINGLE_REMOVAL") return CollectionName::SingleRemoval;
  if (s == "SUFFIXES") return CollectionName::Suffixes;
  if (s == "PRIME_MULTIPLES") return CollectionName::PrimeMultiples;
  if (s == "PARITY_DEMO") return CollectionName::ParityDemo;
  return std::nullopt;
}

void SampleSet::insert(Elem e) {
  if (elems_.contains(e)) return;
  elems_.insert(e);
  min_decoded_ = std::min(min_decoded_, zigzag_decode(e));
  gcd_ = std::gcd(gcd_, e.id);
  if (e.id % 2 == 0) ++even_ids_;
  else if (e.id > 1) ++odd_ids_above_one_;
}

std::uint64_t prime(std::uint64_t i) {
  static std::vector<std::uint64_t> cache = {2, 3, 5, 7, 11, 13};
  static std::mutex mu;
  std::lock_guard lock(mu);
  while (cache.size() < i) {
    std::uint64_t candidate = cache.back() + 2;
    for (;; candidate += 2) {
      bool is_prime = true;
      for (std::uint64_t p : cache) {
        if (p * p > candidate) break;
        if (candidate % p == 0) { is_prime = false; break; }
      }
      if (is_prime) break;
    }
    cache.push_back(candidate);
  }
  return cache[i - 1];
}

namespace {

// Index of prime p among the primes, or 0 when p is not prime.
std::uint64_t prime_index(std::uint64_t p) {
  for (std::uint64_t i = 1;; ++i) {
    std::uint64_t q = prime(i);
    if (q == p) return i;
    if (q > p) return 0;
  }
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 1; n > 1; ++i) {
    std::uint64_t p = prime(i);
    if (p * p > n) break;
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

} // namespace

Collection Collection::builtin(CollectionName name) {
  switch (name) {
    case CollectionName::SingleRemoval: return Collection(name, 0, std::nullopt);
    case CollectionName::Suffixes: return Collection(name, 0, std::nullopt);
    case CollectionName::PrimeMultiples: return Collection(name, 1, std::nullopt);
    case CollectionName::ParityDemo: return Collection(name, 1, 3);
  }
  raise(ErrorKind::Config, "unknown collection");
}

Collection Collection::with_capabilities(Capabilities caps) const {
  Collection copy = *this;
  copy.caps_ = caps;
  return copy;
}

bool Collection::in_range(std::uint64_t index) const {
  return index >= begin_ && (!end_ || index < *end_);
}

std::uint64_t Collection::index_count(std::uint64_t prefix) const {
  if (!end_) return prefix;
  return std::min<std::uint64_t>(prefix, *end_ - begin_);
}

void Collection::require(bool capability, const char* which) const {
  if (!capability)
    raise(ErrorKind::CapabilityMissing,
          std::string(to_string(name_)) + " lacks the " + which + " capability");
}

void Collection::check_range(std::uint64_t index) const {
  if (!in_range(index))
    raise(ErrorKind::IndexOutOfRange,
          "index " + std::to_string(index) + " out of range for " + to_string(name_));
}

Fms Collection::language_at(std::uint64_t index) const {
  check_range(index);
  switch (name_) {
    case CollectionName::SingleRemoval:
      if (index == 0) return Fms::full();
      return Fms(make_base(BaseKind::Full), {}, FiniteSet::of_ids({index}));
    case CollectionName::Suffixes:
      if (index == 0) return Fms::full();
      return Fms(make_base(BaseKind::Suffix, zigzag_decode(Elem{index})));
    case CollectionName::PrimeMultiples:
      return Fms(make_base(BaseKind::Multiples, static_cast<std::int64_t>(prime(index))));
    case CollectionName::ParityDemo:
      if (index == 1) return Fms(make_base(BaseKind::Parity, 0));
      return Fms(make_base(BaseKind::Parity, 1), FiniteSet::of_ids({1}), {});
  }
  raise(ErrorKind::Config, "unknown collection");
}

bool Collection::membership_oracle(std::uint64_t index, Elem x) const {
  require(caps_.membership, "membership");
  return language_at(index).member(x);
}

bool Collection::subset_oracle(std::uint64_t i, std::uint64_t j) const {
  require(caps_.subset, "subset");
  return relate(language_at(i), language_at(j)).subset;
}

bool Collection::finite_difference_oracle(std::uint64_t i, std::uint64_t j) const {
  require(caps_.finite_difference, "finite_difference");
  Relation r = relate(language_at(i), language_at(j));
  if (!r.subset || r.equal)
    raise(ErrorKind::ContractViolation,
          "finite_difference_oracle needs a proper inclusion L_i within L_j");
  return difference_card(language_at(j), language_at(i)).is_finite();
}

std::optional<FiniteSet> Collection::telltale_entry(std::uint64_t index,
                                                    TellTaleKind kind) const {
  check_range(index);
  switch (name_) {
    case CollectionName::SingleRemoval:
      if (index == 0) {
        // N has proper subsets below every finite set; they all miss exactly
        // one element, so only the weak kind admits a tell-tale.
        if (kind == TellTaleKind::Strong) return std::nullopt;
        return FiniteSet::of_ids({1});
      }
      return FiniteSet{}; // nothing in the collection sits strictly inside N\{i}
    case CollectionName::Suffixes:
      if (index == 0) return std::nullopt; // Z fails even the weak condition
      // The suffix's start; no proper subset contains it.
      return FiniteSet({language_at(index).kth(1)});
    case CollectionName::PrimeMultiples:
      return FiniteSet::of_ids({prime(index)});
    case CollectionName::ParityDemo:
      return FiniteSet({language_at(index).kth(1)});
  }
  raise(ErrorKind::Config, "unknown collection");
}

FiniteSet Collection::telltale_oracle(std::uint64_t index, TellTaleKind kind,
                                      std::uint64_t take) const {
  require(kind == TellTaleKind::Strong ? caps_.telltale_strong : caps_.telltale_weak,
          kind == TellTaleKind::Strong ? "telltale_strong" : "telltale_weak");
  auto entry = telltale_entry(index, kind);
  if (!entry)
    raise(ErrorKind::NoTellTale,
          std::string(to_string(name_)) + " index " + std::to_string(index) +
              " has no tell-tale of the requested kind");
  if (entry->size() <= take) return *entry;
  std::vector<Elem> prefix(entry->begin(), entry->begin() + take);
  return FiniteSet(std::move(prefix));
}

Fms Collection::vsi_support(const FiniteSet& samples) const {
  require(caps_.vsi, "vsi");
  switch (name_) {
    case CollectionName::SingleRemoval:
      // N is always consistent; N\{i} is consistent exactly when i is not a
      // sample. Every id outside the samples is therefore excluded by some
      // consistent language, which pins the intersection to the samples.
      return Fms::finite(samples);
    case CollectionName::Suffixes: {
      if (samples.empty()) return Fms(); // meet of all suffixes is empty
      std::int64_t m = INT64_MAX;
      for (Elem e : samples) m = std::min(m, zigzag_decode(e));
      return Fms(make_base(BaseKind::Suffix, m));
    }
    case CollectionName::PrimeMultiples: {
      std::uint64_t g = 0;
      for (Elem e : samples) g = std::gcd(g, e.id);
      if (g == 0) return Fms(); // all languages consistent; no common multiple
      std::uint64_t product = 1;
      for (std::uint64_t p : prime_factors(g))
        if (prime_index(p) != 0) product *= p;
      if (product == 1)
        raise(ErrorKind::EmptyVersionSpace, "no prime divides every sample");
      return Fms(make_base(BaseKind::Multiples, static_cast<std::int64_t>(product)));
    }
    case CollectionName::ParityDemo: {
      Fms l1 = language_at(1), l2 = language_at(2);
      bool c1 = true, c2 = true;
      for (Elem e : samples) {
        c1 = c1 && l1.member(e);
        c2 = c2 && l2.member(e);
      }
      if (c1 && c2) return intersect(l1, l2);
      if (c1) return l1;
      if (c2) return l2;
      raise(ErrorKind::EmptyVersionSpace, "no PARITY_DEMO language fits the samples");
    }
  }
  raise(ErrorKind::Config, "unknown collection");
}

bool Collection::vsi_membership(const FiniteSet& samples, Elem x) const {
  return vsi_support(samples).member(x);
}

bool Collection::consistent(std::uint64_t index, const SampleSet& seen) const {
  check_range(index);
  if (seen.empty()) return true;
  switch (name_) {
    case CollectionName::SingleRemoval:
      return index == 0 || !seen.contains(Elem{index});
    case CollectionName::Suffixes:
      return index == 0 || zigzag_decode(Elem{index}) <= seen.min_decoded();
    case CollectionName::PrimeMultiples:
      return seen.gcd_ids() % prime(index) == 0;
    case CollectionName::ParityDemo:
      return index == 1 ? seen.even_id_count() == 0
                        : seen.odd_id_above_one_count() == 0;
  }
  return false;
}

std::optional<std::uint64_t> Collection::next_consistent(std::uint64_t from,
                                                         std::uint64_t limit,
                                                         const SampleSet& seen) const {
  from = std::max(from, begin_);
  if (end_) limit = std::min(limit, *end_);
  if (from >= limit) return std::nullopt;
  if (seen.empty()) return from;
  switch (name_) {
    case CollectionName::SingleRemoval: {
      if (from == 0) return 0;
      std::uint64_t i = first_absent_id(seen.elems(), from);
      if (i < limit) return i;
      return std::nullopt;
    }
    case CollectionName::Suffixes: {
      if (from == 0) return 0;
      std::int64_t m = seen.min_decoded();
      std::uint64_t i = from;
      if (m >= 0) {
        // consistent indices: every odd index, and even indices up to 2m
        if (i % 2 == 0 && static_cast<std::int64_t>(i / 2) > m) ++i;
      } else {
        // consistent indices: odd indices from 2|m|+1 on
        std::uint64_t first = 2 * static_cast<std::uint64_t>(-m) + 1;
        i = std::max(i, first);
        if (i % 2 == 0) ++i;
      }
      if (i < limit) return i;
      return std::nullopt;
    }
    case CollectionName::PrimeMultiples: {
      std::uint64_t g = seen.gcd_ids();
      std::uint64_t best = 0;
      for (std::uint64_t p : prime_factors(g)) {
        std::uint64_t i = prime_index(p);
        if (i >= from && i < limit && (best == 0 || i < best)) best = i;
      }
      if (best != 0) return best;
      return std::nullopt;
    }
    case CollectionName::ParityDemo: {
      for (std::uint64_t i = from; i < limit; ++i)
        if (consistent(i, seen)) return i;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

} // namespace genlim
