#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "genlim/sets.hpp"

// Shared test utilities: brute-force set materialization used as the
// independent oracle for the closed-form algebra, and a randomized Fms
// source for property checks.
namespace genlim::testing {

inline std::vector<bool> membership_table(const Fms& s, std::uint64_t horizon) {
  std::vector<bool> t(horizon + 1, false);
  for (std::uint64_t id = 1; id <= horizon; ++id) t[id] = s.member(Elem{id});
  return t;
}

// Exact |a\b| restricted to the first `horizon` ids, by brute force.
inline std::uint64_t brute_diff_count(const Fms& a, const Fms& b, std::uint64_t horizon) {
  std::uint64_t n = 0;
  for (std::uint64_t id = 1; id <= horizon; ++id)
    if (a.member(Elem{id}) && !b.member(Elem{id})) ++n;
  return n;
}

inline FiniteSet random_finite_set(std::mt19937_64& rng, std::uint64_t max_id,
                                   std::size_t max_size) {
  std::uniform_int_distribution<std::uint64_t> id_dist(1, max_id);
  std::uniform_int_distribution<std::size_t> size_dist(0, max_size);
  std::vector<Elem> v;
  std::size_t n = size_dist(rng);
  for (std::size_t i = 0; i < n; ++i) v.push_back(Elem{id_dist(rng)});
  return FiniteSet(std::move(v));
}

// Random normal-form set over one of the closed base families.
inline Fms random_fms(std::mt19937_64& rng, int family) {
  std::uniform_int_distribution<int> pick(0, 2);
  BaseRef base;
  switch (family) {
    case 0: // naturals family
      base = pick(rng) == 0 ? make_base(BaseKind::Empty) : make_base(BaseKind::Full);
      break;
    case 1: { // suffix family
      std::uniform_int_distribution<std::int64_t> start(-8, 8);
      int which = pick(rng);
      base = which == 0   ? make_base(BaseKind::Empty)
             : which == 1 ? make_base(BaseKind::Full)
                          : make_base(BaseKind::Suffix, start(rng));
      break;
    }
    case 2: { // multiples family
      std::uniform_int_distribution<std::int64_t> mod(2, 12);
      int which = pick(rng);
      base = which == 0   ? make_base(BaseKind::Empty)
             : which == 1 ? make_base(BaseKind::Full)
                          : make_base(BaseKind::Multiples, mod(rng));
      break;
    }
    default: { // parity family
      std::uniform_int_distribution<std::int64_t> par(0, 1);
      int which = pick(rng);
      base = which == 0   ? make_base(BaseKind::Empty)
             : which == 1 ? make_base(BaseKind::Full)
                          : make_base(BaseKind::Parity, par(rng));
      break;
    }
  }
  return Fms(base, random_finite_set(rng, 40, 6), random_finite_set(rng, 40, 6));
}

} // namespace genlim::testing
