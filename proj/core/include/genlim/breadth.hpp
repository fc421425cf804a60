#pragma once

#include <span>

#include "genlim/generators.hpp"

namespace genlim {

// One verdict per notion check; the evidence cardinalities are exact and the
// verdict is a function of them per the notion's defining clause.
struct BreadthVerdict {
  bool holds = false;
  Cardinality hallucination = Cardinality::finite(0); // elements outside the target
  Cardinality missing = Cardinality::finite(0);       // target elements not produced
  Cardinality overlap = Cardinality::finite(0);       // target elements covered
  std::optional<std::uint64_t> rival;                 // ambiguity counterexample
  bool rival_bounded = false; // only finitely many rivals were examined
};

enum class ExhaustiveVariant {
  FiniteHallucination, // current stream may hallucinate finitely many elements
  NoHallucination,     // current stream must sit inside the target
};

// supp united with the seen set equals the target exactly.
BreadthVerdict check_exact(const Fms& supp, const Fms& target, const FiniteSet& seen);

// supp inside the target, missing only finitely many of its elements.
BreadthVerdict check_approximate(const Fms& supp, const Fms& target);

// Current stream hallucinates per the variant, and seen + earlier first
// elements + current stream cover the target.
BreadthVerdict check_exhaustive(const Fms& stream, const FiniteSet& prior_firsts,
                                const Fms& target, const FiniteSet& seen,
                                ExhaustiveVariant variant);

// supp strictly closer to the target than to every rival index up to
// rival_bound, in symmetric difference. The verdict is bounded-rival.
BreadthVerdict check_unambiguous(const Fms& supp, const Collection& c,
                                 std::uint64_t target_index, std::uint64_t rival_bound);

// supp inside the target, disjoint from seen, infinite.
BreadthVerdict check_infinite_coverage(const Fms& supp, const Fms& target,
                                       const FiniteSet& seen);

// Snapshots nested throughout; every snapshot either equals the target or is
// strictly exceeded by a later snapshot within the horizon.
BreadthVerdict check_increasing_coverage(std::span<const Fms> history, const Fms& target);

// Descriptor-level fast paths used every step by the duel loop and by the
// adaptive adversaries. Exact; cross-checked against the Fms checkers in the
// test suite. The seen set must be the same set the view subtracts (the duel
// runs generator and adversary in lock step, so it is).
bool holds_exact(const SupportView& view, const Fms& target, const SampleSet& seen);
// Variant for callers that already track how many seen elements fall outside
// the target, avoiding the scan.
bool holds_exact(const SupportView& view, const Fms& target, const SampleSet& seen,
                 std::uint64_t seen_outside_target);
bool holds_approximate(const SupportView& view, const Fms& target);
bool holds_exhaustive(const SupportView& view, const FiniteSet& prior_firsts,
                      const Fms& target, const SampleSet& seen, ExhaustiveVariant variant);
bool holds_infinite_coverage(const SupportView& view, const Fms& target,
                             const SampleSet& seen, bool allow_seen);
bool holds_unambiguous(const SupportView& view, const Collection& c,
                       std::uint64_t target_index, std::uint64_t rival_bound);

} // namespace genlim
