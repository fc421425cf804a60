#include "genlim/breadth.hpp"

namespace genlim {

BreadthVerdict check_exact(const Fms& supp, const Fms& target, const FiniteSet& seen) {
  Fms united = supp.modified(seen, {});
  BreadthVerdict v;
  v.hallucination = difference_card(united, target);
  v.missing = difference_card(target, united);
  v.overlap = overlap_card(target, united);
  v.holds = v.hallucination == Cardinality::finite(0) && v.missing == Cardinality::finite(0);
  return v;
}

BreadthVerdict check_approximate(const Fms& supp, const Fms& target) {
  BreadthVerdict v;
  v.hallucination = difference_card(supp, target);
  v.missing = difference_card(target, supp);
  v.overlap = overlap_card(target, supp);
  v.holds = v.hallucination == Cardinality::finite(0) && v.missing.is_finite();
  return v;
}

BreadthVerdict check_exhaustive(const Fms& stream, const FiniteSet& prior_firsts,
                                const Fms& target, const FiniteSet& seen,
                                ExhaustiveVariant variant) {
  BreadthVerdict v;
  v.hallucination = difference_card(stream, target);
  Fms covered = stream.modified(seen.set_union(prior_firsts), {});
  v.missing = difference_card(target, covered);
  v.overlap = overlap_card(target, stream);
  bool hallucination_ok = variant == ExhaustiveVariant::NoHallucination
                              ? v.hallucination == Cardinality::finite(0)
                              : v.hallucination.is_finite();
  v.holds = hallucination_ok && v.missing == Cardinality::finite(0);
  return v;
}

BreadthVerdict check_unambiguous(const Fms& supp, const Collection& c,
                                 std::uint64_t target_index, std::uint64_t rival_bound) {
  Fms target = c.language_at(target_index);
  BreadthVerdict v;
  v.rival_bounded = true;
  v.hallucination = difference_card(supp, target);
  v.missing = difference_card(target, supp);
  v.overlap = overlap_card(target, supp);
  Cardinality own = relate(supp, target).symdiff;
  if (!own.is_finite()) {
    v.holds = false; // not strictly below anything
    return v;
  }
  for (std::uint64_t r = c.index_begin(); r <= rival_bound && c.in_range(r); ++r) {
    if (r == target_index) continue;
    Cardinality rival_distance = relate(supp, c.language_at(r)).symdiff;
    if (rival_distance.is_finite() && rival_distance.count() <= own.count()) {
      v.holds = false;
      v.rival = r;
      return v;
    }
  }
  v.holds = true;
  return v;
}

BreadthVerdict check_infinite_coverage(const Fms& supp, const Fms& target,
                                       const FiniteSet& seen) {
  BreadthVerdict v;
  v.hallucination = difference_card(supp, target);
  v.missing = difference_card(target, supp);
  v.overlap = overlap_card(target, supp);
  bool disjoint = true;
  for (Elem e : seen)
    if (supp.member(e)) { disjoint = false; break; }
  v.holds = v.hallucination == Cardinality::finite(0) && disjoint &&
            supp.cardinality().is_infinite();
  return v;
}

BreadthVerdict check_increasing_coverage(std::span<const Fms> history, const Fms& target) {
  BreadthVerdict v;
  if (history.empty()) return v;
  bool nested = true;
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (!relate(history[i - 1], history[i]).subset) { nested = false; break; }
  }
  const Fms& last = history.back();
  v.hallucination = difference_card(last, target);
  v.missing = difference_card(target, last);
  v.overlap = overlap_card(target, last);
  // Under nesting, a snapshot is strictly exceeded later exactly when it
  // differs from the final one, so the growth clause reduces to the final
  // snapshot reaching the target.
  v.holds = nested && relate(last, target).equal;
  return v;
}

namespace {

bool infinite_base_difference(const Fms& a, const Fms& b) {
  return !base_difference(a.base(), b.base()).finite;
}

// Candidate ids where "x in view" and "x in target" can disagree outside the
// removed sets: base differences plus both corrections.
template <typename Fn>
bool any_candidate(const Fms& a, const Fms& b, Fn&& fn) {
  BaseDiff fwd = base_difference(a.base(), b.base());
  BaseDiff bwd = base_difference(b.base(), a.base());
  const FiniteSet* sources[] = {&fwd.elems, &bwd.elems, &a.add(),
                                &a.sub(),   &b.add(),   &b.sub()};
  for (const FiniteSet* s : sources)
    for (Elem e : *s)
      if (fn(e)) return true;
  return false;
}

} // namespace

bool holds_exact(const SupportView& view, const Fms& target, const SampleSet& seen,
                 std::uint64_t seen_outside_target) {
  if (!view.defined()) return false;
  if (seen_outside_target > 0) return false; // some seen element escapes the target
  const Fms& lang = *view.language();
  if (infinite_base_difference(lang, target) || infinite_base_difference(target, lang))
    return false;
  // For x outside the seen set: x in (supp union seen) iff x in lang with
  // id beyond the removed prefix. Mismatches against the target can only
  // occur on correction/base-difference candidates or inside the prefix.
  bool mismatch = any_candidate(lang, target, [&](Elem e) {
    if (seen.contains(e)) return false; // covered by the outside count
    bool left = lang.member(e) && e.id > view.removed_prefix();
    return left != target.member(e);
  });
  if (mismatch) return false;
  for (std::uint64_t id = 1; id <= view.removed_prefix(); ++id) {
    Elem e{id};
    if (!seen.contains(e) && lang.member(e) && target.member(e)) return false;
  }
  return true;
}

bool holds_exact(const SupportView& view, const Fms& target, const SampleSet& seen) {
  std::uint64_t outside = 0;
  for (Elem e : seen.elems())
    if (!target.member(e)) ++outside;
  return holds_exact(view, target, seen, outside);
}

bool holds_approximate(const SupportView& view, const Fms& target) {
  if (!view.defined()) return false;
  const Fms& lang = *view.language();
  if (infinite_base_difference(lang, target)) return false; // infinite hallucination
  bool escapes = any_candidate(lang, target, [&](Elem e) {
    return view.contains(e) && !target.member(e);
  });
  if (escapes) return false;
  // target minus support: the removals are finite, so finiteness reduces to
  // the base difference.
  return !infinite_base_difference(target, lang);
}

bool holds_exhaustive(const SupportView& view, const FiniteSet& prior_firsts,
                      const Fms& target, const SampleSet& seen,
                      ExhaustiveVariant variant) {
  if (!view.defined()) return false;
  const Fms& lang = *view.language();
  if (infinite_base_difference(lang, target)) return false;
  if (variant == ExhaustiveVariant::NoHallucination) {
    bool hallucinates = any_candidate(lang, target, [&](Elem e) {
      return view.contains(e) && !target.member(e);
    });
    if (hallucinates) return false;
  }
  // coverage: target minus stream must be inside seen plus earlier firsts
  if (infinite_base_difference(target, lang)) return false;
  auto uncovered = [&](Elem e) {
    return target.member(e) && !view.contains(e) && !seen.contains(e) &&
           !prior_firsts.contains(e);
  };
  if (any_candidate(lang, target, uncovered)) return false;
  for (std::uint64_t id = 1; id <= view.removed_prefix(); ++id)
    if (uncovered(Elem{id})) return false;
  return true;
}

bool holds_infinite_coverage(const SupportView& view, const Fms& target,
                             const SampleSet& seen, bool allow_seen) {
  if (!view.defined()) return false;
  if (!view.cardinality().is_infinite()) return false;
  const Fms& lang = *view.language();
  if (infinite_base_difference(lang, target)) return false;
  bool escapes = any_candidate(lang, target, [&](Elem e) {
    return view.contains(e) && !target.member(e);
  });
  if (escapes) return false;
  if (!allow_seen && view.removed_seen() != &seen) {
    for (Elem e : seen.elems())
      if (view.contains(e)) return false;
  }
  return true;
}

bool holds_unambiguous(const SupportView& view, const Collection& c,
                       std::uint64_t target_index, std::uint64_t rival_bound) {
  if (!view.defined()) return false;
  return check_unambiguous(view.materialize(), c, target_index, rival_bound).holds;
}

} // namespace genlim
