#include "genlim/generators.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace genlim {

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::KmSubset: return "KM_SUBSET";
    case GeneratorKind::TellTale: return "TELLTALE";
    case GeneratorKind::ExhaustiveFn: return "EXHAUSTIVE_FN";
    case GeneratorKind::TellTaleExhaustive: return "TELLTALE_EXHAUSTIVE";
    case GeneratorKind::ClosureStable: return "CLOSURE_STABLE";
    case GeneratorKind::SuffixIncreasing: return "SUFFIX_INCREASING";
    case GeneratorKind::IdentifierExact: return "IDENTIFIER_EXACT";
  }
  return "?";
}

std::optional<GeneratorKind> generator_from_string(const std::string& s) {
  if (s == "KM_SUBSET") return GeneratorKind::KmSubset;
  if (s == "TELLTALE") return GeneratorKind::TellTale;
  if (s == "EXHAUSTIVE_FN") return GeneratorKind::ExhaustiveFn;
  if (s == "TELLTALE_EXHAUSTIVE") return GeneratorKind::TellTaleExhaustive;
  if (s == "CLOSURE_STABLE") return GeneratorKind::ClosureStable;
  if (s == "SUFFIX_INCREASING") return GeneratorKind::SuffixIncreasing;
  if (s == "IDENTIFIER_EXACT") return GeneratorKind::IdentifierExact;
  return std::nullopt;
}

namespace {

// Number of base elements with id <= bound.
std::uint64_t base_rank_upto(BaseRef b, std::uint64_t bound) {
  switch (b.kind) {
    case BaseKind::Empty:
      return 0;
    case BaseKind::Full:
      return bound;
    case BaseKind::Multiples:
      return bound / static_cast<std::uint64_t>(b.param);
    case BaseKind::Parity:
      return b.param == 0 ? (bound + 1) / 2 : bound / 2;
    case BaseKind::Suffix: {
      if (b.param >= 1) {
        std::uint64_t start = 2 * static_cast<std::uint64_t>(b.param);
        return bound < start ? 0 : (bound - start) / 2 + 1;
      }
      std::uint64_t m = 2 * static_cast<std::uint64_t>(-b.param) + 1;
      return bound <= m ? bound : m + bound / 2 - (m - 1) / 2;
    }
  }
  return 0;
}

// Cursor over an Fms that can start past a given id.
class SkippingCursor {
public:
  SkippingCursor(const Fms& s, std::uint64_t start_after_id) : s_(&s) {
    base_rank_ = base_rank_upto(s.base(), start_after_id);
    auto add = s.add().elems();
    add_pos_ = std::upper_bound(add.begin(), add.end(), Elem{start_after_id}) - add.begin();
  }

  std::optional<Elem> next() {
    const auto& add = s_->add();
    for (;;) {
      std::optional<Elem> from_base;
      if (!base_is_empty(s_->base())) from_base = base_kth(s_->base(), base_rank_ + 1);
      std::optional<Elem> from_add;
      if (add_pos_ < add.size()) from_add = add.elems()[add_pos_];
      if (!from_base && !from_add) return std::nullopt;
      if (from_add && (!from_base || *from_add < *from_base)) {
        ++add_pos_;
        return *from_add;
      }
      ++base_rank_;
      if (!s_->sub().contains(*from_base)) return *from_base;
    }
  }

private:
  const Fms* s_;
  std::uint64_t base_rank_ = 0;
  std::size_t add_pos_ = 0;
};

} // namespace

void SupportView::require_defined() const {
  if (!defined())
    raise(ErrorKind::UndefinedSupport, "operation on an undefined support");
}

bool SupportView::contains(Elem e) const {
  require_defined();
  if (e.id <= removed_prefix_) return false;
  if (removed_seen_ && removed_seen_->contains(e)) return false;
  return language_->member(e);
}

Cardinality SupportView::cardinality() const {
  require_defined();
  if (language_->cardinality().is_infinite()) return Cardinality::infinite();
  std::uint64_t n = 0;
  for (Elem e : language_->add())
    if (contains(e)) ++n;
  return Cardinality::finite(n);
}

std::optional<Elem> SupportView::kth(std::uint64_t k) const {
  require_defined();
  SkippingCursor cursor(*language_, removed_prefix_);
  for (;;) {
    auto e = cursor.next();
    if (!e) return std::nullopt;
    if (removed_seen_ && removed_seen_->contains(*e)) continue;
    if (--k == 0) return e;
  }
}

std::optional<Elem> SupportView::first() const { return kth(1); }

std::vector<Elem> SupportView::enumerate(std::uint64_t horizon) const {
  require_defined();
  std::vector<Elem> out;
  SkippingCursor cursor(*language_, removed_prefix_);
  while (out.size() < horizon) {
    auto e = cursor.next();
    if (!e) break;
    if (removed_seen_ && removed_seen_->contains(*e)) continue;
    out.push_back(*e);
  }
  return out;
}

Fms SupportView::materialize() const {
  require_defined();
  std::vector<Elem> removed;
  removed.reserve(removed_prefix_ + (removed_seen_ ? removed_seen_->size() : 0));
  for (std::uint64_t id = 1; id <= removed_prefix_; ++id) removed.push_back(Elem{id});
  FiniteSet minus(std::move(removed));
  if (removed_seen_) minus = minus.set_union(removed_seen_->elems());
  return language_->modified({}, minus);
}

std::optional<Fms> Generator::descriptor() const {
  if (!view_.defined()) return std::nullopt;
  return view_.materialize();
}

EnumerationOutput Generator::enumeration_output() const {
  auto first = view_.first();
  if (!first) raise(ErrorKind::EmptySupport, "enumeration output is empty");
  return {view_.materialize(), *first};
}

bool Generator::support_equals(const std::optional<Fms>& prev_lang, std::uint64_t prev_prefix,
                               const std::optional<Fms>& cur_lang, std::uint64_t cur_prefix,
                               std::optional<Elem> just_seen, bool seen_is_removed) const {
  if (!prev_lang.has_value() || !cur_lang.has_value())
    return prev_lang.has_value() == cur_lang.has_value();

  // An infinite base difference survives the finite corrections and removals.
  BaseDiff fwd = base_difference(prev_lang->base(), cur_lang->base());
  BaseDiff bwd = base_difference(cur_lang->base(), prev_lang->base());
  if (!fwd.finite || !bwd.finite) return false;

  auto prev_seen = [&](Elem x) {
    if (!seen_is_removed) return false;
    if (just_seen && x == *just_seen) return false; // arrived only this step
    return seen_.contains(x);
  };
  auto prev_contains = [&](Elem x) {
    return prev_lang->member(x) && x.id > prev_prefix && !prev_seen(x);
  };
  auto cur_contains = [&](Elem x) {
    return cur_lang->member(x) && x.id > cur_prefix &&
           !(seen_is_removed && seen_.contains(x));
  };

  // Off these candidates both sides reduce to the shared base membership and
  // identical removal status.
  auto differs_on = [&](Elem x) { return prev_contains(x) != cur_contains(x); };
  for (Elem x : fwd.elems) if (differs_on(x)) return false;
  for (Elem x : bwd.elems) if (differs_on(x)) return false;
  for (const Fms* lang : {&*prev_lang, &*cur_lang}) {
    for (Elem x : lang->add()) if (differs_on(x)) return false;
    for (Elem x : lang->sub()) if (differs_on(x)) return false;
  }
  if (just_seen && differs_on(*just_seen)) return false;
  std::uint64_t lo = std::min(prev_prefix, cur_prefix);
  std::uint64_t hi = std::max(prev_prefix, cur_prefix);
  for (std::uint64_t id = lo + 1; id <= hi; ++id)
    if (differs_on(Elem{id})) return false;
  return true;
}

std::uint64_t geometric_half(std::mt19937_64& rng) {
  std::uint64_t k = 1;
  for (;;) {
    std::uint64_t word = rng();
    if (word != 0) return k + std::countr_zero(word);
    k += 64;
  }
}

Elem sample(const SupportView& support, std::mt19937_64& rng) {
  if (!support.defined())
    raise(ErrorKind::UndefinedSupport, "sampling from an undefined support");
  Cardinality card = support.cardinality();
  if (card == Cardinality::finite(0))
    raise(ErrorKind::EmptySupport, "sampling from an empty support");
  for (;;) {
    std::uint64_t k = geometric_half(rng);
    if (card.is_finite() && k > card.count()) continue;
    return *support.kth(k);
  }
}

namespace {

void require_cap(const Collection& c, bool flag, const char* what) {
  if (!flag)
    raise(ErrorKind::CapabilityMissing,
          std::string(to_string(c.name())) + " lacks " + what);
}

// Version-space critical list over the first `prefix` index positions:
// a consistent language is critical when it is the first consistent one or a
// subset of every consistent language before it. Returned in index order;
// successive criticals are nested decreasing.
std::vector<std::uint64_t> critical_indices(const Collection& col, const SampleSet& seen,
                                            std::uint64_t prefix) {
  std::uint64_t limit = col.index_begin() + col.index_count(prefix);
  std::vector<std::uint64_t> version_space;
  std::vector<std::uint64_t> criticals;
  std::optional<Fms> last_critical;

  for (auto i = col.next_consistent(col.index_begin(), limit, seen); i;
       i = col.next_consistent(*i + 1, limit, seen)) {
    Fms lang = col.language_at(*i);
    bool critical;
    if (version_space.empty()) {
      critical = true;
    } else if (!relate(lang, *last_critical).subset) {
      critical = false; // the last critical precedes it, so this is decisive
    } else {
      critical = true;
      for (std::uint64_t u : version_space) {
        if (!relate(lang, col.language_at(u)).subset) { critical = false; break; }
      }
    }
    version_space.push_back(*i);
    if (critical) {
      criticals.push_back(*i);
      last_critical = lang;
    }
  }
  return criticals;
}

class KmGenerator final : public Generator {
public:
  explicit KmGenerator(Collection c) : Generator(std::move(c)) {
    require_cap(collection_, collection_.capabilities().membership, "membership");
    require_cap(collection_, collection_.capabilities().subset, "subset");
  }

  GeneratorKind kind() const override { return GeneratorKind::KmSubset; }

  StepResult step(Elem x) override {
    ++steps_;
    std::optional<Elem> just = seen_.contains(x) ? std::nullopt : std::optional(x);
    seen_.insert(x);

    auto criticals = critical_indices(collection_, seen_, steps_);
    std::optional<Fms> prev = view_.language();
    StepResult r;
    if (criticals.empty()) {
      view_ = SupportView::undefined();
    } else {
      r.source_index = criticals.back(); // largest-indexed critical
      view_ = SupportView(collection_.language_at(criticals.back()), &seen_, 0);
    }
    r.support_changed = !support_equals(prev, 0, view_.language(), 0, just, true);
    return r;
  }
};

class TellTaleGenerator final : public Generator {
public:
  explicit TellTaleGenerator(Collection c) : Generator(std::move(c)) {
    require_cap(collection_, collection_.capabilities().membership, "membership");
    require_cap(collection_, collection_.capabilities().telltale_weak, "telltale_weak");
  }

  GeneratorKind kind() const override { return GeneratorKind::TellTale; }

  StepResult step(Elem x) override {
    ++steps_;
    std::optional<Elem> just = seen_.contains(x) ? std::nullopt : std::optional(x);
    seen_.insert(x);

    auto g = smallest_qualifying(collection_, seen_, steps_, TellTaleKind::Weak);
    std::optional<Fms> prev = view_.language();
    std::uint64_t prev_prefix = view_.removed_prefix();
    StepResult r;
    if (g) {
      r.source_index = *g;
      // support = L_g minus seen minus the first n canonical domain elements
      view_ = SupportView(collection_.language_at(*g), &seen_, steps_);
    } else {
      view_ = SupportView::undefined();
    }
    r.support_changed =
        !support_equals(prev, prev_prefix, view_.language(), steps_, just, true);
    return r;
  }

  // smallest index among the first `prefix` positions whose language is
  // consistent and whose tell-tale, truncated to the first `prefix` elements,
  // has already been observed
  static std::optional<std::uint64_t> smallest_qualifying(const Collection& col,
                                                          const SampleSet& seen,
                                                          std::uint64_t prefix,
                                                          TellTaleKind kind) {
    std::uint64_t limit = col.index_begin() + col.index_count(prefix);
    for (auto i = col.next_consistent(col.index_begin(), limit, seen); i;
         i = col.next_consistent(*i + 1, limit, seen)) {
      auto entry = col.telltale_entry(*i, kind);
      if (!entry) continue; // no tell-tale of this kind: the index never qualifies
      bool contained = true;
      std::uint64_t take = std::min<std::uint64_t>(prefix, entry->size());
      for (std::uint64_t k = 0; k < take; ++k)
        if (!seen.contains(entry->elems()[k])) { contained = false; break; }
      if (contained) return i;
    }
    return std::nullopt;
  }
};

class IdentifierGenerator final : public Generator {
public:
  explicit IdentifierGenerator(Collection c) : Generator(std::move(c)) {
    require_cap(collection_, collection_.capabilities().membership, "membership");
    require_cap(collection_, collection_.capabilities().telltale_strong, "telltale_strong");
  }

  GeneratorKind kind() const override { return GeneratorKind::IdentifierExact; }

  StepResult step(Elem x) override {
    ++steps_;
    std::optional<Elem> just = seen_.contains(x) ? std::nullopt : std::optional(x);
    seen_.insert(x);

    auto g = TellTaleGenerator::smallest_qualifying(collection_, seen_, steps_,
                                                    TellTaleKind::Strong);
    std::optional<Fms> prev = view_.language();
    StepResult r;
    if (g) {
      r.source_index = *g;
      r.guess = *g;
      view_ = SupportView(collection_.language_at(*g), &seen_, 0);
    } else {
      view_ = SupportView::undefined();
    }
    r.support_changed = !support_equals(prev, 0, view_.language(), 0, just, true);
    return r;
  }
};

class ExhaustiveFnGenerator final : public Generator {
public:
  explicit ExhaustiveFnGenerator(Collection c) : Generator(std::move(c)) {
    require_cap(collection_, collection_.capabilities().membership, "membership");
    require_cap(collection_, collection_.capabilities().subset, "subset");
    require_cap(collection_, collection_.capabilities().finite_difference,
                "finite_difference");
  }

  GeneratorKind kind() const override { return GeneratorKind::ExhaustiveFn; }
  bool enumerates() const override { return true; }

  StepResult step(Elem x) override {
    ++steps_;
    std::optional<Elem> just = seen_.contains(x) ? std::nullopt : std::optional(x);
    seen_.insert(x);
    std::optional<Fms> prev = view_.language();
    std::uint64_t prev_prefix = view_.removed_prefix();
    StepResult r;

    auto criticals = critical_indices(collection_, seen_, steps_);
    if (criticals.empty()) {
      view_ = SupportView(Fms::finite(FiniteSet::of_ids({1})), nullptr, 0, true);
    } else {
      std::uint64_t last = criticals.back();
      Fms last_lang = collection_.language_at(last);
      std::optional<std::uint64_t> chosen;
      for (std::uint64_t c : criticals) {
        if (c == last || relate(last_lang, collection_.language_at(c)).equal) {
          chosen = c;
          break;
        }
        if (collection_.finite_difference_oracle(last, c)) {
          chosen = c;
          break;
        }
      }
      // the last critical always qualifies, so chosen is set
      if (last_index_ != chosen) counter_ = 0;
      else ++counter_;
      last_index_ = chosen;
      r.source_index = *chosen;
      // stream = L_chosen minus the sentinel and the first counter_ elements
      view_ = SupportView(collection_.language_at(*chosen), nullptr, counter_);
    }
    r.support_changed =
        !support_equals(prev, prev_prefix, view_.language(), view_.removed_prefix(),
                        just, false);
    return r;
  }

private:
  std::optional<std::uint64_t> last_index_;
  std::uint64_t counter_ = 0;
};

class TellTaleExhaustiveGenerator final : public Generator {
public:
  explicit TellTaleExhaustiveGenerator(Collection c) : Generator(std::move(c)) {
    require_cap(collection_, collection_.capabilities().membership, "membership");
    require_cap(collection_, collection_.capabilities().telltale_weak, "telltale_weak");
  }

  GeneratorKind kind() const override { return GeneratorKind::TellTaleExhaustive; }
  bool enumerates() const override { return true; }

  StepResult step(Elem x) override {
    ++steps_;
    std::optional<Elem> just = seen_.contains(x) ? std::nullopt : std::optional(x);
    seen_.insert(x);
    std::optional<Fms> prev = view_.language();
    std::uint64_t prev_prefix = view_.removed_prefix();
    StepResult r;

    auto g = TellTaleGenerator::smallest_qualifying(collection_, seen_, steps_,
                                                    TellTaleKind::Weak);
    if (g) {
      if (last_index_ != g) counter_ = 0;
      else ++counter_;
      last_index_ = g;
      r.source_index = *g;
      view_ = SupportView(collection_.language_at(*g), nullptr, counter_);
    } else {
      view_ = SupportView(Fms::finite(FiniteSet::of_ids({1})), nullptr, 0, true);
    }
    r.support_changed =
        !support_equals(prev, prev_prefix, view_.language(), view_.removed_prefix(),
                        just, false);
    return r;
  }

private:
  std::optional<std::uint64_t> last_index_;
  std::uint64_t counter_ = 0;
};

class ClosureStableGenerator final : public Generator {
public:
  ClosureStableGenerator(Collection c, std::uint64_t closure_dim)
      : Generator(std::move(c)), dim_(closure_dim) {
    require_cap(collection_, collection_.capabilities().membership, "membership");
    require_cap(collection_, collection_.capabilities().vsi, "vsi");
  }

  GeneratorKind kind() const override { return GeneratorKind::ClosureStable; }

  StepResult step(Elem x) override {
    ++steps_;
    seen_.insert(x);
    StepResult r;
    bool was_frozen = frozen_.has_value();
    if (!frozen_ && seen_.size() >= dim_ + 1) {
      frozen_ = collection_.vsi_support(seen_.elems());
      view_ = SupportView(*frozen_, nullptr, 0);
    }
    r.support_changed = !was_frozen && frozen_.has_value();
    return r;
  }

private:
  std::uint64_t dim_;
  std::optional<Fms> frozen_;
};

class SuffixIncreasingGenerator final : public Generator {
public:
  explicit SuffixIncreasingGenerator(Collection c) : Generator(std::move(c)) {
    if (collection_.name() != CollectionName::Suffixes)
      raise(ErrorKind::WrongCollection,
            "the increasing-coverage generator is defined over SUFFIXES only");
  }

  GeneratorKind kind() const override { return GeneratorKind::SuffixIncreasing; }

  StepResult step(Elem x) override {
    ++steps_;
    seen_.insert(x);
    std::int64_t m = seen_.min_decoded();
    StepResult r;
    r.support_changed = !min_ || *min_ != m;
    min_ = m;
    view_ = SupportView(Fms(make_base(BaseKind::Suffix, m)), nullptr, 0);
    return r;
  }

private:
  std::optional<std::int64_t> min_;
};

} // namespace

std::unique_ptr<Generator> make_generator(GeneratorKind kind, const Collection& c,
                                          const GeneratorParams& params) {
  switch (kind) {
    case GeneratorKind::KmSubset:
      return std::make_unique<KmGenerator>(c);
    case GeneratorKind::TellTale:
      return std::make_unique<TellTaleGenerator>(c);
    case GeneratorKind::ExhaustiveFn:
      return std::make_unique<ExhaustiveFnGenerator>(c);
    case GeneratorKind::TellTaleExhaustive:
      return std::make_unique<TellTaleExhaustiveGenerator>(c);
    case GeneratorKind::ClosureStable:
      if (!params.closure_dim)
        raise(ErrorKind::Config,
              "CLOSURE_STABLE needs the collection's closure dimension");
      return std::make_unique<ClosureStableGenerator>(c, *params.closure_dim);
    case GeneratorKind::SuffixIncreasing:
      return std::make_unique<SuffixIncreasingGenerator>(c);
    case GeneratorKind::IdentifierExact:
      return std::make_unique<IdentifierGenerator>(c);
  }
  raise(ErrorKind::Config, "unknown generator kind");
}

} // namespace genlim
