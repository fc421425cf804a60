#include "genlim/adversaries.hpp"

#include <deque>

namespace genlim {

const std::vector<PhaseRecord> Adversary::empty_log_{};

const char* to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::Canonical: return "CANONICAL";
    case AdversaryKind::Iid: return "IID";
    case AdversaryKind::LbPhase: return "LB_PHASE";
    case AdversaryKind::StableCoverage: return "STABLE_COVERAGE";
  }
  return "?";
}

const char* to_string(BreadthPredicate pred) {
  switch (pred) {
    case BreadthPredicate::Exact: return "EXACT";
    case BreadthPredicate::Approx: return "APPROX";
    case BreadthPredicate::Exhaustive: return "EXHAUSTIVE";
    case BreadthPredicate::ExhaustiveVariant: return "EXHAUSTIVE_VARIANT";
    case BreadthPredicate::Unambiguous: return "UNAMBIGUOUS";
  }
  return "?";
}

std::optional<AdversaryKind> adversary_from_string(const std::string& s) {
  if (s == "CANONICAL") return AdversaryKind::Canonical;
  if (s == "IID") return AdversaryKind::Iid;
  if (s == "LB_PHASE") return AdversaryKind::LbPhase;
  if (s == "STABLE_COVERAGE") return AdversaryKind::StableCoverage;
  return std::nullopt;
}

std::optional<BreadthPredicate> predicate_from_string(const std::string& s) {
  if (s == "EXACT") return BreadthPredicate::Exact;
  if (s == "APPROX") return BreadthPredicate::Approx;
  if (s == "EXHAUSTIVE") return BreadthPredicate::Exhaustive;
  if (s == "EXHAUSTIVE_VARIANT") return BreadthPredicate::ExhaustiveVariant;
  if (s == "UNAMBIGUOUS") return BreadthPredicate::Unambiguous;
  return std::nullopt;
}

TellTaleKind witness_kind_for(BreadthPredicate pred) {
  switch (pred) {
    case BreadthPredicate::Exact:
    case BreadthPredicate::Unambiguous:
      return TellTaleKind::Strong;
    default:
      return TellTaleKind::Weak;
  }
}

bool predicate_holds(BreadthPredicate pred, const DuelView& view, const Collection& c,
                     std::uint64_t target_index, const Fms& target,
                     const SampleSet& seen, std::uint64_t seen_outside_target,
                     std::uint64_t rival_bound) {
  const SupportView& sv = view.generator->support();
  static const FiniteSet no_firsts;
  const FiniteSet& firsts = view.prior_firsts ? *view.prior_firsts : no_firsts;
  switch (pred) {
    case BreadthPredicate::Exact:
      return holds_exact(sv, target, seen, seen_outside_target);
    case BreadthPredicate::Approx:
      return holds_approximate(sv, target);
    case BreadthPredicate::Exhaustive:
      return holds_exhaustive(sv, firsts, target, seen,
                              ExhaustiveVariant::FiniteHallucination);
    case BreadthPredicate::ExhaustiveVariant:
      return holds_exhaustive(sv, firsts, target, seen,
                              ExhaustiveVariant::NoHallucination);
    case BreadthPredicate::Unambiguous:
      return holds_unambiguous(sv, c, target_index, rival_bound);
  }
  return false;
}

namespace {

class CanonicalAdversary final : public Adversary {
public:
  CanonicalAdversary(const Collection& c, std::uint64_t target, std::uint64_t repeat)
      : target_(target), lang_(c.language_at(target)), cursor_(lang_),
        repeat_(repeat ? repeat : 1) {}

  AdversaryKind kind() const override { return AdversaryKind::Canonical; }
  std::uint64_t committed_target() const override { return target_; }

  Elem next(const DuelView&) override {
    if (!current_ || emitted_count_ == repeat_) {
      current_ = cursor_.next(); // target languages are infinite
      emitted_count_ = 0;
    }
    ++emitted_count_;
    return record(*current_);
  }

private:
  std::uint64_t target_;
  Fms lang_;
  FmsCursor cursor_;
  std::uint64_t repeat_;
  std::optional<Elem> current_;
  std::uint64_t emitted_count_ = 0;
};

class IidAdversary final : public Adversary {
public:
  IidAdversary(const Collection& c, std::uint64_t target, std::uint64_t seed)
      : target_(target), lang_(c.language_at(target)), rng_(seed) {}

  AdversaryKind kind() const override { return AdversaryKind::Iid; }
  std::uint64_t committed_target() const override { return target_; }

  Elem next(const DuelView&) override {
    std::uint64_t k = geometric_half(rng_);
    return record(lang_.kth(k));
  }

private:
  std::uint64_t target_;
  Fms lang_;
  std::mt19937_64 rng_;
};

// The phased lower-bound construction: enumerate a contrapositive witness
// until the generator achieves the requested breadth predicate on it, then
// re-emit anything skipped (or step outside the witness), pick a fresh
// witness from the enlarged prefix, repeat. A subphase that exceeds its step
// budget becomes a reported stall with the witness as the committed target.
class LbPhaseAdversary final : public Adversary {
public:
  LbPhaseAdversary(const Collection& c, std::uint64_t star, BreadthPredicate pred,
                   std::uint64_t budget, std::uint64_t rival_bound)
      : collection_(c), star_(star), pred_(pred), budget_(budget),
        rival_bound_(rival_bound), star_lang_(c.language_at(star)),
        estar_(star_lang_) {
    // fail fast when the star index has no declared witness rule
    violation_witness(collection_, star_, FiniteSet({star_lang_.kth(1)}),
                      witness_kind_for(pred_));
  }

  AdversaryKind kind() const override { return AdversaryKind::LbPhase; }
  std::uint64_t phase() const override { return phase_; }
  char subphase() const override { return mode_; }
  std::uint64_t closed_phases() const override { return closed_phases_; }
  const std::vector<PhaseRecord>& phase_log() const override { return log_; }
  std::uint64_t committed_target() const override {
    return stall_ ? stall_->committed_target : star_;
  }

  Elem next(const DuelView& view) override {
    if (stall_) return record(next_estar_in_witness());

    if (phase_ == 0) {
      phase_ = 1;
      Elem seed = next_estar();
      Elem out = record(seed);
      open_phase(steps_); // the seed is the first element of phase 1
      ++subphase_steps_;
      return out;
    }

    if (mode_ == 'A') {
      if (steps_ >= log_.back().opened_at &&
          predicate_holds(pred_, view, collection_, witness_index_, witness_lang_,
                          emitted_, 0, rival_bound_)) {
        // subphase A ends at the current prefix
        log_.back().pred_held_at = steps_;
        if (!skipped_.empty()) {
          mode_ = '1';
          for (Elem e : skipped_) pending_.push_back(e);
          skipped_.clear();
        } else {
          mode_ = '2';
        }
      } else {
        if (subphase_steps_ >= budget_) {
          stall_ = StallReport{"predicate never held for the phase witness within budget",
                               phase_, witness_index_, steps_};
          return record(next_estar_in_witness());
        }
        ++subphase_steps_;
        return record(next_estar_in_witness());
      }
    }

    if (mode_ == '1') {
      Elem e = pending_.front();
      pending_.pop_front();
      Elem out = record(e);
      if (pending_.empty()) close_phase();
      return out;
    }

    // subphase B.2: walk the star enumeration until an element escapes the
    // witness; everything on the way is part of the target enumeration
    Elem e = next_estar();
    Elem out = record(e);
    if (!witness_lang_.member(e)) close_phase();
    return out;
  }

private:
  Elem next_estar() {
    auto e = estar_.next();
    return *e; // the star language is infinite
  }

  Elem next_estar_in_witness() {
    for (;;) {
      Elem e = next_estar();
      if (witness_lang_.member(e)) return e;
      if (!stall_) skipped_.push_back(e);
    }
  }

  void open_phase(std::uint64_t opened_at) {
    witness_index_ = violation_witness(collection_, star_, emitted_.elems(),
                                       witness_kind_for(pred_));
    witness_lang_ = collection_.language_at(witness_index_);
    skipped_.clear();
    subphase_steps_ = 0;
    mode_ = 'A';
    log_.push_back(PhaseRecord{phase_, witness_index_, opened_at, 0, 0});
  }

  void close_phase() {
    log_.back().closed_at = steps_;
    ++closed_phases_;
    ++phase_;
    open_phase(steps_ + 1);
  }

  Collection collection_;
  std::uint64_t star_;
  BreadthPredicate pred_;
  std::uint64_t budget_;
  std::uint64_t rival_bound_;
  Fms star_lang_;
  FmsCursor estar_;

  std::uint64_t phase_ = 0;
  char mode_ = 'A';
  std::uint64_t witness_index_ = 0;
  Fms witness_lang_;
  std::vector<Elem> skipped_; // ascending: the star enumeration is canonical
  std::deque<Elem> pending_;
  std::uint64_t subphase_steps_ = 0;
  std::uint64_t closed_phases_ = 0;
  std::vector<PhaseRecord> log_;
};

// Anti-stability construction over SINGLE_REMOVAL: run the naturals in order
// until the support goes infinite, hold back the smallest support element
// beyond the current prefix, and keep feeding consecutive naturals until the
// support both changes and is infinite again; then release the held-out
// element and start over. A stage that exhausts its budget certifies one of
// the two failure modes.
class StableCoverageAdversary final : public Adversary {
public:
  StableCoverageAdversary(const Collection& c, std::uint64_t budget)
      : collection_(c), budget_(budget) {
    if (c.name() != CollectionName::SingleRemoval)
      raise(ErrorKind::WrongCollection,
            "the stable-coverage adversary runs over SINGLE_REMOVAL");
  }

  AdversaryKind kind() const override { return AdversaryKind::StableCoverage; }
  std::uint64_t phase() const override { return phase_; }
  char subphase() const override { return seeking_change_ ? 'B' : 'A'; }
  std::uint64_t closed_phases() const override { return closed_phases_; }
  const std::vector<PhaseRecord>& phase_log() const override { return log_; }
  std::uint64_t committed_target() const override {
    return stall_ ? stall_->committed_target : 0;
  }

  Elem next(const DuelView& view) override {
    const SupportView& sv = view.generator->support();
    if (view.last_step && view.last_step->support_changed) changed_since_mark_ = true;

    if (!stall_) {
      bool infinite = sv.defined() && sv.cardinality().is_infinite();
      if (!seeking_change_) {
        if (infinite) {
          std::uint64_t v = steps_ + 1;
          while (!sv.contains(Elem{v})) ++v;
          heldout_ = v;
          mark_ = sv.materialize();
          changed_since_mark_ = false;
          seeking_change_ = true;
          stage_steps_ = 0;
          log_.push_back(PhaseRecord{phase_, v, steps_ + 1, 0, 0});
        } else if (++stage_steps_ > budget_) {
          stall_ = StallReport{"support never infinite", phase_, 0, steps_};
        }
      } else {
        if (infinite && changed_since_mark_ && *mark_ != sv.materialize()) {
          // phase closes: release the held-out element
          log_.back().closed_at = steps_ + 1;
          ++closed_phases_;
          ++phase_;
          seeking_change_ = false;
          stage_steps_ = 0;
          std::uint64_t h = *heldout_;
          heldout_.reset();
          mark_.reset();
          return record(Elem{h});
        }
        if (++stage_steps_ > budget_) {
          stall_ = StallReport{"support never changed while infinite", phase_,
                               *heldout_, steps_};
        }
      }
    }

    if (heldout_ && next_value_ == *heldout_) ++next_value_;
    return record(Elem{next_value_++});
  }

private:
  Collection collection_;
  std::uint64_t budget_;
  bool seeking_change_ = false;
  std::uint64_t next_value_ = 1;
  std::optional<std::uint64_t> heldout_;
  std::optional<Fms> mark_;
  bool changed_since_mark_ = false;
  std::uint64_t stage_steps_ = 0;
  std::uint64_t phase_ = 1;
  std::uint64_t closed_phases_ = 0;
  std::vector<PhaseRecord> log_;
};

} // namespace

std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, const Collection& c,
                                          const AdversaryParams& params) {
  switch (kind) {
    case AdversaryKind::Canonical:
      if (!params.target) raise(ErrorKind::Config, "canonical adversary needs a target");
      return std::make_unique<CanonicalAdversary>(c, *params.target, params.repeat);
    case AdversaryKind::Iid:
      if (!params.target) raise(ErrorKind::Config, "iid adversary needs a target");
      return std::make_unique<IidAdversary>(c, *params.target, params.seed);
    case AdversaryKind::LbPhase:
      if (!params.star) raise(ErrorKind::Config, "lb_phase adversary needs a star index");
      return std::make_unique<LbPhaseAdversary>(c, *params.star, params.predicate,
                                                params.budget, params.rival_bound);
    case AdversaryKind::StableCoverage:
      return std::make_unique<StableCoverageAdversary>(c, params.budget);
  }
  raise(ErrorKind::Config, "unknown adversary kind");
}

} // namespace genlim
