#pragma once

#include "genlim/breadth.hpp"
#include "genlim/conditions.hpp"

namespace genlim {

enum class AdversaryKind { Canonical, Iid, LbPhase, StableCoverage };
enum class BreadthPredicate { Exact, Approx, Exhaustive, ExhaustiveVariant, Unambiguous };

const char* to_string(AdversaryKind kind);
const char* to_string(BreadthPredicate pred);
std::optional<AdversaryKind> adversary_from_string(const std::string& s);
std::optional<BreadthPredicate> predicate_from_string(const std::string& s);

// Predicates built on strong contrapositive witnesses versus weak ones.
TellTaleKind witness_kind_for(BreadthPredicate pred);

// What the adaptive adversaries may inspect: the opposing generator's exact
// support (a strictly stronger contract than decidable membership alone, and
// the price of making the constructions computable) plus the first elements
// of its earlier enumeration outputs.
struct DuelView {
  const Generator* generator = nullptr;
  const FiniteSet* prior_firsts = nullptr;
  const StepResult* last_step = nullptr; // generator's previous step outcome
};

struct PhaseRecord {
  std::uint64_t phase = 0;
  std::uint64_t witness_index = 0;
  std::uint64_t opened_at = 0; // first step of the phase
  std::uint64_t closed_at = 0; // step whose emission completed the phase, 0 while open
  std::uint64_t pred_held_at = 0; // step at which the predicate held for the witness
};

struct StallReport {
  std::string reason;
  std::uint64_t phase = 0;
  std::uint64_t committed_target = 0; // index of the target certifying the failure
  std::uint64_t at_step = 0;
};

class Adversary {
public:
  virtual ~Adversary() = default;
  virtual Elem next(const DuelView& view) = 0;
  virtual AdversaryKind kind() const = 0;

  virtual std::uint64_t phase() const { return 0; }
  virtual char subphase() const { return '-'; }
  virtual std::uint64_t closed_phases() const { return 0; }
  virtual const std::vector<PhaseRecord>& phase_log() const { return empty_log_; }
  const std::optional<StallReport>& stall() const { return stall_; }
  // Target index the run certifies against; fixed targets report themselves,
  // adaptive ones the star or the stall-committed language.
  virtual std::uint64_t committed_target() const = 0;

  const SampleSet& emitted() const { return emitted_; }
  std::uint64_t steps() const { return steps_; }

protected:
  Elem record(Elem e) {
    ++steps_;
    emitted_.insert(e);
    return e;
  }

  SampleSet emitted_;
  std::uint64_t steps_ = 0;
  std::optional<StallReport> stall_;

private:
  static const std::vector<PhaseRecord> empty_log_;
};

struct AdversaryParams {
  std::optional<std::uint64_t> target;      // canonical / iid
  std::optional<std::uint64_t> star;        // lb_phase
  BreadthPredicate predicate = BreadthPredicate::Exact;
  std::uint64_t budget = 10'000;            // per-subphase step budget
  std::uint64_t repeat = 1;                 // canonical repetition factor
  std::uint64_t rival_bound = 50;           // unambiguous predicate
  std::uint64_t seed = 0;                   // iid
};

std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, const Collection& c,
                                          const AdversaryParams& params);

// Evaluate the lower-bound predicate of an adaptive adversary against a
// candidate target language. seen_outside_target counts emitted elements the
// target misses (0 during a subphase by construction).
bool predicate_holds(BreadthPredicate pred, const DuelView& view, const Collection& c,
                     std::uint64_t target_index, const Fms& target,
                     const SampleSet& emitted, std::uint64_t seen_outside_target,
                     std::uint64_t rival_bound);

} // namespace genlim
