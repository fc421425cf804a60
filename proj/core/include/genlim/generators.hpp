#pragma once

#include <memory>
#include <random>

#include "genlim/collections.hpp"

namespace genlim {

enum class GeneratorKind {
  KmSubset,           // version-space / critical-list function, subset queries
  TellTale,           // weak-tell-tale algorithm with canonical-prefix removal
  ExhaustiveFn,       // critical-list function with finite-difference filtering
  TellTaleExhaustive, // tell-tale algorithm emitting enumerations with a reset counter
  ClosureStable,      // freezes onto the version-space intersection
  SuffixIncreasing,   // suffix collection only: support from the minimum seen
  IdentifierExact,    // strong-tell-tale identifier, support = guess minus seen
};

const char* to_string(GeneratorKind kind);
std::optional<GeneratorKind> generator_from_string(const std::string& s);

// A generator's current output, expressed without materializing the large
// subtracted sets: closed-form language, minus the shared sample set, minus
// the canonical id prefix 1..removed_prefix. Valid until the owning
// generator's next step. This closed form is what makes support membership
// decidable for every generator here.
class SupportView {
public:
  static SupportView undefined() { return SupportView{}; }
  SupportView(Fms language, const SampleSet* removed_seen, std::uint64_t removed_prefix,
              bool arbitrary = false)
      : language_(std::move(language)), removed_seen_(removed_seen),
        removed_prefix_(removed_prefix), arbitrary_(arbitrary) {}

  bool defined() const { return language_.has_value(); }
  // true when this output came from an "output an arbitrary element" branch
  bool arbitrary() const { return arbitrary_; }

  bool contains(Elem e) const;
  Cardinality cardinality() const;
  std::optional<Elem> first() const;
  // k-th element of the support in canonical order; nullopt when the support
  // has fewer than k elements.
  std::optional<Elem> kth(std::uint64_t k) const;
  std::vector<Elem> enumerate(std::uint64_t horizon) const;
  // Normal-form snapshot; costs the size of the removed sets.
  Fms materialize() const;

  const std::optional<Fms>& language() const { return language_; }
  std::uint64_t removed_prefix() const { return removed_prefix_; }
  const SampleSet* removed_seen() const { return removed_seen_; }

private:
  SupportView() = default;
  void require_defined() const;

  std::optional<Fms> language_;
  const SampleSet* removed_seen_ = nullptr;
  std::uint64_t removed_prefix_ = 0;
  bool arbitrary_ = false;
};

struct EnumerationOutput {
  Fms stream;
  Elem first;
};

struct StepResult {
  bool support_changed = false;                // exact structural comparison
  std::optional<std::uint64_t> source_index;   // language index behind the support
  std::optional<std::uint64_t> guess;          // identifier's index guess
};

struct GeneratorParams {
  std::optional<std::uint64_t> closure_dim; // required by ClosureStable
};

class Generator {
public:
  virtual ~Generator() = default;

  virtual StepResult step(Elem x) = 0;
  virtual GeneratorKind kind() const = 0;
  // true when outputs are enumeration streams rather than sampling supports
  virtual bool enumerates() const { return false; }

  const SupportView& support() const { return view_; }
  // The spec-level descriptor: a normal-form set, or nothing when undefined.
  std::optional<Fms> descriptor() const;
  EnumerationOutput enumeration_output() const; // enumeration generators only

  const Collection& collection() const { return collection_; }
  const SampleSet& seen() const { return seen_; }
  std::uint64_t steps() const { return steps_; }

protected:
  explicit Generator(Collection collection)
      : collection_(std::move(collection)), view_(SupportView::undefined()) {}

  // exact equality check between the previous and the new support, where the
  // sample set may have grown by just_seen since the previous one
  bool support_equals(const std::optional<Fms>& prev_lang, std::uint64_t prev_prefix,
                      const std::optional<Fms>& cur_lang, std::uint64_t cur_prefix,
                      std::optional<Elem> just_seen, bool seen_is_removed) const;

  Collection collection_;
  SampleSet seen_;
  std::uint64_t steps_ = 0;
  SupportView view_;
};

std::unique_ptr<Generator> make_generator(GeneratorKind kind, const Collection& c,
                                          const GeneratorParams& params = {});

// Geometric(1/2) on {1, 2, ...}; consumes the engine's standardized bit
// stream, so sequences are reproducible across platforms.
std::uint64_t geometric_half(std::mt19937_64& rng);

// Draw the k-th support element with k geometric(1/2); redraws k when it
// exceeds a finite support's size. Raises EmptySupport / UndefinedSupport.
Elem sample(const SupportView& support, std::mt19937_64& rng);

} // namespace genlim
