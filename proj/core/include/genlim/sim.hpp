#pragma once

#include <map>

#include "genlim/adversaries.hpp"

namespace genlim {

// Breadth notions the duel driver can track per step. EXHAUSTIVE_VARIANT is
// the zero-hallucination form of exhaustive generation;
// INFINITE_COVERAGE_SEEN_OK drops the disjointness clause (the equivalent
// form used by the increasing-coverage construction).
enum class Notion {
  Exact,
  Approx,
  Exhaustive,
  ExhaustiveVariant,
  Unambiguous,
  InfiniteCoverage,
  InfiniteCoverageSeenOk,
  IncreasingCoverage,
};

const char* to_string(Notion n);
std::optional<Notion> notion_from_string(const std::string& s);

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::KmSubset;
  std::optional<std::uint64_t> closure_dim;
};

struct DuelConfig {
  CollectionName collection = CollectionName::SingleRemoval;
  GeneratorConfig generator;
  AdversaryKind adversary = AdversaryKind::Canonical;
  AdversaryParams adversary_params;
  std::vector<Notion> notions;                 // first entry drives the counters
  std::optional<std::uint64_t> notion_target;  // defaults to the adversary's target
  std::uint64_t horizon = 10'000;
  std::uint64_t seed = 0;
  std::optional<std::vector<std::uint64_t>> checkpoints; // defaults per policy
  std::vector<std::string> disabled_capabilities;
};

struct StepTrace {
  std::uint64_t step = 0;
  Elem emitted{};
  std::uint64_t seen_size = 0;
  bool undefined = false;
  bool changed = false;       // support differs structurally from the previous step
  std::string descriptor;     // compact support summary
  std::optional<Elem> first;  // enumeration generators: current first element
  std::uint64_t phase = 0;
  char subphase = '-';
  std::uint8_t holds_mask = 0; // bit i: notions[i] held at this step
  std::map<Notion, BreadthVerdict> verdicts; // populated at checkpoint steps
};

struct StabilityCounters {
  std::uint64_t breadth_failures = 0; // steps where the primary notion failed
  std::uint64_t support_changes = 0;  // steps (from the second) with a changed support
};

struct RunReport {
  int schema_version = 1;
  std::string collection, generator, adversary, predicate;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  std::uint64_t target_index = 0;
  std::map<Notion, std::optional<std::uint64_t>> n_star;
  std::map<Notion, std::uint64_t> failure_counts;
  StabilityCounters counters;
  std::vector<PhaseRecord> phases;
  std::uint64_t closed_phases = 0;
  std::optional<StallReport> stall;
  std::optional<std::uint64_t> final_guess;
  std::uint64_t guess_changes = 0; // identifier runs: guess transitions after step 1
};

struct DuelResult {
  std::vector<StepTrace> traces;
  RunReport report;
};

// Lock-step duel: the adversary emits, the generator updates, every requested
// notion is evaluated each step against the target language, full verdict
// panels are recorded at checkpoint steps. Deterministic given the seed.
DuelResult run_duel(const DuelConfig& cfg);

StabilityCounters stability_counters(std::span<const StepTrace> traces);

struct RatePoint {
  std::uint64_t n = 0;
  double error = 0.0;
};

// Empirical failure frequency of the notion at each grid step over seeded
// i.i.d. runs (the adversary of cfg should be the iid one).
std::vector<RatePoint> estimate_error_rate(const DuelConfig& cfg, Notion notion,
                                           std::uint64_t trials,
                                           std::span<const std::uint64_t> n_grid);

// Every step up to 1000, then powers of two, plus the horizon itself.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Serialization. Trace files are JSON lines: a meta record first, then one
// record per step. Reports and certificates are single JSON documents. All
// schemas carry schema_version.
std::string to_jsonl(const DuelConfig& cfg, const DuelResult& result);
std::string to_json(const RunReport& report);
std::string to_json(const ConditionCertificate& cert, CollectionName collection,
                    const SearchBounds& bounds);
std::string to_json(const ClosureDimension& dim, CollectionName collection,
                    const SearchBounds& bounds);
std::string to_json(std::span<const RatePoint> table, Notion notion,
                    std::uint64_t trials);

// Re-summarization of a stored trace file (the `report` CLI path): recomputes
// counters and n* for the primary notion from the per-step records.
struct TraceSummary {
  std::uint64_t steps = 0;
  StabilityCounters counters;
  std::optional<std::uint64_t> primary_n_star;
  std::uint64_t max_phase = 0;
};
TraceSummary summarize_trace_file(const std::string& jsonl);

} // namespace genlim
