#include "genlim/sim.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace genlim {

using nlohmann::json;

const char* to_string(Notion n) {
  switch (n) {
    case Notion::Exact: return "EXACT";
    case Notion::Approx: return "APPROX";
    case Notion::Exhaustive: return "EXHAUSTIVE";
    case Notion::ExhaustiveVariant: return "EXHAUSTIVE_VARIANT";
    case Notion::Unambiguous: return "UNAMBIGUOUS";
    case Notion::InfiniteCoverage: return "INFINITE_COVERAGE";
    case Notion::InfiniteCoverageSeenOk: return "INFINITE_COVERAGE_SEEN_OK";
    case Notion::IncreasingCoverage: return "INCREASING_COVERAGE";
  }
  return "?";
}

std::optional<Notion> notion_from_string(const std::string& s) {
  for (Notion n : {Notion::Exact, Notion::Approx, Notion::Exhaustive,
                   Notion::ExhaustiveVariant, Notion::Unambiguous,
                   Notion::InfiniteCoverage, Notion::InfiniteCoverageSeenOk,
                   Notion::IncreasingCoverage})
    if (s == to_string(n)) return n;
  return std::nullopt;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  };
  return splitmix(seed ^ splitmix(index));
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = 1; t <= std::min<std::uint64_t>(horizon, 1000); ++t)
    out.push_back(t);
  for (std::uint64_t t = 2048; t < horizon; t *= 2) out.push_back(t);
  if (horizon > 1000) out.push_back(horizon);
  return out;
}

namespace {

Capabilities masked_capabilities(const std::vector<std::string>& disabled) {
  Capabilities caps;
  for (const std::string& name : disabled) {
    if (name == "membership") caps.membership = false;
    else if (name == "subset") caps.subset = false;
    else if (name == "finite_difference") caps.finite_difference = false;
    else if (name == "telltale_strong") caps.telltale_strong = false;
    else if (name == "telltale_weak") caps.telltale_weak = false;
    else if (name == "vsi") caps.vsi = false;
    else raise(ErrorKind::Config, "unknown capability '" + name + "'");
  }
  return caps;
}

std::string summarize_support(const SupportView& sv) {
  if (!sv.defined()) return "UNDEFINED";
  std::ostringstream os;
  os << describe(*sv.language());
  if (sv.removed_prefix() > 0) os << " \\[1.." << sv.removed_prefix() << "]";
  if (sv.removed_seen()) os << " \\seen(" << sv.removed_seen()->size() << ")";
  return os.str();
}

struct NotionEvaluator {
  const Collection& col;
  const Fms& target;
  std::uint64_t target_index;
  std::uint64_t rival_bound;

  // running state maintained by the duel loop
  std::uint64_t seen_outside_target = 0;
  FiniteSet prior_firsts;
  std::vector<Fms> history; // materialized snapshots, when increasing coverage is tracked
  bool nesting_broken = false;

  bool fast(Notion n, const Generator& gen) const {
    const SupportView& sv = gen.support();
    switch (n) {
      case Notion::Exact:
        return holds_exact(sv, target, gen.seen(), seen_outside_target);
      case Notion::Approx:
        return holds_approximate(sv, target);
      case Notion::Exhaustive:
        return holds_exhaustive(sv, prior_firsts, target, gen.seen(),
                                ExhaustiveVariant::FiniteHallucination);
      case Notion::ExhaustiveVariant:
        return holds_exhaustive(sv, prior_firsts, target, gen.seen(),
                                ExhaustiveVariant::NoHallucination);
      case Notion::Unambiguous:
        return holds_unambiguous(sv, col, target_index, rival_bound);
      case Notion::InfiniteCoverage:
        return holds_infinite_coverage(sv, target, gen.seen(), false);
      case Notion::InfiniteCoverageSeenOk:
        return holds_infinite_coverage(sv, target, gen.seen(), true);
      case Notion::IncreasingCoverage:
        // nested so far and currently sitting on the target
        return !nesting_broken && !history.empty() && relate(history.back(), target).equal;
    }
    return false;
  }

  BreadthVerdict full(Notion n, const Generator& gen) const {
    const SupportView& sv = gen.support();
    BreadthVerdict undefined_verdict;
    switch (n) {
      case Notion::Exact:
        if (!sv.defined()) return undefined_verdict;
        return check_exact(sv.materialize(), target, gen.seen().elems());
      case Notion::Approx:
        if (!sv.defined()) return undefined_verdict;
        return check_approximate(sv.materialize(), target);
      case Notion::Exhaustive:
      case Notion::ExhaustiveVariant:
        if (!sv.defined()) return undefined_verdict;
        return check_exhaustive(sv.materialize(), prior_firsts, target,
                                gen.seen().elems(),
                                n == Notion::Exhaustive
                                    ? ExhaustiveVariant::FiniteHallucination
                                    : ExhaustiveVariant::NoHallucination);
      case Notion::Unambiguous:
        if (!sv.defined()) return undefined_verdict;
        return check_unambiguous(sv.materialize(), col, target_index, rival_bound);
      case Notion::InfiniteCoverage:
        if (!sv.defined()) return undefined_verdict;
        return check_infinite_coverage(sv.materialize(), target, gen.seen().elems());
      case Notion::InfiniteCoverageSeenOk:
        if (!sv.defined()) return undefined_verdict;
        return check_infinite_coverage(sv.materialize(), target, FiniteSet{});
      case Notion::IncreasingCoverage:
        return check_increasing_coverage(history, target);
    }
    return undefined_verdict;
  }
};

bool tracks(const std::vector<Notion>& notions, Notion n) {
  return std::find(notions.begin(), notions.end(), n) != notions.end();
}

} // namespace

DuelResult run_duel(const DuelConfig& cfg) {
  if (cfg.horizon < 1) raise(ErrorKind::Config, "horizon must be >= 1");
  if (cfg.notions.size() > 8) raise(ErrorKind::Config, "at most 8 notions per duel");

  Collection col = Collection::builtin(cfg.collection);
  if (!cfg.disabled_capabilities.empty())
    col = col.with_capabilities(masked_capabilities(cfg.disabled_capabilities));

  GeneratorParams gen_params{cfg.generator.closure_dim};
  auto gen = make_generator(cfg.generator.kind, col, gen_params);
  AdversaryParams adv_params = cfg.adversary_params;
  adv_params.seed = derive_seed(cfg.seed, 0);
  auto adv = make_adversary(cfg.adversary, col, adv_params);

  std::uint64_t target_index = cfg.notion_target.value_or(adv->committed_target());
  Fms target = col.language_at(target_index);

  std::vector<std::uint64_t> checkpoints =
      cfg.checkpoints ? *cfg.checkpoints : default_checkpoints(cfg.horizon);
  std::sort(checkpoints.begin(), checkpoints.end());
  std::size_t next_checkpoint = 0;

  NotionEvaluator eval{col, target, target_index, adv_params.rival_bound,
                       0, {}, {}, false};
  bool track_history = tracks(cfg.notions, Notion::IncreasingCoverage);

  DuelResult result;
  result.traces.reserve(cfg.horizon);
  std::map<Notion, std::uint64_t> last_fail;
  std::map<Notion, std::uint64_t> fail_count;
  StepResult last_step{};
  std::optional<std::uint64_t> last_guess;
  std::uint64_t guess_changes = 0;

  for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
    DuelView view{gen.get(), &eval.prior_firsts, t == 1 ? nullptr : &last_step};
    Elem x = adv->next(view);
    if (!target.member(x)) ++eval.seen_outside_target;
    StepResult prev_step = last_step;
    last_step = gen->step(x);
    if (t >= 2 && last_step.guess != prev_step.guess) ++guess_changes;
    if (last_step.guess) last_guess = last_step.guess;

    const SupportView& sv = gen->support();
    if (track_history && sv.defined()) {
      Fms snapshot = sv.materialize();
      if (!eval.history.empty() && !relate(eval.history.back(), snapshot).subset)
        eval.nesting_broken = true;
      eval.history.push_back(std::move(snapshot));
    }

    StepTrace trace;
    trace.step = t;
    trace.emitted = x;
    trace.seen_size = gen->seen().size();
    trace.undefined = !sv.defined();
    trace.changed = last_step.support_changed;
    trace.descriptor = summarize_support(sv);
    if (gen->enumerates() && sv.defined()) trace.first = sv.first();
    trace.phase = adv->phase();
    trace.subphase = adv->subphase();

    for (std::size_t i = 0; i < cfg.notions.size(); ++i) {
      bool holds = eval.fast(cfg.notions[i], *gen);
      if (holds) trace.holds_mask |= static_cast<std::uint8_t>(1u << i);
      else {
        ++fail_count[cfg.notions[i]];
        last_fail[cfg.notions[i]] = t;
      }
    }
    if (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == t) {
      ++next_checkpoint;
      for (Notion n : cfg.notions) trace.verdicts[n] = eval.full(n, *gen);
    }
    // the current first element becomes a prior first for later steps
    if (gen->enumerates() && sv.defined()) {
      if (auto f = sv.first()) eval.prior_firsts.insert(*f);
    }
    result.traces.push_back(std::move(trace));
  }

  RunReport& report = result.report;
  report.collection = to_string(cfg.collection);
  report.generator = to_string(cfg.generator.kind);
  report.adversary = to_string(cfg.adversary);
  if (cfg.adversary == AdversaryKind::LbPhase)
    report.predicate = to_string(cfg.adversary_params.predicate);
  report.horizon = cfg.horizon;
  report.seed = cfg.seed;
  report.target_index = target_index;
  for (Notion n : cfg.notions) {
    auto it = last_fail.find(n);
    if (it == last_fail.end()) report.n_star[n] = 1;
    else if (it->second >= cfg.horizon) report.n_star[n] = std::nullopt;
    else report.n_star[n] = it->second + 1;
    report.failure_counts[n] = fail_count[n];
  }
  report.counters = stability_counters(result.traces);
  if (!cfg.notions.empty()) report.counters.breadth_failures = fail_count[cfg.notions[0]];
  report.phases = adv->phase_log();
  report.closed_phases = adv->closed_phases();
  report.stall = adv->stall();
  report.final_guess = last_guess;
  report.guess_changes = guess_changes;
  return result;
}

StabilityCounters stability_counters(std::span<const StepTrace> traces) {
  StabilityCounters counters;
  for (const StepTrace& t : traces) {
    if (t.step >= 2 && t.changed) ++counters.support_changes;
    if (!(t.holds_mask & 1u)) ++counters.breadth_failures;
  }
  return counters;
}

std::vector<RatePoint> estimate_error_rate(const DuelConfig& cfg, Notion notion,
                                           std::uint64_t trials,
                                           std::span<const std::uint64_t> n_grid) {
  if (trials == 0 || n_grid.empty())
    raise(ErrorKind::Config, "rate estimation needs trials and a grid");
  std::uint64_t max_n = *std::max_element(n_grid.begin(), n_grid.end());
  std::vector<std::uint64_t> failures(n_grid.size(), 0);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    DuelConfig c = cfg;
    c.horizon = max_n;
    c.notions = {notion};
    c.checkpoints = std::vector<std::uint64_t>{}; // per-step bits are enough
    c.seed = derive_seed(cfg.seed, trial + 1);
    DuelResult r = run_duel(c);
    for (std::size_t i = 0; i < n_grid.size(); ++i)
      if (!(r.traces[n_grid[i] - 1].holds_mask & 1u)) ++failures[i];
  }
  std::vector<RatePoint> table;
  for (std::size_t i = 0; i < n_grid.size(); ++i)
    table.push_back({n_grid[i], static_cast<double>(failures[i]) / trials});
  return table;
}

namespace {

json card_json(Cardinality c) {
  if (c.is_infinite()) return "INF";
  return c.count();
}

json verdict_json(const BreadthVerdict& v) {
  json j;
  j["holds"] = v.holds;
  j["hallucination"] = card_json(v.hallucination);
  j["missing"] = card_json(v.missing);
  j["overlap"] = card_json(v.overlap);
  if (v.rival) j["rival"] = *v.rival;
  if (v.rival_bounded) j["rival_bounded"] = true;
  return j;
}

json config_json(const DuelConfig& cfg) {
  json j;
  j["collection"] = to_string(cfg.collection);
  j["generator"] = to_string(cfg.generator.kind);
  if (cfg.generator.closure_dim) j["closure_dim"] = *cfg.generator.closure_dim;
  j["adversary"] = to_string(cfg.adversary);
  if (cfg.adversary_params.target) j["target"] = *cfg.adversary_params.target;
  if (cfg.adversary_params.star) j["star"] = *cfg.adversary_params.star;
  if (cfg.adversary == AdversaryKind::LbPhase)
    j["predicate"] = to_string(cfg.adversary_params.predicate);
  j["budget"] = cfg.adversary_params.budget;
  json notions = json::array();
  for (Notion n : cfg.notions) notions.push_back(to_string(n));
  j["notions"] = notions;
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  return j;
}

json phase_json(const PhaseRecord& p) {
  json j;
  j["phase"] = p.phase;
  j["witness_index"] = p.witness_index;
  j["opened_at"] = p.opened_at;
  j["closed_at"] = p.closed_at;
  j["pred_held_at"] = p.pred_held_at;
  return j;
}

} // namespace

std::string to_jsonl(const DuelConfig& cfg, const DuelResult& result) {
  std::ostringstream os;
  json meta;
  meta["schema_version"] = 1;
  meta["type"] = "meta";
  meta["config"] = config_json(cfg);
  os << meta.dump() << '\n';
  for (const StepTrace& t : result.traces) {
    json j;
    j["type"] = "step";
    j["step"] = t.step;
    j["emitted"] = t.emitted.id;
    j["seen_size"] = t.seen_size;
    j["undefined"] = t.undefined;
    j["changed"] = t.changed;
    j["descriptor"] = t.descriptor;
    if (t.first) j["first"] = t.first->id;
    j["phase"] = t.phase;
    j["subphase"] = std::string(1, t.subphase);
    j["holds_mask"] = t.holds_mask;
    if (!t.verdicts.empty()) {
      json v;
      for (const auto& [notion, verdict] : t.verdicts)
        v[to_string(notion)] = verdict_json(verdict);
      j["verdicts"] = v;
    }
    os << j.dump() << '\n';
  }
  return os.str();
}

std::string to_json(const RunReport& report) {
  json j;
  j["schema_version"] = report.schema_version;
  j["collection"] = report.collection;
  j["generator"] = report.generator;
  j["adversary"] = report.adversary;
  if (!report.predicate.empty()) j["predicate"] = report.predicate;
  j["horizon"] = report.horizon;
  j["seed"] = report.seed;
  j["target_index"] = report.target_index;
  json nstar;
  for (const auto& [notion, n] : report.n_star)
    nstar[to_string(notion)] = n ? json(*n) : json(nullptr);
  j["n_star"] = nstar;
  json fails;
  for (const auto& [notion, count] : report.failure_counts)
    fails[to_string(notion)] = count;
  j["failure_counts"] = fails;
  j["counters"] = {{"breadth_failures", report.counters.breadth_failures},
                   {"support_changes", report.counters.support_changes}};
  json phases = json::array();
  for (const PhaseRecord& p : report.phases) phases.push_back(phase_json(p));
  j["phases"] = phases;
  j["closed_phases"] = report.closed_phases;
  if (report.stall) {
    j["stall"] = {{"reason", report.stall->reason},
                  {"phase", report.stall->phase},
                  {"committed_target", report.stall->committed_target},
                  {"at_step", report.stall->at_step}};
  } else {
    j["stall"] = nullptr;
  }
  if (report.final_guess) j["final_guess"] = *report.final_guess;
  j["guess_changes"] = report.guess_changes;
  return j.dump(2);
}

std::string to_json(const ConditionCertificate& cert, CollectionName collection,
                    const SearchBounds& bounds) {
  json j;
  j["schema_version"] = 1;
  j["collection"] = to_string(collection);
  j["kind"] = cert.kind == TellTaleKind::Strong ? "strong" : "weak";
  j["bounds"] = {{"max_index", bounds.max_index},
                 {"max_telltale_size", bounds.max_telltale_size},
                 {"domain_horizon", bounds.domain_horizon},
                 {"chain_depth", bounds.chain_depth}};
  switch (cert.verdict) {
    case ConditionCertificate::Verdict::Verified: {
      j["verdict"] = "verified";
      json entries;
      for (const auto& [index, telltale] : cert.telltales.entries) {
        json ids = json::array();
        for (Elem e : telltale) ids.push_back(e.id);
        entries[std::to_string(index)] = ids;
      }
      j["telltales"] = entries;
      break;
    }
    case ConditionCertificate::Verdict::Refuted: {
      j["verdict"] = "refuted_within_bounds";
      j["star_index"] = cert.star_index;
      json chain = json::array();
      for (const ChainLink& link : cert.chain) {
        json ids = json::array();
        for (Elem e : link.telltale) ids.push_back(e.id);
        chain.push_back({{"telltale", ids}, {"witness_index", link.witness_index}});
      }
      j["chain"] = chain;
      break;
    }
    case ConditionCertificate::Verdict::Unknown:
      j["verdict"] = "unknown";
      break;
  }
  return j.dump(2);
}

std::string to_json(const ClosureDimension& dim, CollectionName collection,
                    const SearchBounds& bounds) {
  json j;
  j["schema_version"] = 1;
  j["collection"] = to_string(collection);
  j["bounds"] = {{"max_index", bounds.max_index},
                 {"max_telltale_size", bounds.max_telltale_size},
                 {"domain_horizon", bounds.domain_horizon}};
  j["value"] = dim.value;
  j["at_least"] = dim.at_least;
  j["vacuous"] = dim.vacuous;
  json ids = json::array();
  for (Elem e : dim.witness) ids.push_back(e.id);
  j["witness"] = ids;
  return j.dump(2);
}

std::string to_json(std::span<const RatePoint> table, Notion notion,
                    std::uint64_t trials) {
  json j;
  j["schema_version"] = 1;
  j["notion"] = to_string(notion);
  j["trials"] = trials;
  json rows = json::array();
  for (const RatePoint& p : table) rows.push_back({{"n", p.n}, {"error", p.error}});
  j["table"] = rows;
  return j.dump(2);
}

TraceSummary summarize_trace_file(const std::string& jsonl) {
  TraceSummary summary;
  std::istringstream is(jsonl);
  std::string line;
  std::optional<std::uint64_t> last_fail;
  std::uint64_t steps = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.value("type", "") != "step") continue;
    ++steps;
    std::uint64_t step = j.at("step").get<std::uint64_t>();
    if (step >= 2 && j.value("changed", false)) ++summary.counters.support_changes;
    auto mask = j.value("holds_mask", 0u);
    if (!(mask & 1u)) {
      ++summary.counters.breadth_failures;
      last_fail = step;
    }
    summary.max_phase = std::max(summary.max_phase, j.value("phase", std::uint64_t{0}));
  }
  summary.steps = steps;
  if (!last_fail) summary.primary_n_star = steps > 0 ? std::optional<std::uint64_t>(1) : std::nullopt;
  else if (*last_fail >= steps) summary.primary_n_star = std::nullopt;
  else summary.primary_n_star = *last_fail + 1;
  return summary;
}

} // namespace genlim
