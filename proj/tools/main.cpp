// genlim: batch front-end for condition checks, duels, run matrices, and
// error-rate estimation over the builtin language collections.
//
// Exit codes: 0 all requested runs completed (stalled phases are completed
// runs with verdicts), 2 configuration error, 3 capability / applicability
// error.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "genlim/conditions.hpp"
#include "genlim/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace genlim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCapability = 3;

[[noreturn]] void fail(int code, const std::string& message) {
  std::cerr << "genlim: " << message << "\n";
  std::exit(code);
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::CapabilityMissing:
    case ErrorKind::WrongCollection:
    case ErrorKind::NotAViolationPoint:
    case ErrorKind::IndexOutOfRange:
      return kExitCapability;
    default:
      return kExitConfig;
  }
}

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(kExitConfig, "cannot write " + path.string());
  out << contents;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kExitConfig, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CollectionName parse_collection(const std::string& s) {
  auto c = collection_from_string(s);
  if (!c) raise(ErrorKind::Config, "unknown collection '" + s + "'");
  return *c;
}

GeneratorKind parse_generator(const std::string& s) {
  auto g = generator_from_string(s);
  if (!g) raise(ErrorKind::Config, "unknown generator '" + s + "'");
  return *g;
}

AdversaryKind parse_adversary(const std::string& s) {
  auto a = adversary_from_string(s);
  if (!a) raise(ErrorKind::Config, "unknown adversary '" + s + "'");
  return *a;
}

Notion parse_notion(const std::string& s) {
  auto n = notion_from_string(s);
  if (!n) raise(ErrorKind::Config, "unknown notion '" + s + "'");
  return *n;
}

BreadthPredicate parse_predicate(const std::string& s) {
  auto p = predicate_from_string(s);
  if (!p) raise(ErrorKind::Config, "unknown predicate '" + s + "'");
  return *p;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* name : allowed)
      if (key == name) { ok = true; break; }
    if (!ok) raise(ErrorKind::Config, where + ": unknown key '" + key + "'");
  }
}

GeneratorConfig generator_config_from_json(const json& j) {
  GeneratorConfig cfg;
  if (j.is_string()) {
    cfg.kind = parse_generator(j.get<std::string>());
    return cfg;
  }
  reject_unknown_keys(j, {"kind", "closure_dim"}, "generator");
  cfg.kind = parse_generator(j.at("kind").get<std::string>());
  if (j.contains("closure_dim")) cfg.closure_dim = j.at("closure_dim").get<std::uint64_t>();
  return cfg;
}

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::Canonical;
  AdversaryParams params;
};

AdversarySpec adversary_spec_from_json(const json& j) {
  AdversarySpec spec;
  if (j.is_string()) {
    spec.kind = parse_adversary(j.get<std::string>());
    return spec;
  }
  reject_unknown_keys(j, {"kind", "target", "star", "predicate", "budget", "repeat",
                          "rival_bound"},
                      "adversary");
  spec.kind = parse_adversary(j.at("kind").get<std::string>());
  if (j.contains("target")) spec.params.target = j.at("target").get<std::uint64_t>();
  if (j.contains("star")) spec.params.star = j.at("star").get<std::uint64_t>();
  if (j.contains("predicate"))
    spec.params.predicate = parse_predicate(j.at("predicate").get<std::string>());
  if (j.contains("budget")) spec.params.budget = j.at("budget").get<std::uint64_t>();
  if (j.contains("repeat")) spec.params.repeat = j.at("repeat").get<std::uint64_t>();
  if (j.contains("rival_bound"))
    spec.params.rival_bound = j.at("rival_bound").get<std::uint64_t>();
  return spec;
}

Notion default_notion(const DuelConfig& cfg) {
  if (cfg.adversary != AdversaryKind::LbPhase) return Notion::Exact;
  switch (cfg.adversary_params.predicate) {
    case BreadthPredicate::Exact: return Notion::Exact;
    case BreadthPredicate::Approx: return Notion::Approx;
    case BreadthPredicate::Exhaustive: return Notion::Exhaustive;
    case BreadthPredicate::ExhaustiveVariant: return Notion::ExhaustiveVariant;
    case BreadthPredicate::Unambiguous: return Notion::Unambiguous;
  }
  return Notion::Exact;
}

DuelConfig duel_config_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"collection", "generator", "adversary", "notions", "notion",
                       "notion_target", "horizon", "seed", "checkpoints",
                       "disable_capabilities"},
                      "duel config");
  DuelConfig cfg;
  cfg.collection = parse_collection(j.at("collection").get<std::string>());
  cfg.generator = generator_config_from_json(j.at("generator"));
  AdversarySpec adv = adversary_spec_from_json(j.at("adversary"));
  cfg.adversary = adv.kind;
  cfg.adversary_params = adv.params;
  if (j.contains("notion")) cfg.notions.push_back(parse_notion(j.at("notion")));
  if (j.contains("notions"))
    for (const auto& n : j.at("notions")) cfg.notions.push_back(parse_notion(n));
  if (j.contains("notion_target"))
    cfg.notion_target = j.at("notion_target").get<std::uint64_t>();
  if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<std::uint64_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("checkpoints"))
    cfg.checkpoints = j.at("checkpoints").get<std::vector<std::uint64_t>>();
  if (j.contains("disable_capabilities"))
    cfg.disabled_capabilities =
        j.at("disable_capabilities").get<std::vector<std::string>>();
  if (cfg.notions.empty()) cfg.notions.push_back(default_notion(cfg));
  return cfg;
}

// Construction-only dry run; throws the capability or applicability error a
// real run would hit.
void validate_duel(const DuelConfig& cfg) {
  Collection col = Collection::builtin(cfg.collection);
  if (!cfg.disabled_capabilities.empty()) {
    Capabilities caps;
    for (const std::string& name : cfg.disabled_capabilities) {
      if (name == "membership") caps.membership = false;
      else if (name == "subset") caps.subset = false;
      else if (name == "finite_difference") caps.finite_difference = false;
      else if (name == "telltale_strong") caps.telltale_strong = false;
      else if (name == "telltale_weak") caps.telltale_weak = false;
      else if (name == "vsi") caps.vsi = false;
      else raise(ErrorKind::Config, "unknown capability '" + name + "'");
    }
    col = col.with_capabilities(caps);
  }
  GeneratorParams params{cfg.generator.closure_dim};
  (void)make_generator(cfg.generator.kind, col, params);
  (void)make_adversary(cfg.adversary, col, cfg.adversary_params);
  std::uint64_t target =
      cfg.notion_target.value_or(cfg.adversary_params.target.value_or(
          cfg.adversary_params.star.value_or(col.index_begin())));
  (void)col.language_at(target);
}

std::string duel_slug(const DuelConfig& cfg) {
  std::ostringstream os;
  os << to_string(cfg.collection) << '_' << to_string(cfg.generator.kind) << '_'
     << to_string(cfg.adversary);
  if (!cfg.notions.empty()) os << '_' << to_string(cfg.notions[0]);
  return os.str();
}

void print_report_summary(const RunReport& report) {
  std::cout << report.collection << " x " << report.generator << " x "
            << report.adversary;
  if (!report.predicate.empty()) std::cout << "(" << report.predicate << ")";
  std::cout << "  T=" << report.horizon << " target=" << report.target_index << "\n";
  for (const auto& [notion, n_star] : report.n_star) {
    std::cout << "  " << to_string(notion) << ": ";
    if (n_star) std::cout << "held from step " << *n_star << " through horizon";
    else std::cout << "not held through horizon";
    std::cout << " (failures: " << report.failure_counts.at(notion) << ")\n";
  }
  std::cout << "  support changes: " << report.counters.support_changes
            << ", closed phases: " << report.closed_phases << "\n";
  if (report.stall)
    std::cout << "  stalled: " << report.stall->reason << " (phase "
              << report.stall->phase << ", committed target "
              << report.stall->committed_target << ")\n";
  if (report.final_guess) std::cout << "  final guess: " << *report.final_guess << "\n";
}

int cmd_duel(const DuelConfig& cfg, const std::string& out_dir) {
  validate_duel(cfg);
  DuelResult result = run_duel(cfg);
  print_report_summary(result.report);
  if (!out_dir.empty()) {
    fs::path dir(out_dir);
    std::string slug = duel_slug(cfg);
    write_file(dir / (slug + ".trace.jsonl"), to_jsonl(cfg, result));
    write_file(dir / (slug + ".report.json"), to_json(result.report));
    std::cout << "  wrote " << (dir / slug).string() << ".{trace.jsonl,report.json}\n";
  }
  return kExitOk;
}

const char* hallucination_bucket(const BreadthVerdict& v) {
  if (v.hallucination == Cardinality::finite(0)) return "none";
  if (v.hallucination.is_finite()) return "finite";
  return "infinite";
}

const char* missing_bucket(const BreadthVerdict& v) {
  if (v.missing == Cardinality::finite(0)) return "zero missing";
  if (v.missing.is_finite()) return "finite missing";
  if (v.overlap.is_infinite()) return "infinite present";
  return "finite present";
}

int cmd_matrix(const json& spec, const std::string& out_dir, unsigned jobs) {
  reject_unknown_keys(spec,
                      {"collections", "generators", "adversaries", "notions", "horizon",
                       "seed", "out"},
                      "matrix config");
  std::vector<DuelConfig> cells;
  std::uint64_t horizon = spec.value("horizon", std::uint64_t{10'000});
  std::uint64_t seed = spec.value("seed", std::uint64_t{0});
  for (const auto& cj : spec.at("collections")) {
    for (const auto& gj : spec.at("generators")) {
      for (const auto& aj : spec.at("adversaries")) {
        for (const auto& nj : spec.at("notions")) {
          DuelConfig cfg;
          cfg.collection = parse_collection(cj.get<std::string>());
          cfg.generator = generator_config_from_json(gj);
          AdversarySpec adv = adversary_spec_from_json(aj);
          cfg.adversary = adv.kind;
          cfg.adversary_params = adv.params;
          cfg.notions = {parse_notion(nj.get<std::string>())};
          cfg.horizon = horizon;
          cells.push_back(cfg);
        }
      }
    }
  }
  if (cells.empty()) raise(ErrorKind::Config, "matrix config expands to no cells");

  // validate every applicable cell before running anything; cells that are
  // structurally inapplicable (wrong collection for the construction, no
  // declared violation point, index out of range) are skipped, capability
  // contradictions abort
  std::vector<bool> applicable(cells.size(), true);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i].seed = derive_seed(seed, i);
    try {
      validate_duel(cells[i]);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::WrongCollection ||
          e.kind() == ErrorKind::NotAViolationPoint ||
          e.kind() == ErrorKind::IndexOutOfRange) {
        applicable[i] = false;
      } else {
        throw;
      }
    }
  }

  std::vector<std::optional<DuelResult>> results(cells.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= cells.size()) return;
      if (!applicable[i]) continue;
      results[i] = run_duel(cells[i]);
    }
  };
  unsigned n_workers = std::max(1u, std::min<unsigned>(jobs, cells.size()));
  std::vector<std::future<void>> futures;
  for (unsigned w = 0; w < n_workers; ++w)
    futures.push_back(std::async(std::launch::async, worker));
  for (auto& f : futures) f.get();

  // single-writer output plus a verdict grid in the shape of the
  // missing-extent by hallucination-extent table
  std::map<std::pair<std::string, std::string>, std::pair<int, int>> grid;
  std::ostringstream table;
  table << "cell results (primary notion, held-through-horizon, n*, phases, stall)\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string slug = "cell" + std::to_string(i) + "_" + duel_slug(cells[i]);
    if (!applicable[i]) {
      table << slug << ": skipped (inapplicable construction)\n";
      continue;
    }
    const DuelResult& r = *results[i];
    if (!out_dir.empty()) {
      write_file(fs::path(out_dir) / (slug + ".trace.jsonl"), to_jsonl(cells[i], r));
      write_file(fs::path(out_dir) / (slug + ".report.json"), to_json(r.report));
    }
    Notion primary = cells[i].notions[0];
    auto n_star = r.report.n_star.at(primary);
    table << slug << ": " << to_string(primary) << " "
          << (n_star ? "held from " + std::to_string(*n_star) : "not held")
          << ", phases=" << r.report.closed_phases
          << (r.report.stall ? ", stalled: " + r.report.stall->reason : "") << "\n";
    // classify the final checkpointed verdict into the extent grid
    const auto& verdicts = r.traces.back().verdicts;
    auto it = verdicts.find(primary);
    if (it != verdicts.end()) {
      auto key = std::pair<std::string, std::string>(missing_bucket(it->second),
                                                     hallucination_bucket(it->second));
      grid[key].second += 1;
      if (it->second.holds) grid[key].first += 1;
    }
  }
  table << "\nfinal-step extent grid (notion held / cells):\n";
  for (const char* row : {"zero missing", "finite missing", "infinite present",
                          "finite present"}) {
    table << "  " << row << ":";
    for (const char* col : {"none", "finite", "infinite"}) {
      auto it = grid.find({row, col});
      table << "  " << col << " hallucinations ";
      if (it == grid.end()) table << "-/-";
      else table << it->second.first << "/" << it->second.second;
    }
    table << "\n";
  }
  std::cout << table.str();
  if (!out_dir.empty()) write_file(fs::path(out_dir) / "summary.txt", table.str());
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation laboratory for language generation in the limit"};
  app.require_subcommand(1);

  // ---- check ----
  auto* check = app.add_subcommand("check", "run bounded condition checkers");
  std::string check_collection, check_kind = "strong", check_out;
  SearchBounds bounds;
  check->add_option("--collection", check_collection, "collection name")->required();
  check->add_option("--kind", check_kind, "strong | weak | closure");
  check->add_option("--max-index", bounds.max_index, "largest index examined");
  check->add_option("--telltale-size", bounds.max_telltale_size, "tell-tale size cap");
  check->add_option("--horizon", bounds.domain_horizon, "candidate element horizon");
  check->add_option("--chain-depth", bounds.chain_depth, "refutation chain length");
  check->add_option("--out", check_out, "write the certificate JSON here");

  // ---- duel ----
  auto* duel = app.add_subcommand("duel", "run a single generator-adversary duel");
  std::string duel_config_path, duel_collection, duel_generator, duel_adversary;
  std::string duel_notion, duel_predicate, duel_out;
  std::uint64_t duel_target = 0, duel_star = 0, duel_horizon = 10'000, duel_seed = 0;
  std::uint64_t duel_budget = 10'000, duel_closure_dim = 0, duel_repeat = 1;
  std::uint64_t duel_rival_bound = 50;
  bool has_target = false, has_star = false, has_dim = false;
  duel->add_option("--config", duel_config_path, "duel config JSON file");
  duel->add_option("--collection", duel_collection, "collection name");
  duel->add_option("--generator", duel_generator, "generator kind");
  duel->add_option("--adversary", duel_adversary, "adversary kind");
  duel->add_option("--target", duel_target, "target index")->each([&](auto) { has_target = true; });
  duel->add_option("--star", duel_star, "star index for LB_PHASE")->each([&](auto) { has_star = true; });
  duel->add_option("--notion", duel_notion, "breadth notion to track");
  duel->add_option("--predicate", duel_predicate, "LB_PHASE breadth predicate");
  duel->add_option("--horizon", duel_horizon, "number of steps");
  duel->add_option("--seed", duel_seed, "run seed");
  duel->add_option("--budget", duel_budget, "subphase step budget");
  duel->add_option("--closure-dim", duel_closure_dim, "closure dimension parameter")
      ->each([&](auto) { has_dim = true; });
  duel->add_option("--repeat", duel_repeat, "canonical repetition factor");
  duel->add_option("--rival-bound", duel_rival_bound, "unambiguous rival bound");
  duel->add_option("--out", duel_out, "output directory for trace and report");

  // ---- matrix ----
  auto* matrix = app.add_subcommand("matrix", "run a duel grid");
  std::string matrix_config_path, matrix_out;
  unsigned matrix_jobs = std::max(1u, std::thread::hardware_concurrency());
  matrix->add_option("--config", matrix_config_path, "matrix config JSON")->required();
  matrix->add_option("--out", matrix_out, "output directory");
  matrix->add_option("--jobs", matrix_jobs, "concurrent duels");

  // ---- rate ----
  auto* rate = app.add_subcommand("rate", "estimate empirical error rates");
  std::string rate_collection, rate_generator, rate_notion = "EXACT", rate_out;
  std::string rate_grid = "1..50";
  std::uint64_t rate_target = 0, rate_trials = 200, rate_seed = 0, rate_dim = 0;
  bool rate_has_dim = false;
  rate->add_option("--collection", rate_collection)->required();
  rate->add_option("--generator", rate_generator)->required();
  rate->add_option("--target", rate_target)->required();
  rate->add_option("--notion", rate_notion);
  rate->add_option("--trials", rate_trials);
  rate->add_option("--grid", rate_grid, "inclusive range, e.g. 1..50");
  rate->add_option("--seed", rate_seed);
  rate->add_option("--closure-dim", rate_dim)->each([&](auto) { rate_has_dim = true; });
  rate->add_option("--out", rate_out, "write the table JSON here");

  // ---- report ----
  auto* report = app.add_subcommand("report", "re-summarize stored traces");
  std::string report_trace;
  report->add_option("--trace", report_trace, "trace JSONL file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      CollectionName name = parse_collection(check_collection);
      Collection c = Collection::builtin(name);
      std::string out;
      if (check_kind == "strong") out = to_json(check_angluin(c, bounds), name, bounds);
      else if (check_kind == "weak") out = to_json(check_weak_angluin(c, bounds), name, bounds);
      else if (check_kind == "closure") out = to_json(closure_dimension(c, bounds), name, bounds);
      else raise(ErrorKind::Config, "unknown check kind '" + check_kind + "'");
      std::cout << out << "\n";
      if (!check_out.empty()) write_file(check_out, out);
      return kExitOk;
    }
    if (*duel) {
      DuelConfig cfg;
      if (!duel_config_path.empty()) {
        cfg = duel_config_from_json(json::parse(read_file(duel_config_path)));
      } else {
        if (duel_collection.empty() || duel_generator.empty() || duel_adversary.empty())
          raise(ErrorKind::Config,
                "duel needs --config or --collection/--generator/--adversary");
        cfg.collection = parse_collection(duel_collection);
        cfg.generator.kind = parse_generator(duel_generator);
        if (has_dim) cfg.generator.closure_dim = duel_closure_dim;
        cfg.adversary = parse_adversary(duel_adversary);
        if (has_target) cfg.adversary_params.target = duel_target;
        if (has_star) cfg.adversary_params.star = duel_star;
        if (!duel_predicate.empty())
          cfg.adversary_params.predicate = parse_predicate(duel_predicate);
        cfg.adversary_params.budget = duel_budget;
        cfg.adversary_params.repeat = duel_repeat;
        cfg.adversary_params.rival_bound = duel_rival_bound;
        cfg.horizon = duel_horizon;
        cfg.seed = duel_seed;
        if (!duel_notion.empty()) cfg.notions.push_back(parse_notion(duel_notion));
        if (cfg.notions.empty()) cfg.notions.push_back(default_notion(cfg));
      }
      return cmd_duel(cfg, duel_out);
    }
    if (*matrix) {
      json spec = json::parse(read_file(matrix_config_path));
      std::string out = matrix_out;
      if (out.empty() && spec.contains("out")) out = spec.at("out").get<std::string>();
      return cmd_matrix(spec, out, matrix_jobs);
    }
    if (*rate) {
      DuelConfig cfg;
      cfg.collection = parse_collection(rate_collection);
      cfg.generator.kind = parse_generator(rate_generator);
      if (rate_has_dim) cfg.generator.closure_dim = rate_dim;
      cfg.adversary = AdversaryKind::Iid;
      cfg.adversary_params.target = rate_target;
      cfg.seed = rate_seed;
      auto sep = rate_grid.find("..");
      if (sep == std::string::npos) raise(ErrorKind::Config, "grid must be lo..hi");
      std::uint64_t lo = std::stoull(rate_grid.substr(0, sep));
      std::uint64_t hi = std::stoull(rate_grid.substr(sep + 2));
      if (lo < 1 || hi < lo) raise(ErrorKind::Config, "grid must be 1 <= lo <= hi");
      std::vector<std::uint64_t> grid;
      for (std::uint64_t n = lo; n <= hi; ++n) grid.push_back(n);
      validate_duel(cfg);
      auto table = estimate_error_rate(cfg, parse_notion(rate_notion), rate_trials, grid);
      std::string out = to_json(table, parse_notion(rate_notion), rate_trials);
      std::cout << out << "\n";
      if (!rate_out.empty()) write_file(rate_out, out);
      return kExitOk;
    }
    if (*report) {
      TraceSummary summary = summarize_trace_file(read_file(report_trace));
      std::cout << "steps: " << summary.steps << "\n"
                << "support changes: " << summary.counters.support_changes << "\n"
                << "primary-notion failures: " << summary.counters.breadth_failures
                << "\n";
      if (summary.primary_n_star)
        std::cout << "primary notion held from step " << *summary.primary_n_star
                  << " through the horizon\n";
      else
        std::cout << "primary notion not held through the horizon\n";
      std::cout << "phases observed: " << summary.max_phase << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    fail(exit_code_for(e), std::string(to_string(e.kind())) + ": " + e.what());
  } catch (const json::exception& e) {
    fail(kExitConfig, std::string("config parse error: ") + e.what());
  } catch (const std::exception& e) {
    fail(kExitConfig, e.what());
  }
  return kExitOk;
}
