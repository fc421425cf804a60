#include "genlim/conditions.hpp"

#include <algorithm>

namespace genlim {

void SearchBounds::validate() const {
  // max_index is an inclusive bound and may legitimately be the first index.
  if (max_telltale_size < 1 || domain_horizon < 1 || chain_depth < 1)
    raise(ErrorKind::Config, "search bounds must be >= 1");
}

bool telltale_valid(const Collection& c, std::uint64_t index, const FiniteSet& telltale,
                    TellTaleKind kind, std::uint64_t max_index) {
  Fms lang = c.language_at(index);
  for (Elem e : telltale)
    if (!lang.member(e)) return false;
  for (std::uint64_t j = c.index_begin(); j <= max_index && c.in_range(j); ++j) {
    Fms other = c.language_at(j);
    bool contains_telltale = true;
    for (Elem e : telltale)
      if (!other.member(e)) { contains_telltale = false; break; }
    if (!contains_telltale) continue;
    Relation r = relate(other, lang);
    if (!r.subset || r.equal) continue; // not a proper subset, clause satisfied
    if (kind == TellTaleKind::Weak && difference_card(lang, other).is_finite())
      continue; // proper subset missing only finitely many elements is allowed
    return false;
  }
  return true;
}

bool is_violation_point(const Collection& c, std::uint64_t star, TellTaleKind kind) {
  if (c.name() == CollectionName::SingleRemoval)
    return star == 0 && kind == TellTaleKind::Strong;
  if (c.name() == CollectionName::Suffixes) return star == 0;
  return false;
}

std::uint64_t violation_witness(const Collection& c, std::uint64_t star,
                                const FiniteSet& telltale, TellTaleKind kind) {
  if (!is_violation_point(c, star, kind))
    raise(ErrorKind::NotAViolationPoint,
          std::string(to_string(c.name())) + " index " + std::to_string(star) +
              " is not a declared violation point for this kind");
  switch (c.name()) {
    case CollectionName::SingleRemoval:
      // smallest-missing-element rule: N\{j} for the first j outside T
      return first_absent_id(telltale, 1);
    case CollectionName::Suffixes: {
      // the suffix starting at the smallest decoded value of T (0 for empty T)
      std::int64_t a = 0;
      if (!telltale.empty()) {
        a = zigzag_decode(telltale.front());
        for (Elem e : telltale) a = std::min(a, zigzag_decode(e));
      }
      return zigzag_encode(a).id;
    }
    default:
      break;
  }
  raise(ErrorKind::NotAViolationPoint, "unhandled violation point");
}

namespace {

// Generic bounded fallback for stars without a declared witness rule.
std::optional<std::uint64_t> search_witness(const Collection& c, std::uint64_t star,
                                            const FiniteSet& telltale, TellTaleKind kind,
                                            std::uint64_t max_index) {
  Fms star_lang = c.language_at(star);
  for (std::uint64_t j = c.index_begin(); j <= max_index && c.in_range(j); ++j) {
    if (j == star) continue;
    Fms other = c.language_at(j);
    bool contains = true;
    for (Elem e : telltale)
      if (!other.member(e)) { contains = false; break; }
    if (!contains) continue;
    Relation r = relate(other, star_lang);
    if (!r.subset || r.equal) continue;
    if (kind == TellTaleKind::Weak && difference_card(star_lang, other).is_finite())
      continue;
    return j;
  }
  return std::nullopt;
}

std::optional<std::vector<ChainLink>> build_chain(const Collection& c, std::uint64_t star,
                                                  TellTaleKind kind,
                                                  const SearchBounds& bounds) {
  Fms star_lang = c.language_at(star);
  if (star_lang.is_empty()) return std::nullopt;
  // Seeded with the first element of the star language; each link then grows
  // T past the current witness, which keeps later witnesses fresh.
  FiniteSet telltale({star_lang.kth(1)});
  std::vector<ChainLink> chain;
  const std::uint64_t scan_limit = std::max<std::uint64_t>(bounds.domain_horizon, 10'000);
  for (std::uint64_t d = 0; d < bounds.chain_depth; ++d) {
    std::optional<std::uint64_t> witness;
    if (is_violation_point(c, star, kind))
      witness = violation_witness(c, star, telltale, kind);
    else
      witness = search_witness(c, star, telltale, kind, bounds.max_index);
    if (!witness) return std::nullopt;
    chain.push_back({telltale, *witness});
    if (d + 1 < bounds.chain_depth) {
      auto grow = find_difference_witness(star_lang, c.language_at(*witness), scan_limit);
      if (!grow) return std::nullopt;
      telltale.insert(*grow);
    }
  }
  return chain;
}

ConditionCertificate check_condition(const Collection& c, const SearchBounds& bounds,
                                     TellTaleKind kind) {
  bounds.validate();
  ConditionCertificate cert;
  cert.kind = kind;
  TellTaleTable table{kind, {}};
  std::vector<std::uint64_t> unverified;

  for (std::uint64_t i = c.index_begin(); i <= bounds.max_index && c.in_range(i); ++i) {
    Fms lang = c.language_at(i);
    auto pool = lang.enumerate(bounds.domain_horizon);
    auto within_bounds = [&](const FiniteSet& t) {
      if (t.size() > bounds.max_telltale_size) return false;
      for (Elem e : t)
        if (!std::binary_search(pool.begin(), pool.end(), e)) return false;
      return true;
    };

    std::optional<FiniteSet> found;
    if (auto entry = c.telltale_entry(i, kind);
        entry && within_bounds(*entry) && telltale_valid(c, i, *entry, kind, bounds.max_index)) {
      found = *entry;
    } else {
      // fall back to prefixes of the language's canonical enumeration
      std::uint64_t cap = std::min<std::uint64_t>(bounds.max_telltale_size, pool.size());
      for (std::uint64_t k = 0; k <= cap; ++k) {
        FiniteSet candidate(std::vector<Elem>(pool.begin(), pool.begin() + k));
        if (telltale_valid(c, i, candidate, kind, bounds.max_index)) {
          found = candidate;
          break;
        }
      }
    }
    if (found) table.entries[i] = *found;
    else unverified.push_back(i);
  }

  if (unverified.empty()) {
    cert.verdict = ConditionCertificate::Verdict::Verified;
    cert.telltales = table;
    return cert;
  }
  for (std::uint64_t star : unverified) {
    auto chain = build_chain(c, star, kind, bounds);
    if (chain && chain->size() == bounds.chain_depth) {
      cert.verdict = ConditionCertificate::Verdict::Refuted;
      cert.star_index = star;
      cert.chain = std::move(*chain);
      return cert;
    }
  }
  cert.verdict = ConditionCertificate::Verdict::Unknown;
  return cert;
}

} // namespace

ConditionCertificate check_angluin(const Collection& c, const SearchBounds& bounds) {
  return check_condition(c, bounds, TellTaleKind::Strong);
}

ConditionCertificate check_weak_angluin(const Collection& c, const SearchBounds& bounds) {
  return check_condition(c, bounds, TellTaleKind::Weak);
}

ClosureDimension closure_dimension(const Collection& c, const SearchBounds& bounds) {
  bounds.validate();
  ClosureDimension result;
  result.vacuous = true;

  std::vector<std::uint64_t> indices;
  for (std::uint64_t i = c.index_begin(); i <= bounds.max_index && c.in_range(i); ++i)
    indices.push_back(i);

  // Qualifying tuple sizes are downward closed (a sub-tuple's version space
  // is larger, so its intersection is smaller), so scan sizes upward and stop
  // at the first size with no witness.
  for (std::uint64_t size = 1; size <= bounds.max_telltale_size; ++size) {
    if (size > bounds.domain_horizon) break;
    std::optional<FiniteSet> witness;

    std::vector<std::uint64_t> combo(size);
    for (std::uint64_t k = 0; k < size; ++k) combo[k] = k + 1;
    for (;;) {
      SampleSet samples;
      for (std::uint64_t id : combo) samples.insert(Elem{id});

      std::optional<Fms> inter;
      for (std::uint64_t i : indices) {
        if (!c.consistent(i, samples)) continue;
        Fms lang = c.language_at(i);
        inter = inter ? intersect(*inter, lang) : lang;
      }
      if (inter && inter->cardinality().is_finite()) {
        std::vector<Elem> w;
        for (std::uint64_t id : combo) w.push_back(Elem{id});
        witness = FiniteSet(std::move(w));
        break;
      }

      // next lexicographic combination over ids 1..domain_horizon
      std::int64_t pos = static_cast<std::int64_t>(size) - 1;
      while (pos >= 0 && combo[pos] == bounds.domain_horizon - (size - 1 - pos)) --pos;
      if (pos < 0) break;
      ++combo[pos];
      for (std::uint64_t k = pos + 1; k < size; ++k) combo[k] = combo[k - 1] + 1;
    }

    if (!witness) break;
    result.value = size;
    result.vacuous = false;
    result.witness = *witness;
  }
  result.at_least = !result.vacuous && result.value == bounds.max_telltale_size;
  return result;
}

} // namespace genlim
