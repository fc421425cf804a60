#pragma once

#include <map>
#include <vector>

#include "genlim/collections.hpp"

namespace genlim {

// All condition checks are bounded searches: the defining clauses quantify
// over every finite set and every index, so verdicts are relative to these
// bounds. Refutations carry evidence, not proofs.
struct SearchBounds {
  std::uint64_t max_index = 25;        // indices up to and including this one
  std::uint64_t max_telltale_size = 3; // candidate tell-tale cardinality cap
  std::uint64_t domain_horizon = 100;  // candidate elements drawn from this prefix
  std::uint64_t chain_depth = 3;       // length of refutation witness chains

  void validate() const;
};

struct ChainLink {
  FiniteSet telltale;         // the finite set T fed to the contrapositive
  std::uint64_t witness_index; // L_T: contains T, proper subset of the star language
};

struct TellTaleTable {
  TellTaleKind kind = TellTaleKind::Strong;
  std::map<std::uint64_t, FiniteSet> entries;
};

struct ConditionCertificate {
  enum class Verdict { Verified, Refuted, Unknown };
  Verdict verdict = Verdict::Unknown;
  TellTaleKind kind = TellTaleKind::Strong;
  TellTaleTable telltales;          // Verified
  std::uint64_t star_index = 0;     // Refuted
  std::vector<ChainLink> chain;     // Refuted, exactly chain_depth links
};

// Does T satisfy the (weak) tell-tale clause for L_index against every
// language with index <= max_index? Exact algebra, no sampling.
bool telltale_valid(const Collection& c, std::uint64_t index, const FiniteSet& telltale,
                    TellTaleKind kind, std::uint64_t max_index);

ConditionCertificate check_angluin(const Collection& c, const SearchBounds& bounds);
ConditionCertificate check_weak_angluin(const Collection& c, const SearchBounds& bounds);

// Closed-form contrapositive witness: an index j with T inside L_j and L_j a
// proper subset of L_star (for the weak kind, additionally missing infinitely
// many elements of L_star). Only declared violation points are supported.
std::uint64_t violation_witness(const Collection& c, std::uint64_t star,
                                const FiniteSet& telltale, TellTaleKind kind);
bool is_violation_point(const Collection& c, std::uint64_t star, TellTaleKind kind);

struct ClosureDimension {
  std::uint64_t value = 0;
  bool at_least = false; // search cap reached; larger tuples unexamined
  bool vacuous = false;  // no tuple of any size had a finite intersection
  FiniteSet witness;
};

// Largest tuple size (up to max_telltale_size, elements from the first
// domain_horizon ids) whose nonempty version space over indices <= max_index
// has an intersection the algebra certifies finite.
ClosureDimension closure_dimension(const Collection& c, const SearchBounds& bounds);

} // namespace genlim
