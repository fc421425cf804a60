#pragma once

#include <optional>
#include <string>

#include "genlim/domain.hpp"
#include "genlim/errors.hpp"

namespace genlim {

// Closed-form infinite base sets over the id-coded domain. Parametric kinds
// each belong to exactly one builtin collection family; relations across
// families are not defined and raise UnknownBasePair.
//
//   Empty        {}
//   Full         all ids >= 1 (N, or Z through the zigzag coding)
//   Suffix(a)    ids coding the integers { a, a+1, ... }
//   Multiples(m) ids that are multiples of m, m >= 2
//   Parity(0)    ids coding even values of the N0-coded domain (odd ids)
//   Parity(1)    ids coding odd values (even ids)
enum class BaseKind { Empty, Full, Suffix, Multiples, Parity };

struct BaseRef {
  BaseKind kind = BaseKind::Empty;
  std::int64_t param = 0;

  friend bool operator==(BaseRef, BaseRef) = default;
};

BaseRef make_base(BaseKind kind, std::int64_t param = 0); // validates, Multiples(1) -> Full

bool base_member(BaseRef b, Elem e);
bool base_is_empty(BaseRef b);
Elem base_kth(BaseRef b, std::uint64_t k); // k >= 1, in ascending id order

// Difference of two bases; when finite the elements are explicit so finite
// corrections can be folded in exactly.
struct BaseDiff {
  bool finite = true;
  FiniteSet elems; // meaningful only when finite
};
BaseDiff base_difference(BaseRef a, BaseRef b);
BaseRef base_intersection(BaseRef a, BaseRef b);

// A finitely modified set: (base UNION add) MINUS sub, kept in normal form
//   add and base disjoint, sub inside base, add and sub disjoint.
// Equality is structural on normal forms, which makes it set equality.
// Values are immutable once built and safe to share across threads.
class Fms {
public:
  Fms() = default; // empty set
  Fms(BaseRef base, FiniteSet add = {}, FiniteSet sub = {});

  static Fms finite(FiniteSet elems);
  static Fms full();

  bool member(Elem e) const;
  Cardinality cardinality() const;
  bool is_empty() const;

  // k-th smallest element by id, k >= 1. Precondition: the set has at least
  // k elements.
  Elem kth(std::uint64_t k) const;
  std::vector<Elem> enumerate(std::uint64_t horizon) const;

  // (this UNION plus) MINUS minus, renormalized.
  Fms modified(const FiniteSet& plus, const FiniteSet& minus) const;

  BaseRef base() const { return base_; }
  const FiniteSet& add() const { return add_; }
  const FiniteSet& sub() const { return sub_; }

  friend bool operator==(const Fms&, const Fms&) = default;

private:
  BaseRef base_{};
  FiniteSet add_;
  FiniteSet sub_;
};

// Lazy enumeration of an Fms in canonical id order. Borrows the set.
class FmsCursor {
public:
  explicit FmsCursor(const Fms& s) : s_(&s) {}
  std::optional<Elem> next();

private:
  const Fms* s_;
  std::uint64_t base_rank_ = 0;
  std::size_t add_pos_ = 0;
};

struct Relation {
  bool subset = false;  // a inside b
  bool equal = false;
  Cardinality diff = Cardinality::finite(0);    // |a \ b|
  Cardinality symdiff = Cardinality::finite(0); // |a delta b|
};

Cardinality difference_card(const Fms& a, const Fms& b);
FiniteSet difference_elems(const Fms& a, const Fms& b); // precondition: |a\b| finite
Relation relate(const Fms& a, const Fms& b);
Cardinality overlap_card(const Fms& a, const Fms& b); // |a intersect b|
Fms intersect(const Fms& a, const Fms& b);

// First element of a \ b among the first scan_limit elements of a; used by
// tests to realize the "counterexample below a computable bound" guarantee.
std::optional<Elem> find_difference_witness(const Fms& a, const Fms& b,
                                            std::uint64_t scan_limit);

std::string describe(BaseRef b);
std::string describe(const Fms& s);

} // namespace genlim
