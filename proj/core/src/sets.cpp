#include "genlim/sets.hpp"

#include <cassert>
#include <numeric>
#include <sstream>

namespace genlim {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownBasePair: return "UnknownBasePair";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::CapabilityMissing: return "CapabilityMissing";
    case ErrorKind::ContractViolation: return "ContractViolation";
    case ErrorKind::NoTellTale: return "NoTellTale";
    case ErrorKind::EmptyVersionSpace: return "EmptyVersionSpace";
    case ErrorKind::NotAViolationPoint: return "NotAViolationPoint";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::UndefinedSupport: return "UndefinedSupport";
    case ErrorKind::WrongCollection: return "WrongCollection";
    case ErrorKind::Config: return "Config";
  }
  return "Error";
}

BaseRef make_base(BaseKind kind, std::int64_t param) {
  switch (kind) {
    case BaseKind::Empty:
    case BaseKind::Full:
      return {kind, 0};
    case BaseKind::Suffix:
      return {kind, param};
    case BaseKind::Multiples:
      if (param < 1) raise(ErrorKind::Config, "Multiples base needs modulus >= 1");
      if (param == 1) return {BaseKind::Full, 0};
      return {kind, param};
    case BaseKind::Parity:
      if (param != 0 && param != 1) raise(ErrorKind::Config, "Parity base needs 0 or 1");
      return {kind, param};
  }
  raise(ErrorKind::Config, "bad base kind");
}

bool base_member(BaseRef b, Elem e) {
  if (e.sentinel()) return false;
  switch (b.kind) {
    case BaseKind::Empty: return false;
    case BaseKind::Full: return true;
    case BaseKind::Suffix: return zigzag_decode(e) >= b.param;
    case BaseKind::Multiples: return e.id % static_cast<std::uint64_t>(b.param) == 0;
    case BaseKind::Parity: return (e.id % 2) == (b.param == 0 ? 1u : 0u);
  }
  return false;
}

bool base_is_empty(BaseRef b) { return b.kind == BaseKind::Empty; }

Elem base_kth(BaseRef b, std::uint64_t k) {
  assert(k >= 1);
  switch (b.kind) {
    case BaseKind::Empty:
      break;
    case BaseKind::Full:
      return Elem{k};
    case BaseKind::Suffix: {
      if (b.param >= 1)
        return Elem{2 * (static_cast<std::uint64_t>(b.param) + k - 1)};
      // For start <= 0 the ids 1..2|start|+1 are all present, then the even
      // ids above that.
      std::uint64_t m = 2 * static_cast<std::uint64_t>(-b.param) + 1;
      return Elem{k <= m ? k : 2 * k - m - 1};
    }
    case BaseKind::Multiples:
      return Elem{k * static_cast<std::uint64_t>(b.param)};
    case BaseKind::Parity:
      return Elem{b.param == 0 ? 2 * k - 1 : 2 * k};
  }
  raise(ErrorKind::ContractViolation, "kth element of an empty base");
}

namespace {

FiniteSet suffix_range_elems(std::int64_t from, std::int64_t to_exclusive) {
  std::vector<Elem> v;
  for (std::int64_t value = from; value < to_exclusive; ++value)
    v.push_back(zigzag_encode(value));
  return FiniteSet(std::move(v));
}

[[noreturn]] void unknown_pair(BaseRef a, BaseRef b) {
  raise(ErrorKind::UnknownBasePair,
        "no closed-form relation for bases " + describe(a) + " and " + describe(b));
}

} // namespace

BaseDiff base_difference(BaseRef a, BaseRef b) {
  if (a == b || a.kind == BaseKind::Empty || b.kind == BaseKind::Full)
    return {true, {}};
  if (b.kind == BaseKind::Empty) return {false, {}}; // every non-empty base is infinite
  if (a.kind == BaseKind::Full) return {false, {}};  // b is a proper infinite-complement subset
  if (a.kind != b.kind) unknown_pair(a, b);
  switch (a.kind) {
    case BaseKind::Suffix:
      if (a.param >= b.param) return {true, {}};
      return {true, suffix_range_elems(a.param, b.param)};
    case BaseKind::Multiples:
      // multiples of a are inside multiples of b exactly when b divides a
      if (a.param % b.param == 0) return {true, {}};
      return {false, {}};
    case BaseKind::Parity:
      return {false, {}}; // distinct parities are disjoint, both infinite
    default:
      break;
  }
  unknown_pair(a, b);
}

BaseRef base_intersection(BaseRef a, BaseRef b) {
  if (a.kind == BaseKind::Empty || b.kind == BaseKind::Empty)
    return make_base(BaseKind::Empty);
  if (a.kind == BaseKind::Full) return b;
  if (b.kind == BaseKind::Full) return a;
  if (a.kind != b.kind) unknown_pair(a, b);
  switch (a.kind) {
    case BaseKind::Suffix:
      return make_base(BaseKind::Suffix, std::max(a.param, b.param));
    case BaseKind::Multiples: {
      auto g = std::gcd(a.param, b.param);
      unsigned __int128 l =
          static_cast<unsigned __int128>(a.param / g) * static_cast<unsigned __int128>(b.param);
      if (l > static_cast<unsigned __int128>(INT64_MAX))
        raise(ErrorKind::ContractViolation, "modulus overflow in base intersection");
      return make_base(BaseKind::Multiples, static_cast<std::int64_t>(l));
    }
    case BaseKind::Parity:
      return a.param == b.param ? a : make_base(BaseKind::Empty);
    default:
      break;
  }
  unknown_pair(a, b);
}

Fms::Fms(BaseRef base, FiniteSet add, FiniteSet sub) : base_(base) {
  FiniteSet universe = add.set_union(sub);
  std::vector<Elem> addv, subv;
  for (Elem x : universe) {
    bool in = (base_member(base_, x) || add.contains(x)) && !sub.contains(x);
    if (base_member(base_, x)) {
      if (!in) subv.push_back(x);
    } else if (in) {
      addv.push_back(x);
    }
  }
  add_ = FiniteSet(std::move(addv));
  sub_ = FiniteSet(std::move(subv));
}

Fms Fms::finite(FiniteSet elems) {
  return Fms(make_base(BaseKind::Empty), std::move(elems), {});
}

Fms Fms::full() { return Fms(make_base(BaseKind::Full)); }

bool Fms::member(Elem e) const {
  if (e.sentinel()) return false;
  return (base_member(base_, e) || add_.contains(e)) && !sub_.contains(e);
}

Cardinality Fms::cardinality() const {
  if (base_.kind == BaseKind::Empty) return Cardinality::finite(add_.size());
  return Cardinality::infinite(); // infinite base minus a finite sub
}

bool Fms::is_empty() const {
  return base_.kind == BaseKind::Empty && add_.empty();
}

Elem Fms::kth(std::uint64_t k) const {
  FmsCursor cursor(*this);
  Elem last{0};
  for (std::uint64_t i = 0; i < k; ++i) {
    auto e = cursor.next();
    if (!e) raise(ErrorKind::ContractViolation, "kth beyond set size");
    last = *e;
  }
  return last;
}

std::vector<Elem> Fms::enumerate(std::uint64_t horizon) const {
  std::vector<Elem> out;
  FmsCursor cursor(*this);
  for (std::uint64_t i = 0; i < horizon; ++i) {
    auto e = cursor.next();
    if (!e) break;
    out.push_back(*e);
  }
  return out;
}

Fms Fms::modified(const FiniteSet& plus, const FiniteSet& minus) const {
  FiniteSet universe = add_.set_union(sub_).set_union(plus).set_union(minus);
  std::vector<Elem> addv, subv;
  for (Elem x : universe) {
    bool in = (base_member(base_, x) || add_.contains(x)) && !sub_.contains(x);
    in = (in || plus.contains(x)) && !minus.contains(x);
    if (base_member(base_, x)) {
      if (!in) subv.push_back(x);
    } else if (in) {
      addv.push_back(x);
    }
  }
  Fms r;
  r.base_ = base_;
  r.add_ = FiniteSet(std::move(addv));
  r.sub_ = FiniteSet(std::move(subv));
  return r;
}

std::optional<Elem> FmsCursor::next() {
  const auto& add = s_->add();
  for (;;) {
    std::optional<Elem> from_base;
    if (!base_is_empty(s_->base())) from_base = base_kth(s_->base(), base_rank_ + 1);
    std::optional<Elem> from_add;
    if (add_pos_ < add.size()) from_add = add.elems()[add_pos_];

    if (!from_base && !from_add) return std::nullopt;
    // add is disjoint from the base, so the two streams never tie.
    if (from_add && (!from_base || *from_add < *from_base)) {
      ++add_pos_;
      return *from_add;
    }
    ++base_rank_;
    if (!s_->sub().contains(*from_base)) return *from_base;
  }
}

namespace {

// Any element of a\b lies in (base_a \ base_b) or in a's additions or in b's
// subtractions: an x in base_a and base_b misses b only through sub_b. When
// the base difference is infinite, a\b is infinite because only finitely many
// of those elements can be patched away by corrections.
std::optional<FiniteSet> difference_candidates(const Fms& a, const Fms& b) {
  BaseDiff d = base_difference(a.base(), b.base());
  if (!d.finite) return std::nullopt;
  return d.elems.set_union(a.add()).set_union(b.sub());
}

} // namespace

Cardinality difference_card(const Fms& a, const Fms& b) {
  auto candidates = difference_candidates(a, b);
  if (!candidates) return Cardinality::infinite();
  std::uint64_t n = 0;
  for (Elem x : *candidates)
    if (a.member(x) && !b.member(x)) ++n;
  return Cardinality::finite(n);
}

FiniteSet difference_elems(const Fms& a, const Fms& b) {
  auto candidates = difference_candidates(a, b);
  if (!candidates)
    raise(ErrorKind::ContractViolation, "difference_elems on an infinite difference");
  std::vector<Elem> out;
  for (Elem x : *candidates)
    if (a.member(x) && !b.member(x)) out.push_back(x);
  return FiniteSet(std::move(out));
}

Relation relate(const Fms& a, const Fms& b) {
  Relation r;
  r.diff = difference_card(a, b);
  Cardinality back = difference_card(b, a);
  r.subset = r.diff == Cardinality::finite(0);
  r.equal = r.subset && back == Cardinality::finite(0);
  r.symdiff = r.diff + back;
  return r;
}

Cardinality overlap_card(const Fms& a, const Fms& b) {
  return intersect(a, b).cardinality();
}

Fms intersect(const Fms& a, const Fms& b) {
  BaseRef base = base_intersection(a.base(), b.base());
  FiniteSet universe =
      a.add().set_union(a.sub()).set_union(b.add()).set_union(b.sub());
  std::vector<Elem> addv, subv;
  for (Elem x : universe) {
    bool in = a.member(x) && b.member(x);
    if (base_member(base, x)) {
      if (!in) subv.push_back(x);
    } else if (in) {
      addv.push_back(x);
    }
  }
  Fms r(base, FiniteSet(std::move(addv)), FiniteSet(std::move(subv)));
  return r;
}

std::optional<Elem> find_difference_witness(const Fms& a, const Fms& b,
                                            std::uint64_t scan_limit) {
  FmsCursor cursor(a);
  for (std::uint64_t i = 0; i < scan_limit; ++i) {
    auto e = cursor.next();
    if (!e) return std::nullopt;
    if (!b.member(*e)) return e;
  }
  return std::nullopt;
}

std::string describe(BaseRef b) {
  switch (b.kind) {
    case BaseKind::Empty: return "EMPTY";
    case BaseKind::Full: return "FULL";
    case BaseKind::Suffix: return "SUFFIX(" + std::to_string(b.param) + ")";
    case BaseKind::Multiples: return "MULT(" + std::to_string(b.param) + ")";
    case BaseKind::Parity: return "PARITY(" + std::to_string(b.param) + ")";
  }
  return "?";
}

std::string describe(const Fms& s) {
  std::ostringstream os;
  os << describe(s.base());
  auto list = [&os](char sign, const FiniteSet& set) {
    if (set.empty()) return;
    os << sign << '{';
    if (set.size() <= 8) {
      bool first = true;
      for (Elem e : set) {
        if (!first) os << ',';
        first = false;
        os << e.id;
      }
    } else {
      os << "#" << set.size();
    }
    os << '}';
  };
  list('+', s.add());
  list('-', s.sub());
  return os.str();
}

} // namespace genlim
