#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace grql {

/// Upper/lower bound of a cardinality interval. Ordered Zero < One < Many.
enum class Bound { Zero = 0, One = 1, Many = 2 };

/// Cardinality mode [lo, hi] with lo in {0,1}, hi in {0,1,inf}, lo <= hi.
///
/// Exactly five inhabitants exist; construct them through the named
/// constants or `Cardinality::make`, which rejects malformed intervals.
class Cardinality {
 public:
  constexpr Cardinality() = default;

  static constexpr Cardinality make(Bound lo, Bound hi) {
    if (lo == Bound::Many || static_cast<int>(lo) > static_cast<int>(hi)) {
      throw std::invalid_argument("malformed cardinality interval");
    }
    return Cardinality(lo, hi);
  }

  static constexpr Cardinality empty() { return {Bound::Zero, Bound::Zero}; }
  static constexpr Cardinality optional() { return {Bound::Zero, Bound::One}; }
  static constexpr Cardinality one() { return {Bound::One, Bound::One}; }
  static constexpr Cardinality many() { return {Bound::Zero, Bound::Many}; }
  static constexpr Cardinality at_least_one() { return {Bound::One, Bound::Many}; }

  constexpr Bound lo() const { return lo_; }
  constexpr Bound hi() const { return hi_; }

  /// True iff a sequence of length n satisfies this mode.
  constexpr bool admits(std::size_t n) const {
    if (n < static_cast<std::size_t>(lo_)) return false;
    if (hi_ == Bound::Many) return true;
    return n <= static_cast<std::size_t>(hi_);
  }

  constexpr bool operator==(const Cardinality&) const = default;

  std::string to_string() const;

 private:
  constexpr Cardinality(Bound lo, Bound hi) : lo_(lo), hi_(hi) {}

  Bound lo_ = Bound::Zero;
  Bound hi_ = Bound::Many;
};

/// All five modes in a fixed order: [0,0], [0,1], [0,inf], [1,1], [1,inf].
inline constexpr std::array<Cardinality, 5> kAllCardinalities = {
    Cardinality::empty(), Cardinality::optional(), Cardinality::many(),
    Cardinality::one(), Cardinality::at_least_one()};

namespace detail {

constexpr int rank(Bound b) { return static_cast<int>(b); }

// Rounds a natural-number sum into the bound set; lower bounds round down
// into {0,1}, upper bounds round up into {0,1,inf}.
constexpr Bound round_lower(int v) { return v >= 1 ? Bound::One : Bound::Zero; }
constexpr Bound round_upper(int v) {
  return v == 0 ? Bound::Zero : (v == 1 ? Bound::One : Bound::Many);
}

constexpr int bound_sum(Bound a, Bound b) {
  if (a == Bound::Many || b == Bound::Many) return 2;
  return rank(a) + rank(b);
}

// 0 * inf = 0
constexpr Bound bound_product(Bound a, Bound b) {
  if (a == Bound::Zero || b == Bound::Zero) return Bound::Zero;
  if (a == Bound::Many || b == Bound::Many) return Bound::Many;
  return Bound::One;
}

constexpr Bound bound_min(Bound a, Bound b) { return rank(a) <= rank(b) ? a : b; }
constexpr Bound bound_max(Bound a, Bound b) { return rank(a) >= rank(b) ? a : b; }

}  // namespace detail

/// Interval containment: a <= b iff b.lo <= a.lo and a.hi <= b.hi.
constexpr bool card_le(Cardinality a, Cardinality b) {
  return detail::rank(b.lo()) <= detail::rank(a.lo()) &&
         detail::rank(a.hi()) <= detail::rank(b.hi());
}

constexpr Cardinality card_add(Cardinality a, Cardinality b) {
  return Cardinality::make(detail::round_lower(detail::bound_sum(a.lo(), b.lo())),
                           detail::round_upper(detail::bound_sum(a.hi(), b.hi())));
}

constexpr Cardinality card_mul(Cardinality a, Cardinality b) {
  return Cardinality::make(detail::bound_product(a.lo(), b.lo()),
                           detail::bound_product(a.hi(), b.hi()));
}

/// Interval hull, used for the result mode of a conditional.
constexpr Cardinality card_if_join(Cardinality a, Cardinality b) {
  return Cardinality::make(detail::bound_min(a.lo(), b.lo()),
                           detail::bound_max(a.hi(), b.hi()));
}

inline std::string Cardinality::to_string() const {
  auto show = [](Bound b) -> std::string {
    switch (b) {
      case Bound::Zero: return "0";
      case Bound::One: return "1";
      case Bound::Many: return "inf";
    }
    return "?";
  };
  return "[" + show(lo_) + ", " + show(hi_) + "]";
}

}  // namespace grql
