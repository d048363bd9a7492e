// Extended slopes: elements of Q ∪ {∞, ∅} stored as normalized integer
// pairs, slope lengths on a cusp cross-section, and rigorous enumeration of
// all slopes up to a length cutoff.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "interval.hpp"

namespace exfill {

// Normal forms: (p,q) with q > 0 and gcd(|p|,q) = 1; (1,0) = ∞; (0,0) = ∅.
struct ExtSlope {
  std::int64_t p = 0;
  std::int64_t q = 0;

  bool is_empty() const { return p == 0 && q == 0; }
  bool is_infinity() const { return q == 0 && p != 0; }

  friend bool operator==(const ExtSlope& a, const ExtSlope& b) {
    return a.p == b.p && a.q == b.q;
  }
  friend bool operator!=(const ExtSlope& a, const ExtSlope& b) {
    return !(a == b);
  }
  // Total order used for canonical representatives and sorted output:
  // ∅ < ∞ < rationals ordered by value (ties impossible in normal form).
  friend bool operator<(const ExtSlope& a, const ExtSlope& b) {
    if (a.is_empty() != b.is_empty()) return a.is_empty();
    if (a.is_empty()) return false;
    if (a.is_infinity() != b.is_infinity()) return a.is_infinity();
    if (a.is_infinity()) return false;
    // p/q < r/s  with q,s > 0
    return static_cast<__int128>(a.p) * b.q < static_cast<__int128>(b.p) * a.q;
  }
};

ExtSlope normalize_slope(std::int64_t p, std::int64_t q);

inline ExtSlope slope_empty() { return ExtSlope{0, 0}; }
inline ExtSlope slope_infinity() { return ExtSlope{1, 0}; }

// "(p,q)" rendering used by every report (∅ is "(0,0)").
std::string slope_text(const ExtSlope& s);
// Parses "(p,q)"; throws std::invalid_argument on malformed input.
ExtSlope parse_slope(const std::string& text);

// Geometry of one cusp: a shape x + iy (Im > 0) and a horospherical area A,
// both as rigorous enclosures.
struct CuspGeometry {
  CMR shape;  // x + iy
  MR area;    // A
};

// Rigorous enclosure of sqrt(A/y * ((p + x q)^2 + (y q)^2)).
MR slope_length(const CuspGeometry& g, const ExtSlope& s);

// Every normalized slope whose length lower bound is <= bound — hence a
// superset of all slopes of true length <= bound.  Sorted by (q, p).
std::vector<ExtSlope> enumerate_short_slopes(const CuspGeometry& g,
                                             double bound);

}  // namespace exfill
