#include "slopes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace exfill {

ExtSlope normalize_slope(std::int64_t p, std::int64_t q) {
  if (p == 0 && q == 0) return ExtSlope{0, 0};
  std::int64_t g = std::gcd(std::llabs(p), std::llabs(q));
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  return ExtSlope{p, q};
}

std::string slope_text(const ExtSlope& s) {
  return "(" + std::to_string(s.p) + "," + std::to_string(s.q) + ")";
}

ExtSlope parse_slope(const std::string& text) {
  std::size_t i = 0, n = text.size();
  auto skip_ws = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i >= n || text[i] != '(')
    throw std::invalid_argument("slope must look like (p,q): " + text);
  ++i;
  std::size_t comma = text.find(',', i);
  std::size_t close = text.find(')', i);
  if (comma == std::string::npos || close == std::string::npos || comma > close)
    throw std::invalid_argument("slope must look like (p,q): " + text);
  try {
    std::int64_t p = std::stoll(text.substr(i, comma - i));
    std::int64_t q = std::stoll(text.substr(comma + 1, close - comma - 1));
    return normalize_slope(p, q);
  } catch (const std::exception&) {
    throw std::invalid_argument("slope must look like (p,q): " + text);
  }
}

MR slope_length(const CuspGeometry& g, const ExtSlope& s) {
  if (s.is_empty()) throw std::invalid_argument("length of the empty slope");
  MR x = g.shape.real(), y = g.shape.imag();
  if (!y.certainly_positive())
    throw std::domain_error("cusp shape must have positive imaginary part");
  if (!g.area.certainly_positive())
    throw std::domain_error("cusp area must be positive");
  MR p = mr_exact(static_cast<double>(s.p));
  MR q = mr_exact(static_cast<double>(s.q));
  MR len2 = (g.area / y) * (sqr(p + x * q) + sqr(y * q));
  return sqrt(len2);
}

std::vector<ExtSlope> enumerate_short_slopes(const CuspGeometry& g,
                                             double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("bound must be positive");
  MR x = g.shape.real(), y = g.shape.imag();
  if (!y.certainly_positive())
    throw std::domain_error("cusp shape must have positive imaginary part");
  if (!g.area.certainly_positive())
    throw std::domain_error("cusp area must be positive");

  std::vector<ExtSlope> out;
  MR bound2 = mr_exact(bound * bound);
  // len^2 = A/y * ((p + x q)^2 + (y q)^2).  Walk q upward; once the q-term
  // alone certainly exceeds the bound for all larger q, stop.  For each q,
  // |p + x q| is bounded by sqrt(bound^2 * y/A - (y q)^2); scan every integer
  // p in the outward-rounded range.
  MR y_over_A = y / g.area;
  for (std::int64_t q = 0;; ++q) {
    MR yq2 = sqr(y * mr_exact(static_cast<double>(q)));
    MR p_room2 = bound2 * y_over_A - yq2;
    if (!(p_room2.hi() >= 0.0)) {
      if (q == 0) continue;  // cannot happen (q=0 term is 0), defensive
      break;                 // larger q only grows yq2: done
    }
    double p_room = std::sqrt(std::max(0.0, p_room2.hi()));
    // p must satisfy |p + x q| <= p_room (outer bound)
    double center = -x.m * static_cast<double>(q);
    double slack = x.r * static_cast<double>(q) + p_room + 1e-12;
    std::int64_t p_lo = static_cast<std::int64_t>(std::floor(center - slack));
    std::int64_t p_hi = static_cast<std::int64_t>(std::ceil(center + slack));
    for (std::int64_t p = p_lo; p <= p_hi; ++p) {
      ExtSlope s = normalize_slope(p, q);
      if (s.is_empty()) continue;
      if (s.p != p || s.q != q) continue;  // only normal forms, once each
      MR len = slope_length(g, s);
      if (len.lo() <= bound) out.push_back(s);
    }
    if (q == 0) continue;
  }
  std::sort(out.begin(), out.end(), [](const ExtSlope& a, const ExtSlope& b) {
    return std::pair(a.q, a.p) < std::pair(b.q, b.p);
  });
  return out;
}

}  // namespace exfill
