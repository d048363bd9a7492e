// Midpoint-radius interval arithmetic with outward rounding, in real and
// complex (disc) flavours.  Every operation returns an enclosure that is
// valid under IEEE double rounding: the exact result of the operation on any
// points inside the input enclosures lies inside the output enclosure.
//
// Outward rounding is done by inflating radii with a small multiplicative
// and additive bump after each double-precision computation, which dominates
// the worst-case rounding error of the expression used for the midpoint and
// radius (a handful of primitive operations each).
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace exfill {

namespace detail {
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Covers the accumulated relative error of up to ~16 primitive double
// operations plus denormal slack.
inline double bump(double r, double scale) {
  double s = std::fabs(scale) + std::fabs(r);
  return r + 32.0 * kEps * s + 16.0 * std::numeric_limits<double>::min();
}
}  // namespace detail

// ---------------------------------------------------------------- real MR --

struct MR {
  double m = 0.0;  // midpoint
  double r = 0.0;  // radius, |x - m| <= r

  MR() = default;
  explicit MR(double mid, double rad = 0.0) : m(mid), r(rad) {
    if (!(rad >= 0.0)) throw std::invalid_argument("negative interval radius");
  }

  double lo() const { return m - r; }
  double hi() const { return m + r; }
  bool contains(double x) const { return std::fabs(x - m) <= r; }
  bool certainly_positive() const { return m - r > 0.0; }
  bool certainly_negative() const { return m + r < 0.0; }
  // |x| upper / lower bounds over the interval
  double mag() const { return std::fabs(m) + r; }
  double mig() const {
    double v = std::fabs(m) - r;
    return v > 0.0 ? v : 0.0;
  }
};

inline MR mr_exact(double x) { return MR(x, 0.0); }

inline MR operator+(const MR& a, const MR& b) {
  double m = a.m + b.m;
  return MR(m, detail::bump(a.r + b.r, m));
}
inline MR operator-(const MR& a, const MR& b) {
  double m = a.m - b.m;
  return MR(m, detail::bump(a.r + b.r, m));
}
inline MR operator-(const MR& a) { return MR(-a.m, a.r); }
inline MR operator*(const MR& a, const MR& b) {
  double m = a.m * b.m;
  double r = std::fabs(a.m) * b.r + std::fabs(b.m) * a.r + a.r * b.r;
  return MR(m, detail::bump(r, m));
}
inline MR inv(const MR& a) {
  double d = a.mig();
  if (d <= 0.0) throw std::domain_error("interval division by zero");
  double m = 1.0 / a.m;
  double r = a.r / (std::fabs(a.m) * d);
  return MR(m, detail::bump(r, m));
}
inline MR operator/(const MR& a, const MR& b) { return a * inv(b); }
inline MR operator*(double c, const MR& a) { return mr_exact(c) * a; }
inline MR operator+(double c, const MR& a) { return mr_exact(c) + a; }
inline MR operator-(double c, const MR& a) { return mr_exact(c) - a; }

inline MR sqrt(const MR& a) {
  double lo = a.lo(), hi = a.hi();
  if (lo < 0.0) throw std::domain_error("interval sqrt of negative value");
  double slo = std::sqrt(lo), shi = std::sqrt(hi);
  double m = 0.5 * (slo + shi), r = 0.5 * (shi - slo);
  return MR(m, detail::bump(r, m));
}
inline MR log(const MR& a) {
  double lo = a.lo(), hi = a.hi();
  if (lo <= 0.0) throw std::domain_error("interval log of non-positive value");
  double llo = std::log(lo), lhi = std::log(hi);
  double m = 0.5 * (llo + lhi), r = 0.5 * (lhi - llo);
  return MR(m, detail::bump(r, m));
}
inline MR exp(const MR& a) {
  double elo = std::exp(a.lo()), ehi = std::exp(a.hi());
  double m = 0.5 * (elo + ehi), r = 0.5 * (ehi - elo);
  return MR(m, detail::bump(r, m));
}
inline MR abs(const MR& a) {
  if (a.r >= std::fabs(a.m)) {
    double hi = a.mag();
    return MR(0.5 * hi, detail::bump(0.5 * hi, hi));
  }
  return MR(std::fabs(a.m), a.r);
}
inline MR sqr(const MR& a) { return a * a; }

// Comparison helpers: true only when certain.
inline bool certainly_less(const MR& a, const MR& b) { return a.hi() < b.lo(); }
inline bool certainly_greater(const MR& a, const MR& b) { return a.lo() > b.hi(); }

// ------------------------------------------------------------ complex disc --

using cplx = std::complex<double>;

struct CMR {
  cplx m{0.0, 0.0};  // midpoint
  double r = 0.0;    // radius, |z - m| <= r

  CMR() = default;
  explicit CMR(cplx mid, double rad = 0.0) : m(mid), r(rad) {
    if (!(rad >= 0.0)) throw std::invalid_argument("negative disc radius");
  }
  explicit CMR(double re, double im = 0.0, double rad = 0.0)
      : m(re, im), r(rad) {
    if (!(rad >= 0.0)) throw std::invalid_argument("negative disc radius");
  }

  double mag() const { return std::abs(m) + r; }
  double mig() const {
    double v = std::abs(m) - r;
    return v > 0.0 ? v : 0.0;
  }
  MR real() const { return MR(m.real(), r); }
  MR imag() const { return MR(m.imag(), r); }
  bool contains(cplx z) const { return std::abs(z - m) <= r; }
};

inline CMR cmr_exact(cplx z) { return CMR(z, 0.0); }

inline CMR operator+(const CMR& a, const CMR& b) {
  cplx m = a.m + b.m;
  return CMR(m, detail::bump(a.r + b.r, std::abs(m)));
}
inline CMR operator-(const CMR& a, const CMR& b) {
  cplx m = a.m - b.m;
  return CMR(m, detail::bump(a.r + b.r, std::abs(m)));
}
inline CMR operator-(const CMR& a) { return CMR(-a.m, a.r); }
inline CMR operator*(const CMR& a, const CMR& b) {
  cplx m = a.m * b.m;
  double r = std::abs(a.m) * b.r + std::abs(b.m) * a.r + a.r * b.r;
  return CMR(m, detail::bump(r, std::abs(m)));
}
inline CMR inv(const CMR& a) {
  double d = a.mig();
  if (d <= 0.0) throw std::domain_error("disc division by zero");
  cplx m = 1.0 / a.m;
  double r = a.r / (std::abs(a.m) * d);
  return CMR(m, detail::bump(r, std::abs(m)));
}
inline CMR operator/(const CMR& a, const CMR& b) { return a * inv(b); }
inline CMR operator*(double c, const CMR& a) {
  cplx m = c * a.m;
  return CMR(m, detail::bump(std::fabs(c) * a.r, std::abs(m)));
}
inline CMR operator*(cplx c, const CMR& a) { return cmr_exact(c) * a; }
inline CMR operator+(cplx c, const CMR& a) { return cmr_exact(c) + a; }
inline CMR operator-(cplx c, const CMR& a) { return cmr_exact(c) - a; }
inline CMR conj(const CMR& a) { return CMR(std::conj(a.m), a.r); }

// True when the whole disc avoids the branch cut (-inf, 0] of the principal
// logarithm: either Re > r somewhere safe, or the disc stays off the
// non-positive real axis.
inline bool off_log_cut(const CMR& a) {
  if (a.mig() <= 0.0) return false;               // contains or touches 0
  if (a.m.real() >= 0.0) return true;             // cut is on the far side
  return std::fabs(a.m.imag()) > a.r;             // clears the negative axis
}

// Principal log of a disc avoiding the cut.  |log z - log m| <= -log(1 - u)
// with u = r/|m| < 1.
inline CMR log(const CMR& a) {
  if (!off_log_cut(a)) throw std::domain_error("disc log across branch cut");
  double u = a.r / std::abs(a.m);
  if (u >= 1.0) throw std::domain_error("disc log across branch cut");
  cplx m = std::log(a.m);
  double r = -std::log1p(-u);
  return CMR(m, detail::bump(r, std::abs(m)));
}
inline CMR exp(const CMR& a) {
  cplx m = std::exp(a.m);
  double r = std::abs(m) * std::expm1(a.r);
  return CMR(m, detail::bump(r, std::abs(m)));
}
// Upper/lower bounds of |z| as a real interval.
inline MR abs(const CMR& a) {
  double lo = a.mig(), hi = a.mag();
  double m = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  return MR(m, detail::bump(r, m));
}

}  // namespace exfill
