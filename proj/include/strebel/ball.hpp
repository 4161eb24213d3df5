#pragma once

#include <mpfr.h>

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "strebel/errors.hpp"
#include "strebel/precision.hpp"
#include "strebel/rational.hpp"

namespace strebel {

// Radius arithmetic. Radii are nonnegative doubles; every inexact
// operation is rounded to nearest and then pushed one step toward +inf,
// which dominates the exact value. Exact-zero radii stay exactly zero,
// and nonzero products never silently underflow to 0.
namespace rad {
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double add(double a, double b) {
  if (a == 0) return b;
  if (b == 0) return a;
  return up(a + b);
}
inline double mul(double a, double b) {
  if (a == 0 || b == 0) return 0.0;
  double p = a * b;
  return p == 0 ? std::numeric_limits<double>::denorm_min() : up(p);
}
inline double div_up(double a, double b) {
  if (a == 0) return 0.0;
  double q = a / b;
  return q == 0 ? std::numeric_limits<double>::denorm_min() : up(q);
}
inline double sqrt_up(double a) { return a == 0 ? 0.0 : up(std::sqrt(a)); }
inline double sub_lo(double a, double b) { return b == 0 ? a : down(a - b); }
inline double mul_lo(double a, double b) { return down(a * b); }
inline double sqrt_lo(double a) { return a <= 0 ? 0.0 : down(std::sqrt(a)); }
}  // namespace rad

/// RAII wrapper around mpfr_t with fixed precision.
class Mpfr {
 public:
  explicit Mpfr(long prec) {
    mpfr_init2(v_, static_cast<mpfr_prec_t>(prec));
    mpfr_set_zero(v_, 1);
  }
  Mpfr(const Mpfr& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Mpfr(Mpfr&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Mpfr& operator=(const Mpfr& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Mpfr& operator=(Mpfr&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Mpfr() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  long prec() const { return mpfr_get_prec(v_); }

 private:
  mpfr_t v_;
};

namespace detail {
/// Upper bound on one ulp of m (bounds the rounding error of any single
/// correctly rounded operation producing m). Zero results round exactly.
double ulp_bound(mpfr_srcptr m);
/// Double upper/lower bounds for |m|.
double abs_up(mpfr_srcptr m);
double abs_lo(mpfr_srcptr m);
std::string format_mpfr(mpfr_srcptr m, size_t digits);
}  // namespace detail

/// Real ball: an mpfr midpoint plus a double radius, with the invariant
/// that any exact input contained in the operand balls yields an exact
/// result contained in the output ball.
class RealBall {
 public:
  explicit RealBall(const PrecisionContext& ctx) : mid_(ctx.mantissa_bits), rad_(0) {}

  static RealBall from_int(long v, const PrecisionContext& ctx);
  static RealBall from_double(double v, const PrecisionContext& ctx);  // exact
  static RealBall from_rational(const Rational& q, const PrecisionContext& ctx);
  static RealBall pi(const PrecisionContext& ctx);
  /// Ball spanning [lo, hi] (doubles, exact endpoints).
  static RealBall from_interval(double lo, double hi, const PrecisionContext& ctx);

  long prec() const { return mid_.prec(); }
  PrecisionContext context() const { return PrecisionContext{prec()}; }

  friend RealBall operator+(const RealBall& a, const RealBall& b);
  friend RealBall operator-(const RealBall& a, const RealBall& b);
  friend RealBall operator*(const RealBall& a, const RealBall& b);
  friend RealBall operator/(const RealBall& a, const RealBall& b);  // throws IndeterminateError if b may be 0
  RealBall operator-() const;

  RealBall mul_2si(long e) const;  // exact scaling by 2^e
  RealBall scale(const RealBall& s) const { return *this * s; }
  /// Widened copy (radius increased by extra).
  RealBall inflate(double extra) const { return RealBall(mid_, rad::add(rad_, extra)); }
  RealBall abs() const;
  /// Square root. Balls containing 0 (with nonnegative upper bound) yield
  /// a ball covering [0, sqrt(upper)]; certified-negative input throws.
  RealBall sqrt() const;
  RealBall asin() const;  // requires the ball strictly inside (-1, 1)
  RealBall sin() const;

  bool contains_zero() const;    // |mid| <= rad
  bool is_nonzero() const;       // |mid| > rad
  bool is_positive() const;      // mid - rad > 0
  bool is_negative() const;      // mid + rad < 0
  bool contains(const Rational& q) const;
  /// Certified strict order: upper(a) < lower(b).
  static bool certified_lt(const RealBall& a, const RealBall& b);
  /// True unless the balls are certified disjoint.
  static bool overlaps(const RealBall& a, const RealBall& b);
  /// Tightest ball containing the intersection; throws MismatchError if
  /// the balls are certified disjoint.
  static RealBall intersect(const RealBall& a, const RealBall& b);

  double radius() const { return rad_; }
  double midpoint_double() const { return mpfr_get_d(mid_.get(), MPFR_RNDN); }
  double upper() const;  // double upper bound of mid + rad
  double lower() const;  // double lower bound of mid - rad
  const Mpfr& midpoint() const { return mid_; }

  std::string to_string(size_t digits = 0) const;  // 0 = precision-proportional

  // Internal constructor for module implementations.
  RealBall(Mpfr mid, double rad) : mid_(std::move(mid)), rad_(rad) {}

 private:
  Mpfr mid_;
  double rad_;

  friend class ComplexBall;
};

RealBall atan2(const RealBall& y, const RealBall& x);  // see ComplexBall::arg for cut handling

/// Complex ball: an mpfr midpoint pair and one radius bounding the error
/// of the point in C (covers both components jointly).
class ComplexBall {
 public:
  explicit ComplexBall(const PrecisionContext& ctx)
      : re_(ctx.mantissa_bits), im_(ctx.mantissa_bits), rad_(0) {}

  static ComplexBall from_int(long re, long im, const PrecisionContext& ctx);
  static ComplexBall from_rational(const Rational& re, const Rational& im, const PrecisionContext& ctx);
  static ComplexBall from_real(const RealBall& re);
  static ComplexBall make(const RealBall& re, const RealBall& im);
  static ComplexBall from_doubles(double re, double im, const PrecisionContext& ctx);  // exact

  long prec() const { return re_.prec(); }
  PrecisionContext context() const { return PrecisionContext{prec()}; }

  friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator/(const ComplexBall& a, const ComplexBall& b);
  ComplexBall operator-() const;
  ComplexBall conj() const;
  ComplexBall mul_2si(long e) const;
  ComplexBall scale(const RealBall& s) const;
  ComplexBall scale_int(long s) const;

  /// Principal square root of the midpoint with a radius valid for the
  /// continuous branch through it; requires the ball to exclude 0.
  /// For balls crossing the negative real axis the result still contains
  /// the image of one continuous branch (callers tracking branches by
  /// continuity flip the sign themselves).
  ComplexBall sqrt() const;

  RealBall abs() const;
  /// arg of the ball; requires 0 excluded. The midpoint is rotated by an
  /// exact multiple of pi/2 before atan2 so the branch cut never crosses
  /// the ball; the result may therefore fall outside (-pi, pi].
  RealBall arg() const;
  RealBall real() const;
  RealBall imag() const;

  bool contains_zero() const;
  bool is_nonzero() const;
  /// True unless certified distinct from q (both components).
  bool contains(const Rational& re, const Rational& im) const;
  static bool overlaps(const ComplexBall& a, const ComplexBall& b);
  /// Certified lower/upper bounds on |a - b| as doubles.
  static double dist_lo(const ComplexBall& a, const ComplexBall& b);
  static double dist_up(const ComplexBall& a, const ComplexBall& b);

  double radius() const { return rad_; }
  std::complex<double> midpoint_complex() const {
    return {mpfr_get_d(re_.get(), MPFR_RNDN), mpfr_get_d(im_.get(), MPFR_RNDN)};
  }
  double abs_up() const;
  double abs_lo() const;  // lower bound of |ball| (0 if 0 may be inside)
  const Mpfr& re() const { return re_; }
  const Mpfr& im() const { return im_; }

  std::string to_string(size_t digits = 0) const;

  ComplexBall(Mpfr re, Mpfr im, double rad) : re_(std::move(re)), im_(std::move(im)), rad_(rad) {}

  /// Widened copy (radius increased by extra).
  ComplexBall inflate(double extra) const;

 private:
  Mpfr re_, im_;
  double rad_;
};

/// Plain complex midpoint arithmetic at a fixed precision — no radius
/// tracking. Used by the heuristic inner loops (root iteration, ODE
/// stepping) whose outputs are certified afterwards by ball arithmetic.
struct MpComplex {
  Mpfr re, im;

  explicit MpComplex(long prec) : re(prec), im(prec) {}
  MpComplex(const Mpfr& r, const Mpfr& i) : re(r), im(i) {}

  long prec() const { return re.prec(); }
  static MpComplex from_d(std::complex<double> z, long prec);
  static MpComplex from_ball(const ComplexBall& b);
  std::complex<double> to_d() const {
    return {mpfr_get_d(re.get(), MPFR_RNDN), mpfr_get_d(im.get(), MPFR_RNDN)};
  }

  friend MpComplex operator+(const MpComplex& a, const MpComplex& b);
  friend MpComplex operator-(const MpComplex& a, const MpComplex& b);
  friend MpComplex operator*(const MpComplex& a, const MpComplex& b);
  friend MpComplex operator/(const MpComplex& a, const MpComplex& b);
  MpComplex operator-() const;
  MpComplex conj() const;
  MpComplex scale_d(double s) const;
  MpComplex scale_si(long num, long den) const;  // exact rational scaling
  MpComplex sqrt() const;                        // principal branch
  Mpfr abs() const;
  double abs_d() const;
  bool is_zero() const { return mpfr_zero_p(re.get()) && mpfr_zero_p(im.get()); }
};

}  // namespace strebel
