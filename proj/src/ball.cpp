#include "strebel/ball.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <vector>

namespace strebel {

namespace detail {

double ulp_bound(mpfr_srcptr m) {
  if (mpfr_zero_p(m)) return 0.0;
  if (!mpfr_number_p(m)) return std::numeric_limits<double>::infinity();
  long e = static_cast<long>(mpfr_get_exp(m)) - static_cast<long>(mpfr_get_prec(m));
  if (e > 1000) return std::numeric_limits<double>::infinity();
  if (e < -1070) return std::numeric_limits<double>::denorm_min();
  double u = std::ldexp(1.0, static_cast<int>(e));
  return u > 0 ? u : std::numeric_limits<double>::denorm_min();
}

double abs_up(mpfr_srcptr m) { return std::fabs(mpfr_get_d(m, MPFR_RNDA)); }

double abs_lo(mpfr_srcptr m) { return std::fabs(mpfr_get_d(m, MPFR_RNDZ)); }

std::string format_mpfr(mpfr_srcptr m, size_t digits) {
  if (mpfr_zero_p(m)) return "0";
  if (mpfr_nan_p(m)) return "nan";
  if (mpfr_inf_p(m)) return mpfr_sgn(m) > 0 ? "inf" : "-inf";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, digits, m, MPFR_RNDN);
  std::string s(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!s.empty() && s[0] == '-') {
    sign = "-";
    s.erase(0, 1);
  }
  // Trim trailing zeros but keep at least one digit.
  size_t last = s.find_last_not_of('0');
  if (last != std::string::npos) s.erase(last + 1);
  if (s.empty()) s = "0";
  std::string out = sign + s.substr(0, 1);
  if (s.size() > 1) out += "." + s.substr(1);
  long e = static_cast<long>(exp10) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

}  // namespace detail

using detail::abs_lo;
using detail::abs_up;
using detail::ulp_bound;

// ---------------------------------------------------------------------------
// RealBall

RealBall RealBall::from_int(long v, const PrecisionContext& ctx) {
  Mpfr m(ctx.mantissa_bits);
  int t = mpfr_set_si(m.get(), v, MPFR_RNDN);
  return RealBall(std::move(m), t == 0 ? 0.0 : ulp_bound(m.get()));
}

RealBall RealBall::from_double(double v, const PrecisionContext& ctx) {
  Mpfr m(ctx.mantissa_bits);
  int t = mpfr_set_d(m.get(), v, MPFR_RNDN);
  return RealBall(std::move(m), t == 0 ? 0.0 : ulp_bound(m.get()));
}

RealBall RealBall::from_rational(const Rational& q, const PrecisionContext& ctx) {
  Mpfr m(ctx.mantissa_bits);
  int t = mpfr_set_q(m.get(), q.raw(), MPFR_RNDN);
  return RealBall(std::move(m), t == 0 ? 0.0 : ulp_bound(m.get()));
}

RealBall RealBall::pi(const PrecisionContext& ctx) {
  Mpfr m(ctx.mantissa_bits);
  mpfr_const_pi(m.get(), MPFR_RNDN);
  return RealBall(std::move(m), ulp_bound(m.get()));
}

RealBall RealBall::from_interval(double lo, double hi, const PrecisionContext& ctx) {
  if (!(lo <= hi)) throw RangeError("RealBall::from_interval: lo > hi");
  Mpfr m(ctx.mantissa_bits);
  double c = 0.5 * (lo + hi);
  mpfr_set_d(m.get(), c, MPFR_RNDN);
  double r = rad::add(std::max(rad::up(hi - c), rad::up(c - lo)), 0.0);
  return RealBall(std::move(m), r);
}

RealBall operator+(const RealBall& a, const RealBall& b) {
  Mpfr m(std::max(a.prec(), b.prec()));
  int t = mpfr_add(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  double r = rad::add(a.rad_, b.rad_);
  if (t != 0) r = rad::add(r, ulp_bound(m.get()));
  return RealBall(std::move(m), r);
}

RealBall operator-(const RealBall& a, const RealBall& b) {
  Mpfr m(std::max(a.prec(), b.prec()));
  int t = mpfr_sub(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  double r = rad::add(a.rad_, b.rad_);
  if (t != 0) r = rad::add(r, ulp_bound(m.get()));
  return RealBall(std::move(m), r);
}

RealBall operator*(const RealBall& a, const RealBall& b) {
  Mpfr m(std::max(a.prec(), b.prec()));
  int t = mpfr_mul(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  double r = rad::add(rad::add(rad::mul(abs_up(a.mid_.get()), b.rad_), rad::mul(abs_up(b.mid_.get()), a.rad_)),
                      rad::mul(a.rad_, b.rad_));
  if (t != 0) r = rad::add(r, ulp_bound(m.get()));
  return RealBall(std::move(m), r);
}

RealBall operator/(const RealBall& a, const RealBall& b) {
  double blo = abs_lo(b.mid_.get());
  if (!(blo > b.rad_)) throw IndeterminateError("RealBall division: denominator may contain zero");
  Mpfr m(std::max(a.prec(), b.prec()));
  int t = mpfr_div(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  double num = rad::add(rad::mul(a.rad_, abs_up(b.mid_.get())), rad::mul(abs_up(a.mid_.get()), b.rad_));
  double den = rad::mul_lo(blo, rad::sub_lo(blo, b.rad_));
  double r = rad::div_up(num, den);
  if (t != 0) r = rad::add(r, ulp_bound(m.get()));
  return RealBall(std::move(m), r);
}

RealBall RealBall::operator-() const {
  Mpfr m(prec());
  mpfr_neg(m.get(), mid_.get(), MPFR_RNDN);  // exact
  return RealBall(std::move(m), rad_);
}

RealBall RealBall::mul_2si(long e) const {
  Mpfr m(prec());
  mpfr_mul_2si(m.get(), mid_.get(), e, MPFR_RNDN);  // exact
  double r = rad_;
  if (e >= 0) {
    for (long i = 0; i < e; ++i) r = rad::mul(r, 2.0);
  } else {
    for (long i = 0; i < -e; ++i) r = rad::up(r * 0.5);
  }
  return RealBall(std::move(m), r);
}

RealBall RealBall::abs() const {
  Mpfr m(prec());
  mpfr_abs(m.get(), mid_.get(), MPFR_RNDN);  // exact
  // | |x| - |m| | <= |x - m| <= rad, valid even when the ball straddles 0.
  return RealBall(std::move(m), rad_);
}

RealBall RealBall::sqrt() const {
  double mlo = abs_lo(mid_.get());
  bool mid_nonneg = mpfr_sgn(mid_.get()) >= 0;
  if (mid_nonneg && mlo > rad_) {
    Mpfr m(prec());
    int t = mpfr_sqrt(m.get(), mid_.get(), MPFR_RNDN);
    double denom = rad::mul_lo(2.0, rad::sqrt_lo(rad::sub_lo(mlo, rad_)));
    double r = rad::div_up(rad_, denom);
    if (t != 0) r = rad::add(r, ulp_bound(m.get()));
    return RealBall(std::move(m), r);
  }
  if (!mid_nonneg && mlo > rad_) throw RangeError("RealBall::sqrt of certified negative ball");
  // Ball contains 0: result covers [0, sqrt(upper)].
  double hi = rad::add(abs_up(mid_.get()), rad_);
  double shi = rad::sqrt_up(hi);
  Mpfr m(prec());
  mpfr_set_d(m.get(), 0.5 * shi, MPFR_RNDN);
  return RealBall(std::move(m), rad::up(0.5 * shi));
}

RealBall RealBall::asin() const {
  double xu = rad::add(abs_up(mid_.get()), rad_);
  if (!(xu < 1.0)) throw RangeError("RealBall::asin: ball not strictly inside (-1,1)");
  double denom = rad::sqrt_lo(rad::sub_lo(1.0, rad::mul(xu, xu)));
  if (!(denom > 0.0)) throw RangeError("RealBall::asin: derivative bound unavailable");
  Mpfr m(prec());
  int t = mpfr_asin(m.get(), mid_.get(), MPFR_RNDN);
  double r = rad::div_up(rad_, denom);
  if (t != 0) r = rad::add(r, ulp_bound(m.get()));
  return RealBall(std::move(m), r);
}

RealBall RealBall::sin() const {
  Mpfr m(prec());
  int t = mpfr_sin(m.get(), mid_.get(), MPFR_RNDN);
  double r = rad_;  // |sin'| <= 1
  if (t != 0) r = rad::add(r, ulp_bound(m.get()));
  return RealBall(std::move(m), r);
}

bool RealBall::contains_zero() const {
  Mpfr t(prec());
  mpfr_abs(t.get(), mid_.get(), MPFR_RNDN);
  return mpfr_cmp_d(t.get(), rad_) <= 0;
}

bool RealBall::is_nonzero() const {
  Mpfr t(prec());
  mpfr_abs(t.get(), mid_.get(), MPFR_RNDN);
  return mpfr_cmp_d(t.get(), rad_) > 0;
}

bool RealBall::is_positive() const {
  return mpfr_sgn(mid_.get()) > 0 && mpfr_cmp_d(mid_.get(), rad_) > 0;
}

bool RealBall::is_negative() const {
  Mpfr t(prec());
  mpfr_neg(t.get(), mid_.get(), MPFR_RNDN);
  return mpfr_sgn(mid_.get()) < 0 && mpfr_cmp_d(t.get(), rad_) > 0;
}

bool RealBall::contains(const Rational& q) const {
  long wp = prec() + 64;
  Mpfr qq(wp);
  int tq = mpfr_set_q(qq.get(), q.raw(), MPFR_RNDN);
  double e1 = tq ? ulp_bound(qq.get()) : 0.0;
  Mpfr d(wp);
  int td = mpfr_sub(d.get(), mid_.get(), qq.get(), MPFR_RNDN);
  double du = rad::add(abs_up(d.get()), rad::add(e1, td ? ulp_bound(d.get()) : 0.0));
  return du <= rad_;
}

bool RealBall::certified_lt(const RealBall& a, const RealBall& b) {
  Mpfr d(std::max(a.prec(), b.prec()) + 32);
  mpfr_sub(d.get(), b.mid_.get(), a.mid_.get(), MPFR_RNDD);
  double dlo = mpfr_get_d(d.get(), MPFR_RNDD);
  return dlo > rad::add(a.rad_, b.rad_);
}

bool RealBall::overlaps(const RealBall& a, const RealBall& b) {
  Mpfr d(std::max(a.prec(), b.prec()) + 32);
  mpfr_sub(d.get(), b.mid_.get(), a.mid_.get(), MPFR_RNDN);
  double dlo = rad::down(std::fabs(mpfr_get_d(d.get(), MPFR_RNDZ)));
  dlo = rad::sub_lo(dlo, ulp_bound(d.get()));
  return !(dlo > rad::add(a.rad_, b.rad_));
}

RealBall RealBall::intersect(const RealBall& a, const RealBall& b) {
  long wp = std::max(a.prec(), b.prec());
  Mpfr alo(wp + 64), ahi(wp + 64), blo(wp + 64), bhi(wp + 64);
  mpfr_sub_d(alo.get(), a.mid_.get(), a.rad_, MPFR_RNDD);
  mpfr_add_d(ahi.get(), a.mid_.get(), a.rad_, MPFR_RNDU);
  mpfr_sub_d(blo.get(), b.mid_.get(), b.rad_, MPFR_RNDD);
  mpfr_add_d(bhi.get(), b.mid_.get(), b.rad_, MPFR_RNDU);
  Mpfr lo(wp + 64), hi(wp + 64);
  mpfr_max(lo.get(), alo.get(), blo.get(), MPFR_RNDD);
  mpfr_min(hi.get(), ahi.get(), bhi.get(), MPFR_RNDU);
  if (mpfr_cmp(lo.get(), hi.get()) > 0)
    throw MismatchError("RealBall::intersect: balls are certified disjoint");
  Mpfr mid(wp), half(wp + 64);
  mpfr_add(half.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2si(half.get(), half.get(), 1, MPFR_RNDN);
  mpfr_set(mid.get(), half.get(), MPFR_RNDN);
  Mpfr w(wp + 64);
  mpfr_sub(w.get(), hi.get(), lo.get(), MPFR_RNDU);
  double r = rad::add(rad::up(0.5 * abs_up(w.get())), rad::add(ulp_bound(mid.get()), ulp_bound(half.get())));
  return RealBall(std::move(mid), r);
}

double RealBall::upper() const { return rad::add(mpfr_get_d(mid_.get(), MPFR_RNDU), rad_); }

double RealBall::lower() const { return -rad::add(-mpfr_get_d(mid_.get(), MPFR_RNDD), rad_); }

std::string RealBall::to_string(size_t digits) const {
  if (digits == 0) digits = static_cast<size_t>(static_cast<double>(prec()) * 0.30103) + 2;
  char radbuf[40];
  std::snprintf(radbuf, sizeof(radbuf), "%.3e", rad_);
  return detail::format_mpfr(mid_.get(), digits) + " +/- " + radbuf;
}

RealBall atan2(const RealBall& y, const RealBall& x) { return ComplexBall::make(x, y).arg(); }

// ---------------------------------------------------------------------------
// ComplexBall

ComplexBall ComplexBall::from_int(long re, long im, const PrecisionContext& ctx) {
  Mpfr r(ctx.mantissa_bits), i(ctx.mantissa_bits);
  int t1 = mpfr_set_si(r.get(), re, MPFR_RNDN);
  int t2 = mpfr_set_si(i.get(), im, MPFR_RNDN);
  double rr = rad::add(t1 ? ulp_bound(r.get()) : 0.0, t2 ? ulp_bound(i.get()) : 0.0);
  return ComplexBall(std::move(r), std::move(i), rr);
}

ComplexBall ComplexBall::from_rational(const Rational& re, const Rational& im, const PrecisionContext& ctx) {
  return make(RealBall::from_rational(re, ctx), RealBall::from_rational(im, ctx));
}

ComplexBall ComplexBall::from_real(const RealBall& re) {
  Mpfr i(re.prec());
  return ComplexBall(re.mid_, std::move(i), re.rad_);
}

ComplexBall ComplexBall::make(const RealBall& re, const RealBall& im) {
  return ComplexBall(re.mid_, im.mid_, rad::add(re.rad_, im.rad_));
}

ComplexBall ComplexBall::from_doubles(double re, double im, const PrecisionContext& ctx) {
  Mpfr r(ctx.mantissa_bits), i(ctx.mantissa_bits);
  mpfr_set_d(r.get(), re, MPFR_RNDN);
  mpfr_set_d(i.get(), im, MPFR_RNDN);
  double rr = rad::add(ulp_bound(r.get()), ulp_bound(i.get()));
  if (ctx.mantissa_bits >= 53) rr = 0.0;  // doubles embed exactly
  return ComplexBall(std::move(r), std::move(i), rr);
}

ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
  long p = std::max(a.prec(), b.prec());
  Mpfr r(p), i(p);
  int t1 = mpfr_add(r.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
  int t2 = mpfr_add(i.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  double rr = rad::add(a.rad_, b.rad_);
  if (t1) rr = rad::add(rr, ulp_bound(r.get()));
  if (t2) rr = rad::add(rr, ulp_bound(i.get()));
  return ComplexBall(std::move(r), std::move(i), rr);
}

ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) {
  long p = std::max(a.prec(), b.prec());
  Mpfr r(p), i(p);
  int t1 = mpfr_sub(r.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
  int t2 = mpfr_sub(i.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  double rr = rad::add(a.rad_, b.rad_);
  if (t1) rr = rad::add(rr, ulp_bound(r.get()));
  if (t2) rr = rad::add(rr, ulp_bound(i.get()));
  return ComplexBall(std::move(r), std::move(i), rr);
}

double ComplexBall::abs_up() const {
  return rad::add(rad::up(std::hypot(detail::abs_up(re_.get()), detail::abs_up(im_.get()))), rad_);
}

double ComplexBall::abs_lo() const {
  Mpfr h(prec());
  mpfr_hypot(h.get(), re_.get(), im_.get(), MPFR_RNDN);
  double lo = rad::sub_lo(detail::abs_lo(h.get()), rad::add(ulp_bound(h.get()), rad_));
  return lo > 0 ? lo : 0.0;
}

ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
  long p = std::max(a.prec(), b.prec());
  Mpfr r(p), i(p);
  // fmms/fmma give a single rounding per component.
  int t1 = mpfr_fmms(r.get(), a.re_.get(), b.re_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  int t2 = mpfr_fmma(i.get(), a.re_.get(), b.im_.get(), a.im_.get(), b.re_.get(), MPFR_RNDN);
  double au = rad::up(std::hypot(abs_up(a.re_.get()), abs_up(a.im_.get())));
  double bu = rad::up(std::hypot(abs_up(b.re_.get()), abs_up(b.im_.get())));
  double rr = rad::add(rad::add(rad::mul(au, b.rad_), rad::mul(bu, a.rad_)), rad::mul(a.rad_, b.rad_));
  if (t1) rr = rad::add(rr, ulp_bound(r.get()));
  if (t2) rr = rad::add(rr, ulp_bound(i.get()));
  return ComplexBall(std::move(r), std::move(i), rr);
}

ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) {
  long p = std::max(a.prec(), b.prec());
  long wp = p + 64;
  Mpfr h(wp);
  mpfr_hypot(h.get(), b.re_.get(), b.im_.get(), MPFR_RNDN);
  double blo = rad::sub_lo(abs_lo(h.get()), ulp_bound(h.get()));
  if (!(blo > b.rad_)) throw IndeterminateError("ComplexBall division: denominator may contain zero");

  Mpfr n2(wp), tre(wp), tim(wp);
  int inexact = 0;
  inexact |= mpfr_fmma(n2.get(), b.re_.get(), b.re_.get(), b.im_.get(), b.im_.get(), MPFR_RNDN);
  inexact |= mpfr_fmma(tre.get(), a.re_.get(), b.re_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  inexact |= mpfr_fmms(tim.get(), a.im_.get(), b.re_.get(), a.re_.get(), b.im_.get(), MPFR_RNDN);
  Mpfr r(p), i(p);
  inexact |= mpfr_div(tre.get(), tre.get(), n2.get(), MPFR_RNDN);
  inexact |= mpfr_div(tim.get(), tim.get(), n2.get(), MPFR_RNDN);
  inexact |= mpfr_set(r.get(), tre.get(), MPFR_RNDN);
  inexact |= mpfr_set(i.get(), tim.get(), MPFR_RNDN);
  // Elevated working precision: 2 ulps of the final components dominate
  // the midpoint rounding chain.
  double rnd = inexact ? rad::mul(2.0, rad::add(ulp_bound(r.get()), ulp_bound(i.get()))) : 0.0;
  double au = rad::up(std::hypot(abs_up(a.re_.get()), abs_up(a.im_.get())));
  double bu = rad::up(std::hypot(abs_up(b.re_.get()), abs_up(b.im_.get())));
  double num = rad::add(rad::mul(a.rad_, bu), rad::mul(au, b.rad_));
  double den = rad::mul_lo(blo, rad::sub_lo(blo, b.rad_));
  double rr = rad::add(rad::div_up(num, den), rnd);
  return ComplexBall(std::move(r), std::move(i), rr);
}

ComplexBall ComplexBall::operator-() const {
  Mpfr r(prec()), i(prec());
  mpfr_neg(r.get(), re_.get(), MPFR_RNDN);
  mpfr_neg(i.get(), im_.get(), MPFR_RNDN);
  return ComplexBall(std::move(r), std::move(i), rad_);
}

ComplexBall ComplexBall::conj() const {
  Mpfr r(prec()), i(prec());
  mpfr_set(r.get(), re_.get(), MPFR_RNDN);
  mpfr_neg(i.get(), im_.get(), MPFR_RNDN);
  return ComplexBall(std::move(r), std::move(i), rad_);
}

ComplexBall ComplexBall::mul_2si(long e) const {
  Mpfr r(prec()), i(prec());
  mpfr_mul_2si(r.get(), re_.get(), e, MPFR_RNDN);
  mpfr_mul_2si(i.get(), im_.get(), e, MPFR_RNDN);
  double rr = rad_;
  if (e >= 0) {
    for (long k = 0; k < e; ++k) rr = rad::mul(rr, 2.0);
  } else {
    for (long k = 0; k < -e; ++k) rr = rad::up(rr * 0.5);
  }
  return ComplexBall(std::move(r), std::move(i), rr);
}

ComplexBall ComplexBall::scale(const RealBall& s) const {
  return (*this) * from_real(s);
}

ComplexBall ComplexBall::scale_int(long s) const {
  Mpfr r(prec()), i(prec());
  int t1 = mpfr_mul_si(r.get(), re_.get(), s, MPFR_RNDN);
  int t2 = mpfr_mul_si(i.get(), im_.get(), s, MPFR_RNDN);
  double rr = rad::mul(rad_, std::fabs(static_cast<double>(s)));
  if (t1) rr = rad::add(rr, ulp_bound(r.get()));
  if (t2) rr = rad::add(rr, ulp_bound(i.get()));
  return ComplexBall(std::move(r), std::move(i), rr);
}

namespace {
// Principal complex square root, midpoint only, at the precision of out_*.
void principal_sqrt(mpfr_ptr out_re, mpfr_ptr out_im, mpfr_srcptr re, mpfr_srcptr im, long wp) {
  Mpfr h(wp), t(wp), u(wp);
  if (mpfr_zero_p(im)) {
    if (mpfr_sgn(re) >= 0) {
      mpfr_sqrt(out_re, re, MPFR_RNDN);
      mpfr_set_zero(out_im, 1);
    } else {
      mpfr_neg(t.get(), re, MPFR_RNDN);
      mpfr_set_zero(out_re, 1);
      mpfr_sqrt(out_im, t.get(), MPFR_RNDN);  // principal branch on the cut
    }
    return;
  }
  mpfr_hypot(h.get(), re, im, MPFR_RNDN);
  mpfr_abs(t.get(), re, MPFR_RNDN);
  mpfr_add(t.get(), h.get(), t.get(), MPFR_RNDN);
  mpfr_div_2si(t.get(), t.get(), 1, MPFR_RNDN);
  mpfr_sqrt(t.get(), t.get(), MPFR_RNDN);  // t = sqrt((|z| + |re|)/2)
  if (mpfr_sgn(re) >= 0) {
    mpfr_set(out_re, t.get(), MPFR_RNDN);
    mpfr_mul_2si(u.get(), t.get(), 1, MPFR_RNDN);
    mpfr_div(out_im, im, u.get(), MPFR_RNDN);
  } else {
    mpfr_mul_2si(u.get(), t.get(), 1, MPFR_RNDN);
    mpfr_abs(u.get(), u.get(), MPFR_RNDN);
    Mpfr ia(wp);
    mpfr_abs(ia.get(), im, MPFR_RNDN);
    mpfr_div(out_re, ia.get(), u.get(), MPFR_RNDN);
    if (mpfr_sgn(im) >= 0) {
      mpfr_set(out_im, t.get(), MPFR_RNDN);
    } else {
      mpfr_neg(out_im, t.get(), MPFR_RNDN);
    }
  }
}
}  // namespace

ComplexBall ComplexBall::sqrt() const {
  double mlo;  // lower bound for |midpoint|
  {
    Mpfr h(prec());
    mpfr_hypot(h.get(), re_.get(), im_.get(), MPFR_RNDN);
    mlo = rad::sub_lo(detail::abs_lo(h.get()), ulp_bound(h.get()));
  }
  if (!(mlo > rad_)) throw IndeterminateError("ComplexBall::sqrt: ball may contain zero");
  long wp = prec() + 64;
  Mpfr wre(wp), wim(wp), r(prec()), i(prec());
  principal_sqrt(wre.get(), wim.get(), re_.get(), im_.get(), wp);
  mpfr_set(r.get(), wre.get(), MPFR_RNDN);
  mpfr_set(i.get(), wim.get(), MPFR_RNDN);
  double rnd = rad::mul(2.0, rad::add(ulp_bound(r.get()), ulp_bound(i.get())));
  // |g(z) - g(m)| <= rad / (2 sqrt(|m| - rad)) for the continuous branch g.
  double denom = rad::mul_lo(2.0, rad::sqrt_lo(rad::sub_lo(mlo, rad_)));
  double rr = rad::add(rad::div_up(rad_, denom), rnd);
  return ComplexBall(std::move(r), std::move(i), rr);
}

RealBall ComplexBall::abs() const {
  Mpfr h(prec());
  int t = mpfr_hypot(h.get(), re_.get(), im_.get(), MPFR_RNDN);
  double rr = rad_;
  if (t) rr = rad::add(rr, ulp_bound(h.get()));
  return RealBall(std::move(h), rr);
}

RealBall ComplexBall::arg() const {
  double zlo = abs_lo();
  if (!(zlo > 0.0)) throw IndeterminateError("ComplexBall::arg: ball may contain zero");
  // Rotate by an exact multiple of pi/2 so the midpoint lands in the
  // quadrant bisected by the positive real axis; the branch cut of atan2
  // then stays at distance >= |z| > rad from the ball.
  double re_d = mpfr_get_d(re_.get(), MPFR_RNDN);
  double im_d = mpfr_get_d(im_.get(), MPFR_RNDN);
  int quarter_turns = 0;  // result += quarter_turns * pi/2
  Mpfr rre(prec()), rim(prec());
  if (std::fabs(re_d) >= std::fabs(im_d)) {
    if (re_d >= 0) {
      mpfr_set(rre.get(), re_.get(), MPFR_RNDN);
      mpfr_set(rim.get(), im_.get(), MPFR_RNDN);
      quarter_turns = 0;
    } else {
      mpfr_neg(rre.get(), re_.get(), MPFR_RNDN);
      mpfr_neg(rim.get(), im_.get(), MPFR_RNDN);
      quarter_turns = 2;
    }
  } else {
    if (im_d >= 0) {
      // z * e^{-i pi/2} = (im, -re)
      mpfr_set(rre.get(), im_.get(), MPFR_RNDN);
      mpfr_neg(rim.get(), re_.get(), MPFR_RNDN);
      quarter_turns = 1;
    } else {
      mpfr_neg(rre.get(), im_.get(), MPFR_RNDN);
      mpfr_set(rim.get(), re_.get(), MPFR_RNDN);
      quarter_turns = -1;
    }
  }
  Mpfr a(prec());
  int t = mpfr_atan2(a.get(), rim.get(), rre.get(), MPFR_RNDN);
  double rr = rad::div_up(rad_, zlo);
  if (t) rr = rad::add(rr, ulp_bound(a.get()));
  RealBall base(std::move(a), rr);
  if (quarter_turns == 0) return base;
  RealBall half_pi = RealBall::pi(context()).mul_2si(-1);
  return base + RealBall::from_int(quarter_turns, context()) * half_pi;
}

RealBall ComplexBall::real() const { return RealBall(re_, rad_); }
RealBall ComplexBall::imag() const { return RealBall(im_, rad_); }

bool ComplexBall::contains_zero() const {
  Mpfr h(prec());
  mpfr_hypot(h.get(), re_.get(), im_.get(), MPFR_RNDN);
  double hu = rad::add(detail::abs_up(h.get()), ulp_bound(h.get()));
  return hu <= rad_;
}

bool ComplexBall::is_nonzero() const { return abs_lo() > 0.0; }

bool ComplexBall::contains(const Rational& re, const Rational& im) const {
  long wp = prec() + 64;
  Mpfr qr(wp), qi(wp), dr(wp), di(wp), h(wp);
  int t1 = mpfr_set_q(qr.get(), re.raw(), MPFR_RNDN);
  int t2 = mpfr_set_q(qi.get(), im.raw(), MPFR_RNDN);
  double conv = rad::add(t1 ? ulp_bound(qr.get()) : 0.0, t2 ? ulp_bound(qi.get()) : 0.0);
  int t3 = mpfr_sub(dr.get(), re_.get(), qr.get(), MPFR_RNDN);
  int t4 = mpfr_sub(di.get(), im_.get(), qi.get(), MPFR_RNDN);
  int t5 = mpfr_hypot(h.get(), dr.get(), di.get(), MPFR_RNDN);
  double slack = rad::add(t3 ? ulp_bound(dr.get()) : 0.0,
                          rad::add(t4 ? ulp_bound(di.get()) : 0.0, t5 ? ulp_bound(h.get()) : 0.0));
  double du = rad::add(detail::abs_up(h.get()), rad::add(conv, slack));
  return du <= rad_;
}

bool ComplexBall::overlaps(const ComplexBall& a, const ComplexBall& b) {
  return !(dist_lo(a, b) > rad::add(a.rad_, b.rad_));
}

double ComplexBall::dist_lo(const ComplexBall& a, const ComplexBall& b) {
  long wp = std::max(a.prec(), b.prec());
  Mpfr dr(wp), di(wp), h(wp);
  mpfr_sub(dr.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
  mpfr_sub(di.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_hypot(h.get(), dr.get(), di.get(), MPFR_RNDN);
  double slack = rad::add(ulp_bound(dr.get()), rad::add(ulp_bound(di.get()), ulp_bound(h.get())));
  double lo = rad::sub_lo(detail::abs_lo(h.get()), rad::add(slack, rad::add(a.rad_, b.rad_)));
  return lo > 0 ? lo : 0.0;
}

double ComplexBall::dist_up(const ComplexBall& a, const ComplexBall& b) {
  long wp = std::max(a.prec(), b.prec());
  Mpfr dr(wp), di(wp), h(wp);
  mpfr_sub(dr.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
  mpfr_sub(di.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_hypot(h.get(), dr.get(), di.get(), MPFR_RNDN);
  double slack = rad::add(ulp_bound(dr.get()), rad::add(ulp_bound(di.get()), ulp_bound(h.get())));
  return rad::add(detail::abs_up(h.get()), rad::add(slack, rad::add(a.rad_, b.rad_)));
}

ComplexBall ComplexBall::inflate(double extra) const {
  return ComplexBall(re_, im_, rad::add(rad_, extra));
}

std::string ComplexBall::to_string(size_t digits) const {
  if (digits == 0) digits = static_cast<size_t>(static_cast<double>(prec()) * 0.30103) + 2;
  char radbuf[40];
  std::snprintf(radbuf, sizeof(radbuf), "%.3e", rad_);
  return "(" + detail::format_mpfr(re_.get(), digits) + " + " + detail::format_mpfr(im_.get(), digits) +
         "i) +/- " + radbuf;
}

// ---------------------------------------------------------------------------
// MpComplex

MpComplex MpComplex::from_d(std::complex<double> z, long prec) {
  MpComplex r(prec);
  mpfr_set_d(r.re.get(), z.real(), MPFR_RNDN);
  mpfr_set_d(r.im.get(), z.imag(), MPFR_RNDN);
  return r;
}

MpComplex MpComplex::from_ball(const ComplexBall& b) {
  MpComplex r(b.prec());
  mpfr_set(r.re.get(), b.re().get(), MPFR_RNDN);
  mpfr_set(r.im.get(), b.im().get(), MPFR_RNDN);
  return r;
}

MpComplex operator+(const MpComplex& a, const MpComplex& b) {
  MpComplex r(std::max(a.prec(), b.prec()));
  mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

MpComplex operator-(const MpComplex& a, const MpComplex& b) {
  MpComplex r(std::max(a.prec(), b.prec()));
  mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

MpComplex operator*(const MpComplex& a, const MpComplex& b) {
  MpComplex r(std::max(a.prec(), b.prec()));
  mpfr_fmms(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmma(r.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  return r;
}

MpComplex operator/(const MpComplex& a, const MpComplex& b) {
  long p = std::max(a.prec(), b.prec());
  MpComplex r(p);
  Mpfr n2(p);
  mpfr_fmma(n2.get(), b.re.get(), b.re.get(), b.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmma(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmms(r.im.get(), a.im.get(), b.re.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_div(r.re.get(), r.re.get(), n2.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), r.im.get(), n2.get(), MPFR_RNDN);
  return r;
}

MpComplex MpComplex::operator-() const {
  MpComplex r(prec());
  mpfr_neg(r.re.get(), re.get(), MPFR_RNDN);
  mpfr_neg(r.im.get(), im.get(), MPFR_RNDN);
  return r;
}

MpComplex MpComplex::conj() const {
  MpComplex r(prec());
  mpfr_set(r.re.get(), re.get(), MPFR_RNDN);
  mpfr_neg(r.im.get(), im.get(), MPFR_RNDN);
  return r;
}

MpComplex MpComplex::scale_d(double s) const {
  MpComplex r(prec());
  mpfr_mul_d(r.re.get(), re.get(), s, MPFR_RNDN);
  mpfr_mul_d(r.im.get(), im.get(), s, MPFR_RNDN);
  return r;
}

MpComplex MpComplex::scale_si(long num, long den) const {
  MpComplex r(prec());
  mpfr_mul_si(r.re.get(), re.get(), num, MPFR_RNDN);
  mpfr_mul_si(r.im.get(), im.get(), num, MPFR_RNDN);
  mpfr_div_si(r.re.get(), r.re.get(), den, MPFR_RNDN);
  mpfr_div_si(r.im.get(), r.im.get(), den, MPFR_RNDN);
  return r;
}

MpComplex MpComplex::sqrt() const {
  MpComplex r(prec());
  principal_sqrt(r.re.get(), r.im.get(), re.get(), im.get(), prec());
  return r;
}

Mpfr MpComplex::abs() const {
  Mpfr h(prec());
  mpfr_hypot(h.get(), re.get(), im.get(), MPFR_RNDN);
  return h;
}

double MpComplex::abs_d() const {
  Mpfr h = abs();
  return mpfr_get_d(h.get(), MPFR_RNDN);
}

}  // namespace strebel
