#include "strebel/polynomial.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace strebel {

namespace {

bool is_exact_zero(const ComplexBall& c) {
  return c.radius() == 0.0 && mpfr_zero_p(c.re().get()) && mpfr_zero_p(c.im().get());
}

// log2 of the magnitude of a midpoint value, LONG_MIN for zero.
long mag_log2(const MpComplex& z) {
  long e = LONG_MIN;
  if (!mpfr_zero_p(z.re.get())) e = std::max(e, static_cast<long>(mpfr_get_exp(z.re.get())));
  if (!mpfr_zero_p(z.im.get())) e = std::max(e, static_cast<long>(mpfr_get_exp(z.im.get())));
  return e;
}

MpComplex horner_mid(const std::vector<MpComplex>& coeffs, const MpComplex& z) {
  long p = z.prec();
  MpComplex acc(p);
  for (size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * z + coeffs[k];
  }
  return acc;
}

}  // namespace

Polynomial::Polynomial(std::vector<ComplexBall> coeffs) : c_(std::move(coeffs)) {
  prec_ = c_.empty() ? PrecisionContext{}.mantissa_bits : c_.front().prec();
  trim_exact_zeros();
}

void Polynomial::trim_exact_zeros() {
  while (!c_.empty() && is_exact_zero(c_.back())) c_.pop_back();
}

Polynomial Polynomial::from_int_coeffs(const std::vector<long>& coeffs, const PrecisionContext& ctx) {
  std::vector<ComplexBall> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.push_back(ComplexBall::from_int(v, 0, ctx));
  Polynomial p(ctx);
  p.c_ = std::move(c);
  p.trim_exact_zeros();
  return p;
}

Polynomial Polynomial::constant(const ComplexBall& a) {
  Polynomial p(a.context());
  p.c_ = {a};
  p.trim_exact_zeros();
  return p;
}

Polynomial Polynomial::monomial(const ComplexBall& a, size_t k) {
  Polynomial p(a.context());
  p.c_.assign(k + 1, ComplexBall(a.context()));
  p.c_[k] = a;
  p.trim_exact_zeros();
  return p;
}

ComplexBall Polynomial::coeff(size_t k) const {
  if (k < c_.size()) return c_[k];
  return ComplexBall(context());
}

bool Polynomial::is_zero() const {
  for (const auto& c : c_)
    if (!is_exact_zero(c)) return false;
  return true;
}

long Polynomial::certified_degree() const {
  if (c_.empty()) return -1;
  // Construction trims exact zeros, so the top entry decides.
  if (c_.back().is_nonzero()) return static_cast<long>(c_.size()) - 1;
  throw PrecisionExhaustedError("Polynomial: leading coefficient not certified nonzero");
}

ComplexBall Polynomial::leading_coeff() const {
  long d = certified_degree();
  if (d < 0) return ComplexBall(context());
  return c_[static_cast<size_t>(d)];
}

ComplexBall Polynomial::eval(const ComplexBall& z) const {
  ComplexBall acc(context());
  for (size_t k = c_.size(); k-- > 0;) {
    acc = acc * z + c_[k];
  }
  return acc;
}

MpComplex Polynomial::eval_mid(const MpComplex& z) const {
  MpComplex acc(z.prec());
  for (size_t k = c_.size(); k-- > 0;) {
    acc = acc * z + MpComplex::from_ball(c_[k]);
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial r(context());
  if (c_.size() <= 1) return r;
  r.c_.reserve(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) r.c_.push_back(c_[k].scale_int(static_cast<long>(k)));
  r.trim_exact_zeros();
  return r;
}

Polynomial Polynomial::reversed() const {
  Polynomial r(context());
  r.c_.assign(c_.rbegin(), c_.rend());
  r.trim_exact_zeros();
  return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  PrecisionContext ctx{std::max(a.prec(), b.prec())};
  Polynomial r(ctx);
  size_t n = std::max(a.c_.size(), b.c_.size());
  r.c_.reserve(n);
  for (size_t k = 0; k < n; ++k) r.c_.push_back(a.coeff(k) + b.coeff(k));
  r.trim_exact_zeros();
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  PrecisionContext ctx{std::max(a.prec(), b.prec())};
  Polynomial r(ctx);
  size_t n = std::max(a.c_.size(), b.c_.size());
  r.c_.reserve(n);
  for (size_t k = 0; k < n; ++k) r.c_.push_back(a.coeff(k) - b.coeff(k));
  r.trim_exact_zeros();
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  PrecisionContext ctx{std::max(a.prec(), b.prec())};
  Polynomial r(ctx);
  if (a.c_.empty() || b.c_.empty()) return r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, ComplexBall(ctx));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
  r.trim_exact_zeros();
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(context());
  r.c_.reserve(c_.size());
  for (const auto& c : c_) r.c_.push_back(-c);
  return r;
}

Polynomial Polynomial::scale(const ComplexBall& s) const {
  Polynomial r(context());
  r.c_.reserve(c_.size());
  for (const auto& c : c_) r.c_.push_back(c * s);
  r.trim_exact_zeros();
  return r;
}

std::pair<Polynomial, ComplexBall> Polynomial::divide_linear(const ComplexBall& a) const {
  if (c_.size() <= 1) {
    return {Polynomial(context()), coeff(0)};
  }
  std::vector<ComplexBall> q(c_.size() - 1, ComplexBall(context()));
  ComplexBall carry = c_.back();
  for (size_t k = c_.size() - 1; k-- > 0;) {
    q[k] = carry;
    carry = c_[k] + a * carry;
  }
  Polynomial qq(context());
  qq.c_ = std::move(q);
  qq.trim_exact_zeros();
  return {std::move(qq), std::move(carry)};
}

Polynomial Polynomial::taylor_shift(const ComplexBall& a) const {
  Polynomial cur = *this;
  std::vector<ComplexBall> out;
  out.reserve(c_.size());
  size_t n = c_.size();
  for (size_t k = 0; k < n; ++k) {
    auto [q, rem] = cur.divide_linear(a);
    out.push_back(rem);
    cur = std::move(q);
  }
  Polynomial r(context());
  r.c_ = std::move(out);
  r.trim_exact_zeros();
  return r;
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t k = 0; k < c_.size(); ++k) {
    if (k) os << ", ";
    os << c_[k].to_string(12);
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Certified root clustering.
//
// Pipeline: Durand-Kerner on the monicized midpoints, Weierstrass/Smith
// inclusion disks evaluated in ball arithmetic (every member polynomial of
// the coefficient family has exactly as many roots in a connected component
// of the disk union as the component has disks), Newton refinement of each
// component on p^(m-1), and a Pellet dominance test to certify the final
// "exactly m roots within rho of the refined center" radius.

namespace {

struct Component {
  std::vector<size_t> members;
  MpComplex center;
  int multiplicity = 0;
  double rho = 0;
  Component(long prec) : center(prec) {}
};

// Pellet dominance in log2 domain: |t_m| rho^m > sum_{j != m} |t_j| rho^j.
bool pellet_passes(const std::vector<double>& up_log2, double lo_m_log2, int m, double log2_rho,
                   size_t nterms) {
  if (!std::isfinite(lo_m_log2)) return false;
  double lhs = lo_m_log2 + m * log2_rho;
  double rhs = -std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < up_log2.size(); ++j) {
    if (static_cast<int>(j) == m) continue;
    double v = up_log2[j] + static_cast<double>(j) * log2_rho;
    rhs = std::max(rhs, v);
  }
  if (rhs == -std::numeric_limits<double>::infinity()) return true;
  return lhs > rhs + std::log2(static_cast<double>(nterms)) + 0.5;
}

}  // namespace

std::vector<RootCluster> poly_roots(const Polynomial& p, const PrecisionContext& ctx) {
  long deg = p.certified_degree();
  if (deg < 1) throw RangeError("poly_roots: certified degree >= 1 required");
  size_t n = static_cast<size_t>(deg);
  long prec = std::max(p.prec(), ctx.mantissa_bits);
  PrecisionContext wctx{prec};

  // Monicize: p / lead has exactly the same roots for every member.
  ComplexBall lead = p.leading_coeff();
  std::vector<ComplexBall> monic;
  monic.reserve(n + 1);
  for (size_t k = 0; k < n; ++k) monic.push_back(p.coeff(k) / lead);
  monic.push_back(ComplexBall::from_int(1, 0, wctx));
  Polynomial monic_poly(monic);

  if (n == 1) {
    ComplexBall root = -monic[0];
    return {RootCluster{root, 1}};
  }

  // Durand-Kerner on midpoints.
  std::vector<MpComplex> a;
  a.reserve(n + 1);
  for (size_t k = 0; k <= n; ++k) a.push_back(MpComplex::from_ball(monic[k]));
  double bound = 0;
  for (size_t k = 0; k < n; ++k) bound = std::max(bound, monic[k].abs_up());
  double radius0 = 1.0 + bound;

  std::vector<MpComplex> z;
  z.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n) + 0.4;
    z.push_back(MpComplex::from_d({radius0 * std::cos(th), radius0 * std::sin(th)}, prec));
  }

  long best = LONG_MAX;
  int stall = 0;
  int max_iters = 400 + 60 * static_cast<int>(n);
  for (int it = 0; it < max_iters; ++it) {
    long worst = LONG_MIN;
    for (size_t i = 0; i < n; ++i) {
      MpComplex num = horner_mid(a, z[i]);
      MpComplex den = MpComplex::from_d({1, 0}, prec);
      for (size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        MpComplex d = z[i] - z[j];
        if (d.is_zero()) {
          // Nudge coincident points apart and retry this sweep.
          z[j] = z[j] + MpComplex::from_d({1e-18 * (1.0 + radius0), 1e-18}, prec);
          d = z[i] - z[j];
        }
        den = den * d;
      }
      MpComplex w = num / den;
      z[i] = z[i] - w;
      worst = std::max(worst, mag_log2(w));
    }
    if (worst < -prec - 8) break;
    if (worst >= best) {
      if (++stall > 30) break;
    } else {
      best = worst;
      stall = 0;
    }
  }

  // Weierstrass inclusion disks, evaluated over the coefficient family.
  std::vector<ComplexBall> zball;
  zball.reserve(n);
  for (size_t i = 0; i < n; ++i) zball.push_back(ComplexBall(z[i].re, z[i].im, 0.0));
  std::vector<double> disk(n);
  for (size_t i = 0; i < n; ++i) {
    ComplexBall num = monic_poly.eval(zball[i]);
    ComplexBall den = ComplexBall::from_int(1, 0, wctx);
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      den = den * (zball[i] - zball[j]);
    }
    if (!den.is_nonzero()) throw PrecisionExhaustedError("poly_roots: approximation points collided");
    ComplexBall w = num / den;
    disk[i] = rad::mul(static_cast<double>(n), rad::mul(w.abs_up(), 1.0 + 1e-6));
  }

  // Union-find over intersecting (or not-certified-disjoint) disks.
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), size_t{0});
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double d = ComplexBall::dist_lo(zball[i], zball[j]);
      if (!(d > rad::add(disk[i], disk[j]))) parent[find(i)] = find(j);
    }

  std::vector<Component> comps;
  {
    std::vector<long> comp_of(n, -1);
    for (size_t i = 0; i < n; ++i) {
      size_t r = find(i);
      long idx = comp_of[r];
      if (idx < 0) {
        idx = static_cast<long>(comps.size());
        comp_of[r] = idx;
        comps.emplace_back(prec);
      }
      comps[static_cast<size_t>(idx)].members.push_back(i);
    }
  }

  // Centroid + Newton refinement on p^(m-1) midpoints.
  for (auto& comp : comps) {
    int m = static_cast<int>(comp.members.size());
    comp.multiplicity = m;
    MpComplex c(prec);
    for (size_t i : comp.members) c = c + z[i];
    c = c.scale_si(1, m);
    // (m-1)-th derivative midpoint coefficients.
    std::vector<MpComplex> q;
    for (size_t k = static_cast<size_t>(m - 1); k <= n; ++k) {
      Mpfr fac(prec);
      mpfr_set_si(fac.get(), 1, MPFR_RNDN);
      for (int t = 0; t < m - 1; ++t)
        mpfr_mul_si(fac.get(), fac.get(), static_cast<long>(k - static_cast<size_t>(t)), MPFR_RNDN);
      MpComplex ck = MpComplex::from_ball(monic[k]);
      MpComplex scaled(prec);
      mpfr_mul(scaled.re.get(), ck.re.get(), fac.get(), MPFR_RNDN);
      mpfr_mul(scaled.im.get(), ck.im.get(), fac.get(), MPFR_RNDN);
      q.push_back(scaled);
    }
    std::vector<MpComplex> qd;
    for (size_t k = 1; k < q.size(); ++k) qd.push_back(q[k].scale_si(static_cast<long>(k), 1));

    double spread = 0;
    for (size_t i : comp.members)
      spread = std::max(spread, std::abs((z[i] - c).to_d()) + disk[i]);

    MpComplex x = c;
    for (int it = 0; it < 120; ++it) {
      MpComplex f = horner_mid(q, x);
      MpComplex fd = horner_mid(qd, x);
      if (fd.is_zero()) break;
      MpComplex step = f / fd;
      x = x - step;
      if (mag_log2(step) < -prec) break;
    }
    double moved = std::abs((x - c).to_d());
    if (moved > std::max(4.0 * spread, 1e-6 * (1.0 + std::abs(c.to_d())))) x = c;  // Newton wandered off
    comp.center = x;
  }

  // Pellet certification of "exactly m roots in D(center, rho)".
  std::vector<RootCluster> out;
  for (size_t ci = 0; ci < comps.size(); ++ci) {
    auto& comp = comps[ci];
    int m = comp.multiplicity;
    ComplexBall center(comp.center.re, comp.center.im, 0.0);
    Polynomial shifted = monic_poly.taylor_shift(center);
    std::vector<double> up_log2(n + 1, -std::numeric_limits<double>::infinity());
    for (size_t j = 0; j <= n; ++j) {
      double u = shifted.coeff(j).abs_up();
      if (u > 0) up_log2[j] = std::log2(u) + 1e-9;
    }
    double lo_m = -std::numeric_limits<double>::infinity();
    {
      double l = shifted.coeff(static_cast<size_t>(m)).abs_lo();
      if (l > 0) lo_m = std::log2(l) - 1e-9;
    }

    double rho_max = std::numeric_limits<double>::infinity();
    for (size_t cj = 0; cj < comps.size(); ++cj) {
      if (cj == ci) continue;
      double d = std::abs((comp.center - comps[cj].center).to_d());
      rho_max = std::min(rho_max, 0.4 * d);
    }
    if (!std::isfinite(rho_max)) rho_max = 4.0 * (1.0 + radius0);

    double scale = 1.0 + std::abs(comp.center.to_d());
    double rho_floor = std::ldexp(scale, static_cast<int>(std::max(-prec + 16, -1000L)));
    double rho = rho_floor;
    bool found = false;
    while (rho <= rho_max) {
      if (pellet_passes(up_log2, lo_m, m, std::log2(rho), n + 1)) {
        found = true;
        break;
      }
      rho *= 4.0;
    }
    if (!found && pellet_passes(up_log2, lo_m, m, std::log2(rho_max), n + 1)) {
      rho = rho_max;
      found = true;
    }
    if (!found)
      throw PrecisionExhaustedError("poly_roots: Pellet certification failed for a cluster");
    // Tighten.
    for (int it = 0; it < 80; ++it) {
      double cand = rho * 0.5;
      if (cand < rho_floor) break;
      if (!pellet_passes(up_log2, lo_m, m, std::log2(cand), n + 1)) break;
      rho = cand;
    }
    comp.rho = rho;
    out.push_back(RootCluster{ComplexBall(comp.center.re, comp.center.im, rho), m});
  }

  // Certified pairwise disjointness.
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = i + 1; j < out.size(); ++j)
      if (ComplexBall::overlaps(out[i].point, out[j].point))
        throw PrecisionExhaustedError("poly_roots: clusters not certified disjoint");

  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    auto za = a.point.midpoint_complex();
    auto zb = b.point.midpoint_complex();
    if (za.real() != zb.real()) return za.real() < zb.real();
    return za.imag() < zb.imag();
  });
  return out;
}

}  // namespace strebel
