#include "strebel/qdiff.hpp"

#include <algorithm>

namespace strebel {

int Divisor::degree() const {
  int d = 0;
  for (const auto& e : entries) d += e.order;
  return d;
}

std::vector<DivisorEntry> Divisor::zeros() const {
  std::vector<DivisorEntry> out;
  for (const auto& e : entries)
    if (e.order > 0) out.push_back(e);
  return out;
}

std::vector<DivisorEntry> Divisor::poles() const {
  std::vector<DivisorEntry> out;
  for (const auto& e : entries)
    if (e.order < 0) out.push_back(e);
  return out;
}

SParameter SParameter::make(const Rational& r, const PrecisionContext& ctx) {
  if (!(Rational(0) < r && r < Rational(1, 2)))
    throw RangeError("SParameter: r must satisfy 0 < r < 1/2, got " + r.to_string());
  RealBall sqrt3 = RealBall::from_int(3, ctx).sqrt();
  RealBall s = RealBall::from_rational(r, ctx) * sqrt3;
  if (!s.is_positive() || !RealBall::certified_lt(s, sqrt3.mul_2si(-1)))
    throw PrecisionExhaustedError("SParameter: 0 < s < sqrt(3)/2 not certified");
  ComplexBall w = ComplexBall::make(RealBall::from_rational(Rational(1, 2), ctx), s);
  return SParameter{r, std::move(s), std::move(w)};
}

RationalMap f_map(const ComplexBall& c) {
  PrecisionContext ctx = c.context();
  ComplexBall one = ComplexBall::from_int(1, 0, ctx);
  Polynomial num({c * c, (-c).scale_int(2), one});
  ComplexBall s = (one - c) * (one - c);
  Polynomial den({ComplexBall(ctx), s});
  return RationalMap(std::move(num), std::move(den));
}

RationalMap g_map(const PrecisionContext& ctx) {
  // 4 (y^2 - y + 1)^3 and 27 y^2 (1 - y)^2, expanded.
  return RationalMap(Polynomial::from_int_coeffs({4, -12, 24, -28, 24, -12, 4}, ctx),
                     Polynomial::from_int_coeffs({0, 0, 27, -54, 27}, ctx));
}

QuadraticDifferential build_q0(const PrecisionContext& ctx) {
  RealBall pi = RealBall::pi(ctx);
  ComplexBall four_pi2 = ComplexBall::from_real((pi * pi).mul_2si(2));
  Polynomial num = Polynomial::from_int_coeffs({1}, ctx);
  Polynomial den({ComplexBall(ctx), four_pi2, -four_pi2});
  return QuadraticDifferential(RationalMap(std::move(num), std::move(den), false), "q0");
}

QuadraticDifferential pullback(const QuadraticDifferential& q, const RationalMap& f,
                               const PrecisionContext& ctx, const std::string& map_label) {
  (void)ctx;
  RationalMap composed = q.phi().compose(f);
  RationalMap fp = f.derivative();
  RationalMap coeff = composed * fp * fp;
  return QuadraticDifferential(std::move(coeff), map_label + "^*(" + q.label() + ")");
}

Divisor divisor(const QuadraticDifferential& q, const PrecisionContext& ctx) {
  const RationalMap& phi = q.phi();
  long dn = phi.num().certified_degree();
  long dd = phi.den().certified_degree();
  if (dn < 0) throw RangeError("divisor: the zero differential has no divisor");

  std::vector<RootCluster> zeros_raw =
      dn >= 1 ? poly_roots(phi.num(), ctx) : std::vector<RootCluster>{};
  std::vector<RootCluster> poles_raw =
      dd >= 1 ? poly_roots(phi.den(), ctx) : std::vector<RootCluster>{};

  Divisor out;
  // Defensive net-merge in case an unreduced common cluster survived.
  std::vector<bool> pole_used(poles_raw.size(), false);
  for (const auto& z : zeros_raw) {
    int order = z.multiplicity;
    ComplexBall pt = z.point;
    for (size_t j = 0; j < poles_raw.size(); ++j) {
      if (pole_used[j]) continue;
      if (ComplexBall::overlaps(z.point, poles_raw[j].point)) {
        order -= poles_raw[j].multiplicity;
        if (poles_raw[j].point.radius() < pt.radius()) pt = poles_raw[j].point;
        pole_used[j] = true;
        break;
      }
    }
    if (order != 0) out.entries.push_back({SpherePoint::finite(pt), order});
  }
  for (size_t j = 0; j < poles_raw.size(); ++j) {
    if (!pole_used[j]) out.entries.push_back({SpherePoint::finite(poles_raw[j].point), -poles_raw[j].multiplicity});
  }
  int inf_order = static_cast<int>(dd - dn) - 4;
  if (inf_order != 0) out.entries.push_back({SpherePoint::infinity(), inf_order});
  return out;
}

namespace {

// Laurent coefficient c2 with phi = c2 u^-2 (1 + O(u)) at a double pole.
ComplexBall laurent_c2(const QuadraticDifferential& q, const SpherePoint& p) {
  const RationalMap& phi = q.phi();
  if (p.is_infinity()) {
    long dn = phi.num().certified_degree();
    long dd = phi.den().certified_degree();
    if (dd - dn != 2)
      throw NotDoublePoleError("residue_sqrt: order at infinity is " + std::to_string(dd - dn - 4) +
                               ", expected -2");
    return phi.num().leading_coeff() / phi.den().leading_coeff();
  }
  const ComplexBall& z0 = p.z();
  auto [d1, rem1] = phi.den().divide_linear(z0);
  if (!rem1.contains_zero()) throw NotDoublePoleError("residue_sqrt: point is not a pole");
  auto [d2, rem2] = d1.divide_linear(z0);
  if (!rem2.contains_zero()) throw NotDoublePoleError("residue_sqrt: pole is simple, not double");
  ComplexBall dval = d2.eval(z0);
  if (!dval.is_nonzero()) throw NotDoublePoleError("residue_sqrt: pole order exceeds 2");
  ComplexBall nval = phi.num().eval(z0);
  if (!nval.is_nonzero()) throw NotDoublePoleError("residue_sqrt: numerator vanishes at the pole");
  return nval / dval;
}

}  // namespace

RealBall residue_sqrt(const QuadraticDifferential& q, const SpherePoint& p, const PrecisionContext& ctx) {
  ComplexBall c2 = laurent_c2(q, p);
  if (!c2.real().is_negative() || !c2.imag().contains_zero())
    throw NotStrebelLikeError("residue_sqrt: c2 not certified negative real at " + p.to_string());
  RealBall two_pi = RealBall::pi(PrecisionContext{std::max(ctx.mantissa_bits, q.context().mantissa_bits)}).mul_2si(1);
  return two_pi * c2.abs().sqrt();
}

CSolution solve_c(const SParameter& sp, const PrecisionContext& ctx) {
  // w c^2 + (4 - 2w) c + w = 0 clears f(-c) = w; the discriminant is
  // (4-2w)^2 - 4w^2 = 16(1-w).
  ComplexBall w = sp.w;
  ComplexBall one = ComplexBall::from_int(1, 0, ctx);
  ComplexBall two = ComplexBall::from_int(2, 0, ctx);
  ComplexBall root = (one - w).sqrt();
  ComplexBall base = w - two;
  ComplexBall cand1 = (base + two * root) / w;
  ComplexBall cand2 = (base - two * root) / w;

  RealBall unit = RealBall::from_int(1, ctx);
  bool in1 = RealBall::certified_lt(cand1.abs(), unit);
  bool in2 = RealBall::certified_lt(cand2.abs(), unit);
  bool out1 = RealBall::certified_lt(unit, cand1.abs());
  bool out2 = RealBall::certified_lt(unit, cand2.abs());
  CSolution sol{ComplexBall(ctx), ComplexBall(ctx)};
  if (in1 && out2) {
    sol.c = cand1;
    sol.other = cand2;
  } else if (in2 && out1) {
    sol.c = cand2;
    sol.other = cand1;
  } else {
    throw PrecisionExhaustedError("solve_c: root separation from the unit circle not certified");
  }

  // Residual check: f(-c) must meet the ball of w.
  RationalMap f = f_map(sol.c);
  SpherePoint v = f.eval(SpherePoint::finite(-sol.c));
  if (v.is_infinity() || !ComplexBall::overlaps(v.z(), w))
    throw PrecisionExhaustedError("solve_c: residual check f(-c) = w failed");
  return sol;
}

QuadraticDifferential build_q1(const PrecisionContext& ctx) {
  return pullback(build_q0(ctx), g_map(ctx), ctx, "g");
}

std::pair<QuadraticDifferential, CSolution> build_qc(const SParameter& sp, const PrecisionContext& ctx) {
  CSolution sol = solve_c(sp, ctx);
  QuadraticDifferential q1 = build_q1(ctx);
  QuadraticDifferential qc = pullback(q1, f_map(sol.c), ctx, "f");
  return {QuadraticDifferential(qc.phi(), "qc = f^*(q1), r = " + sp.r.to_string()), sol};
}

}  // namespace strebel
