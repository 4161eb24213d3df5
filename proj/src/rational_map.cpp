#include "strebel/rational_map.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace strebel {

const ComplexBall& SpherePoint::z() const {
  if (!z_.has_value()) throw RangeError("SpherePoint: infinity has no finite coordinate");
  return *z_;
}

std::string SpherePoint::to_string() const {
  return is_infinity() ? std::string("inf") : z_->to_string(12);
}

RationalMap::RationalMap(Polynomial num, Polynomial den, bool reduce_factors)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw RangeError("RationalMap: denominator is identically zero");
  if (reduce_factors) reduce();
}

RationalMap RationalMap::identity(const PrecisionContext& ctx) {
  return RationalMap(Polynomial::from_int_coeffs({0, 1}, ctx), Polynomial::from_int_coeffs({1}, ctx), false);
}

RationalMap RationalMap::from_polynomial(Polynomial p) {
  PrecisionContext ctx = p.context();
  return RationalMap(std::move(p), Polynomial::from_int_coeffs({1}, ctx), false);
}

RationalMap RationalMap::constant(const ComplexBall& a) {
  return RationalMap(Polynomial::constant(a), Polynomial::from_int_coeffs({1}, a.context()), false);
}

SpherePoint RationalMap::eval(const SpherePoint& p) const {
  PrecisionContext ctx = context();
  if (p.is_infinity()) {
    long dn = num_.certified_degree();
    long dd = den_.certified_degree();
    if (dn < 0) return SpherePoint::finite(ComplexBall(ctx));  // zero map
    if (dn > dd) return SpherePoint::infinity();
    if (dn < dd) return SpherePoint::finite(ComplexBall(ctx));
    return SpherePoint::finite(num_.leading_coeff() / den_.leading_coeff());
  }
  ComplexBall n = num_.eval(p.z());
  ComplexBall d = den_.eval(p.z());
  if (d.is_nonzero()) return SpherePoint::finite(n / d);
  if (n.is_nonzero()) return SpherePoint::infinity();
  throw IndeterminateError("RationalMap::eval: neither value nor pole certified");
}

RationalMap RationalMap::derivative() const {
  Polynomial n = num_.derivative() * den_ - num_ * den_.derivative();
  Polynomial d = den_ * den_;
  return RationalMap(std::move(n), std::move(d), true);
}

RationalMap RationalMap::compose(const RationalMap& g) const {
  // Homogeneous evaluation: with F = N/D (degrees up to m) and g = P/Q,
  // F(g) = sum_k N_k P^k Q^{m-k} / sum_k D_k P^k Q^{m-k}.
  PrecisionContext ctx{std::max(prec(), g.prec())};
  size_t m = std::max(num_.size(), den_.size());
  if (m == 0) return RationalMap(Polynomial(ctx), Polynomial::from_int_coeffs({1}, ctx), false);
  m -= 1;
  std::vector<Polynomial> ppow, qpow;
  Polynomial one = Polynomial::from_int_coeffs({1}, ctx);
  ppow.push_back(one);
  qpow.push_back(one);
  for (size_t k = 1; k <= m; ++k) {
    ppow.push_back(ppow.back() * g.num());
    qpow.push_back(qpow.back() * g.den());
  }
  Polynomial n(ctx), d(ctx);
  for (size_t k = 0; k <= m; ++k) {
    if (k < num_.size()) n = n + (ppow[k] * qpow[m - k]).scale(num_.coeff(k));
    if (k < den_.size()) d = d + (ppow[k] * qpow[m - k]).scale(den_.coeff(k));
  }
  return RationalMap(std::move(n), std::move(d), true);
}

RationalMap operator*(const RationalMap& a, const RationalMap& b) {
  return RationalMap(a.num_ * b.num_, a.den_ * b.den_, true);
}

RationalMap RationalMap::scale(const ComplexBall& s) const {
  return RationalMap(num_.scale(s), den_, false);
}

long RationalMap::degree() const {
  return std::max(num_.certified_degree(), den_.certified_degree());
}

std::string RationalMap::to_string() const {
  return num_.to_string() + " / " + den_.to_string();
}

namespace {

// Divides p by (z - a)^m; returns the quotient when every remainder ball
// contains zero (quotient radii widened by the remainder bound), nullopt
// otherwise.
std::optional<Polynomial> try_divide_out(const Polynomial& p, const ComplexBall& a, int m) {
  Polynomial cur = p;
  for (int t = 0; t < m; ++t) {
    auto [q, rem] = cur.divide_linear(a);
    if (!rem.contains_zero()) return std::nullopt;
    double slack = rem.abs_up();
    std::vector<ComplexBall> widened;
    widened.reserve(q.size());
    for (size_t k = 0; k < q.size(); ++k) widened.push_back(q.coeff(k).inflate(slack));
    cur = widened.empty() ? Polynomial(p.context()) : Polynomial(std::move(widened));
  }
  return cur;
}

}  // namespace

void RationalMap::reduce() {
  if (num_.is_zero()) {
    PrecisionContext ctx = context();
    num_ = Polynomial(ctx);
    den_ = Polynomial::from_int_coeffs({1}, ctx);
    return;
  }
  long dn = num_.certified_degree();
  long dd = den_.certified_degree();
  if (dn < 1 || dd < 1) return;

  PrecisionContext ctx = context();
  std::vector<RootCluster> rn = poly_roots(num_, ctx);
  std::vector<RootCluster> rd = poly_roots(den_, ctx);

  Polynomial new_num = num_;
  Polynomial new_den = den_;
  bool changed = false;
  for (const auto& cn : rn) {
    for (const auto& cd : rd) {
      if (!ComplexBall::overlaps(cn.point, cd.point)) continue;
      int m = std::min(cn.multiplicity, cd.multiplicity);
      const ComplexBall& tighter = cn.point.radius() <= cd.point.radius() ? cn.point : cd.point;
      ComplexBall center(tighter.re(), tighter.im(), 0.0);
      auto qn = try_divide_out(new_num, center, m);
      if (!qn.has_value()) continue;
      auto qd = try_divide_out(new_den, center, m);
      if (!qd.has_value()) continue;
      new_num = std::move(*qn);
      new_den = std::move(*qd);
      changed = true;
      break;  // cluster of den consumed; move to next numerator cluster
    }
  }
  if (!changed) return;

  // Sample-point validation: original and reduced must agree as maps.
  static const long sample_res[] = {2, -3, 1, -2};
  static const long sample_ims[] = {3, 1, -4, -5};
  for (int s = 0; s < 4; ++s) {
    ComplexBall zs = ComplexBall::from_int(sample_res[s], sample_ims[s], ctx);
    ComplexBall lhs = num_.eval(zs) * new_den.eval(zs);
    ComplexBall rhs = new_num.eval(zs) * den_.eval(zs);
    if (!ComplexBall::overlaps(lhs, rhs))
      throw PrecisionExhaustedError("RationalMap::reduce: cancellation failed validation");
  }
  num_ = std::move(new_num);
  den_ = std::move(new_den);
}

}  // namespace strebel
