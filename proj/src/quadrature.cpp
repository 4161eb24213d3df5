#include "strebel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace strebel {

namespace {

// Legendre P_n and P_n' at x, midpoint arithmetic.
void legendre_mid(int n, const Mpfr& x, Mpfr& p, Mpfr& dp) {
  long prec = x.prec();
  Mpfr pk(prec), pk1(prec), t(prec), u(prec);
  mpfr_set_si(pk1.get(), 1, MPFR_RNDN);  // P_0
  mpfr_set(pk.get(), x.get(), MPFR_RNDN);  // P_1
  for (int k = 2; k <= n; ++k) {
    // P_k = ((2k-1) x P_{k-1} - (k-1) P_{k-2}) / k
    mpfr_mul(t.get(), x.get(), pk.get(), MPFR_RNDN);
    mpfr_mul_si(t.get(), t.get(), 2 * k - 1, MPFR_RNDN);
    mpfr_mul_si(u.get(), pk1.get(), k - 1, MPFR_RNDN);
    mpfr_sub(t.get(), t.get(), u.get(), MPFR_RNDN);
    mpfr_div_si(t.get(), t.get(), k, MPFR_RNDN);
    mpfr_swap(pk1.get(), pk.get());
    mpfr_swap(pk.get(), t.get());
  }
  mpfr_set(p.get(), pk.get(), MPFR_RNDN);
  // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
  mpfr_mul(t.get(), x.get(), pk.get(), MPFR_RNDN);
  mpfr_sub(t.get(), t.get(), pk1.get(), MPFR_RNDN);
  mpfr_mul_si(t.get(), t.get(), n, MPFR_RNDN);
  mpfr_mul(u.get(), x.get(), x.get(), MPFR_RNDN);
  mpfr_sub_si(u.get(), u.get(), 1, MPFR_RNDN);
  mpfr_div(dp.get(), t.get(), u.get(), MPFR_RNDN);
}

// Ball evaluation of (P_n, P_n') at a node ball.
void legendre_ball(int n, const RealBall& x, RealBall& p, RealBall& dp, const PrecisionContext& ctx) {
  RealBall pk1 = RealBall::from_int(1, ctx);
  RealBall pk = x;
  for (int k = 2; k <= n; ++k) {
    RealBall t = x * pk;
    RealBall num = RealBall::from_int(2 * k - 1, ctx) * t - RealBall::from_int(k - 1, ctx) * pk1;
    RealBall next = num / RealBall::from_int(k, ctx);
    pk1 = pk;
    pk = next;
  }
  p = pk;
  RealBall x2m1 = x * x - RealBall::from_int(1, ctx);
  dp = (RealBall::from_int(n, ctx) * (x * pk - pk1)) / x2m1;
}

GaussRule build_rule(int n, const PrecisionContext& ctx) {
  // The ball recurrence for P_n amplifies radii by roughly (1+sqrt(2))^n,
  // so certification runs at ~2n extra bits to keep node/weight radii at
  // the 2^-prec scale.
  long prec = ctx.mantissa_bits + 2 * n + 64;
  GaussRule rule;
  rule.nodes.reserve(static_cast<size_t>(n));
  rule.weights.reserve(static_cast<size_t>(n));
  PrecisionContext wctx{prec};
  for (int i = 0; i < n; ++i) {
    // Seed (Tricomi-style), then Newton at working precision.
    double seed = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    Mpfr x(prec), p(prec), dp(prec), step(prec);
    mpfr_set_d(x.get(), seed, MPFR_RNDN);
    for (int it = 0; it < 100; ++it) {
      legendre_mid(n, x, p, dp);
      mpfr_div(step.get(), p.get(), dp.get(), MPFR_RNDN);
      mpfr_sub(x.get(), x.get(), step.get(), MPFR_RNDN);
      if (mpfr_zero_p(step.get()) || mpfr_get_exp(step.get()) < -(prec - 16)) {
        break;
      }
    }
    // Certify: for a simple root, |x - root| <= 2 |P(x)| / |P'| nearby.
    RealBall xb(Mpfr(x), 0.0);
    RealBall pb(wctx), dpb(wctx);
    legendre_ball(n, xb, pb, dpb, wctx);
    if (!dpb.is_nonzero()) throw PrecisionExhaustedError("gauss_legendre: derivative not certified nonzero");
    double node_rad = rad::mul(2.0, rad::div_up(pb.abs().upper(), dpb.abs().lower()));
    RealBall node(Mpfr(x), node_rad);
    RealBall pe(wctx), de(wctx);
    legendre_ball(n, node, pe, de, wctx);
    RealBall one = RealBall::from_int(1, wctx);
    RealBall w = RealBall::from_int(2, wctx) / ((one - node * node) * de * de);
    rule.nodes.push_back(node);
    rule.weights.push_back(w);
  }
  std::reverse(rule.nodes.begin(), rule.nodes.end());  // seeds descend; store ascending
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

std::map<std::pair<int, long>, GaussRule>& rule_cache() {
  static std::map<std::pair<int, long>, GaussRule> cache;
  return cache;
}
std::mutex rule_mutex;

// Bernstein parameter of the confocal ellipse through s for the interval
// [t0, t1] on the real axis.
double ellipse_param(std::complex<double> s, double t0, double t1) {
  double L = t1 - t0;
  double e = (std::abs(s - std::complex<double>(t0, 0)) + std::abs(s - std::complex<double>(t1, 0))) / L;
  e *= 0.9995;  // double-arithmetic bias
  if (e <= 1.0) return 1.0;
  return e + std::sqrt(e * e - 1.0);
}

constexpr int kNodeLadder[] = {8, 16, 24, 32, 48, 64};

struct PieceBound {
  int n = 0;
  double err = 0;
};

// Picks the smallest ladder rule meeting the target on [t0, t1], or n = 0
// to request bisection.
PieceBound plan_piece(const QuadratureGeometry& geom, double t0, double t1, double target) {
  double rho = 1e6;
  for (const auto& s : geom.singular_points) rho = std::min(rho, ellipse_param(s, t0, t1));
  double rho_use = std::min(rho * 0.95, 1e6);
  if (rho_use < 1.2) return {};
  double h = 0.5 * (t1 - t0);
  double cover = h * 0.5 * (rho_use + 1.0 / rho_use) * 1.002;
  double m = geom.sup_on_disk(std::complex<double>(0.5 * (t0 + t1), 0.0), cover);
  if (!std::isfinite(m)) return {};
  if (m <= 0) m = std::numeric_limits<double>::denorm_min();
  double log2rho = std::log2(rho_use);
  // (64/15) M (piece length) rho^{-2n} / (1 - rho^{-2}), safety 4.
  double pref = std::log2(17.1 * m * std::max(2.0 * h, 1e-300) / (1.0 - 1.0 / (rho_use * rho_use)));
  double log2target = std::log2(std::max(target, 1e-300));
  for (int n : kNodeLadder) {
    double log2err = pref - 2.0 * static_cast<double>(n) * log2rho;
    if (log2err <= log2target - 1.0) {
      double err = log2err < -1060 ? std::numeric_limits<double>::denorm_min() : std::exp2(log2err);
      return {n, err};
    }
  }
  return {};
}

template <typename Ball, typename Eval, typename Zero>
Ball integrate_rec(const Eval& f, const QuadratureGeometry& geom, double t0, double t1, double target,
                   const PrecisionContext& ctx, int depth, const Zero& zero) {
  PieceBound plan = plan_piece(geom, t0, t1, target);
  if (plan.n == 0) {
    if (depth >= 48)
      throw PrecisionExhaustedError("integrate: subdivision limit reached (singularity too close?)");
    double tm = 0.5 * (t0 + t1);
    Ball left = integrate_rec<Ball>(f, geom, t0, tm, 0.5 * target, ctx, depth + 1, zero);
    Ball right = integrate_rec<Ball>(f, geom, tm, t1, 0.5 * target, ctx, depth + 1, zero);
    return left + right;
  }
  const GaussRule& rule = gauss_legendre(plan.n, ctx);
  RealBall a = RealBall::from_double(t0, ctx);
  RealBall b = RealBall::from_double(t1, ctx);
  RealBall mid = (a + b).mul_2si(-1);
  RealBall half = (b - a).mul_2si(-1);
  Ball sum = zero(ctx);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    RealBall t = mid + half * rule.nodes[i];
    sum = sum + f(t).scale(rule.weights[i]);
  }
  sum = sum.scale(half);
  return sum.inflate(plan.err);
}

}  // namespace

const GaussRule& gauss_legendre(int n, const PrecisionContext& ctx) {
  std::lock_guard<std::mutex> lock(rule_mutex);
  auto key = std::make_pair(n, ctx.mantissa_bits);
  auto it = rule_cache().find(key);
  if (it != rule_cache().end()) return it->second;
  auto [pos, inserted] = rule_cache().emplace(key, build_rule(n, ctx));
  (void)inserted;
  return pos->second;
}

ComplexBall integrate_param(const std::function<ComplexBall(const RealBall&)>& f,
                            const QuadratureGeometry& geom, double target_abs_err,
                            const PrecisionContext& ctx) {
  return integrate_rec<ComplexBall>(
      f, geom, 0.0, 1.0, target_abs_err, ctx, 0,
      [](const PrecisionContext& c) { return ComplexBall(c); });
}

RealBall integrate_param_abs(const std::function<RealBall(const RealBall&)>& f,
                             const QuadratureGeometry& geom, double target_abs_err,
                             const PrecisionContext& ctx) {
  return integrate_rec<RealBall>(
      f, geom, 0.0, 1.0, target_abs_err, ctx, 0,
      [](const PrecisionContext& c) { return RealBall(c); });
}

ComplexBall integrate_segment(const std::function<ComplexBall(const ComplexBall&)>& f,
                              const ComplexBall& a, const ComplexBall& b,
                              const std::vector<std::complex<double>>& singular_u,
                              const std::function<double(std::complex<double>, double)>& sup_on_disk_u,
                              double target_abs_err, const PrecisionContext& ctx) {
  ComplexBall d = b - a;
  std::complex<double> a_d = a.midpoint_complex();
  std::complex<double> d_d = d.midpoint_complex();
  double len = std::abs(d_d);
  if (len == 0.0) return ComplexBall(ctx);

  QuadratureGeometry geom;
  for (const auto& s : singular_u) geom.singular_points.push_back((s - a_d) / d_d);
  geom.sup_on_disk = [&](std::complex<double> c, double r) {
    // |f(u(t))| * |u'(t)| with u(t) = a + t d.
    return rad::mul(sup_on_disk_u(a_d + c * d_d, rad::mul(r, rad::up(len * 1.0001))),
                    rad::up(len * 1.0001));
  };
  auto g = [&](const RealBall& t) -> ComplexBall {
    ComplexBall u = a + d.scale(t);
    return f(u) * d;
  };
  return integrate_param(g, geom, target_abs_err, ctx);
}

}  // namespace strebel
