#include "strebel/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "strebel/certify.hpp"

namespace strebel {

namespace {

// ---------------------------------------------------------------------------
// Fehlberg 7(8), 13 stages, rational tableau (RK7(8)-13M).

constexpr int kStages = 13;

struct Frac {
  long num;
  long den;
};

constexpr Frac kAlpha[kStages] = {{0, 1},  {2, 27}, {1, 9}, {1, 6}, {5, 12}, {1, 2}, {5, 6},
                                  {1, 6},  {2, 3},  {1, 3}, {1, 1}, {0, 1},  {1, 1}};

constexpr Frac kBeta[kStages - 1][kStages - 1] = {
    {{2, 27}},
    {{1, 36}, {1, 12}},
    {{1, 24}, {0, 1}, {1, 8}},
    {{5, 12}, {0, 1}, {-25, 16}, {25, 16}},
    {{1, 20}, {0, 1}, {0, 1}, {1, 4}, {1, 5}},
    {{-25, 108}, {0, 1}, {0, 1}, {125, 108}, {-65, 27}, {125, 54}},
    {{31, 300}, {0, 1}, {0, 1}, {0, 1}, {61, 225}, {-2, 9}, {13, 900}},
    {{2, 1}, {0, 1}, {0, 1}, {-53, 6}, {704, 45}, {-107, 9}, {67, 90}, {3, 1}},
    {{-91, 108}, {0, 1}, {0, 1}, {23, 108}, {-976, 135}, {311, 54}, {-19, 60}, {17, 6}, {-1, 12}},
    {{2383, 4100}, {0, 1}, {0, 1}, {-341, 164}, {4496, 1025}, {-301, 82}, {2133, 4100}, {45, 82},
     {45, 164}, {18, 41}},
    {{3, 205}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {-6, 41}, {-3, 205}, {-3, 41}, {3, 41}, {6, 41}, {0, 1}},
    {{-1777, 4100}, {0, 1}, {0, 1}, {-341, 164}, {4496, 1025}, {-289, 82}, {2193, 4100}, {51, 82},
     {33, 164}, {12, 41}, {0, 1}, {1, 1}},
};

// 8th-order combination weights.
constexpr Frac kWeight[kStages] = {{0, 1},   {0, 1},   {0, 1},   {0, 1},    {0, 1},
                                   {34, 105}, {9, 35},  {9, 35},  {9, 280},  {9, 280},
                                   {0, 1},   {41, 840}, {41, 840}};

double wrap_angle(double a) {
  while (a > M_PI) a -= 2 * M_PI;
  while (a <= -M_PI) a += 2 * M_PI;
  return a;
}

// Euclidean -> |q|-metric distance estimate near a zero of order k.
double q_dist_estimate(double euclid, double ck_abs, int k) {
  return 2.0 / (k + 2) * std::sqrt(ck_abs) * std::pow(euclid, 0.5 * (k + 2));
}

// Certified sup bound for |sqrt(phi)| on a disk, from the shifted
// numerator coefficients and the distance of the disk to the poles.
struct SqrtPhiSup {
  const Polynomial* num = nullptr;
  const Polynomial* den = nullptr;
  std::vector<std::complex<double>> pole_pts;
  std::vector<int> pole_mult;
  std::vector<double> pole_rad;
  double den_lead_lo = 0;
  long den_degree = 0;

  void init(const RationalMap& phi, const std::vector<RootCluster>& dens) {
    num = &phi.num();
    den = &phi.den();
    den_degree = phi.den().certified_degree();
    den_lead_lo = phi.den().leading_coeff().abs_lo();
    for (const auto& c : dens) {
      pole_pts.push_back(c.point.midpoint_complex());
      pole_mult.push_back(c.multiplicity);
      pole_rad.push_back(c.point.radius());
    }
  }

  double operator()(std::complex<double> center, double radius) const {
    const double inf_d = std::numeric_limits<double>::infinity();
    PrecisionContext ctx{num->prec()};
    ComplexBall c = ComplexBall::from_doubles(center.real(), center.imag(), ctx);
    Polynomial shifted = num->taylor_shift(c);
    double sup_num = 0;
    double rp = 1.0;
    for (size_t k = 0; k < shifted.size(); ++k) {
      sup_num = rad::add(sup_num, rad::mul(shifted.coeff(k).abs_up(), rp));
      rp = rad::mul(rp, radius);
    }
    double inf_den = den_lead_lo;
    if (den_degree == 0) {
      inf_den = den->coeff(0).abs_lo();
    } else {
      for (size_t i = 0; i < pole_pts.size(); ++i) {
        double d = rad::sub_lo(rad::down(std::abs(center - pole_pts[i])), rad::add(pole_rad[i], radius));
        if (!(d > 0)) return inf_d;
        for (int m = 0; m < pole_mult[i]; ++m) inf_den = rad::mul_lo(inf_den, d);
      }
    }
    if (!(inf_den > 0)) return inf_d;
    return rad::mul(rad::sqrt_up(rad::div_up(sup_num, inf_den)), 1.0001);
  }
};

ComplexBall eval_phi(const RationalMap& phi, const ComplexBall& u) {
  return phi.num().eval(u) / phi.den().eval(u);
}

// Branch-chained sqrt(phi) evaluation: each call picks the square root
// closer to the previous value (callers feed points in path order).
struct BranchChain {
  const RationalMap* phi;
  std::complex<double> prev;

  ComplexBall operator()(const ComplexBall& u) {
    ComplexBall w = eval_phi(*phi, u).sqrt();
    std::complex<double> wm = w.midpoint_complex();
    if (wm.real() * prev.real() + wm.imag() * prev.imag() < 0) {
      w = -w;
      wm = -wm;
    }
    prev = wm;
    return w;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Tracer construction

TrajectoryTracer::TrajectoryTracer(QuadraticDifferential q, TraceConfig cfg, const PrecisionContext& ctx)
    : q_(std::move(q)), cfg_(cfg), ctx_{std::max(ctx.mantissa_bits, q_.context().mantissa_bits)},
      divisor_(divisor(q_, ctx_)) {
  const RationalMap& phi = q_.phi();
  for (const auto& entry : divisor_.zeros()) {
    if (entry.point.is_infinity())
      throw PrecisionExhaustedError("TrajectoryTracer: zero at infinity is not traceable in this chart");
    TraceVertex v(ctx_);
    v.point = entry.point.z();
    v.order = entry.order;
    // phi = (z-p)^k N_k / den with N_k(p) != 0.
    Polynomial cur = phi.num();
    for (int t = 0; t < v.order; ++t) {
      auto [quot, rem] = cur.divide_linear(v.point);
      if (!rem.contains_zero())
        throw PrecisionExhaustedError("TrajectoryTracer: zero deflation remainder not certified");
      cur = std::move(quot);
    }
    ComplexBall nk = cur.eval(v.point);
    ComplexBall dv = phi.den().eval(v.point);
    if (!nk.is_nonzero() || !dv.is_nonzero())
      throw PrecisionExhaustedError("TrajectoryTracer: leading coefficient not certified at a zero");
    v.leading_coeff = nk / dv;

    RealBall argc = v.leading_coeff.arg();
    RealBall twopi = RealBall::pi(ctx_).mul_2si(1);
    int slots = v.order + 2;
    for (int j = 0; j < slots; ++j) {
      RealBall theta = (RealBall::from_int(j, ctx_) * twopi - argc) / RealBall::from_int(slots, ctx_);
      v.angles.push_back(theta);
    }
    vertices_.push_back(std::move(v));
  }
  if (phi.den().certified_degree() >= 1) den_clusters_ = poly_roots(phi.den(), ctx_);
  den_lead_lo_ = phi.den().leading_coeff().abs_lo();
  for (const auto& v : vertices_) singular_pts_.push_back(v.point.midpoint_complex());
  for (const auto& c : den_clusters_) singular_pts_.push_back(c.point.midpoint_complex());
}

double TrajectoryTracer::sqrtphi_sup(std::complex<double> center, double radius) const {
  SqrtPhiSup sup;
  sup.init(q_.phi(), den_clusters_);
  return sup(center, radius);
}

std::vector<RealBall> separatrix_directions(const QuadraticDifferential& q, const ComplexBall& zero_point,
                                            int order, const PrecisionContext& ctx) {
  if (order < 1) throw RangeError("separatrix_directions: order must be >= 1");
  PrecisionContext wctx{std::max(ctx.mantissa_bits, q.context().mantissa_bits)};
  Polynomial cur = q.phi().num();
  for (int t = 0; t < order; ++t) {
    auto [quot, rem] = cur.divide_linear(zero_point);
    if (!rem.contains_zero())
      throw PrecisionExhaustedError("separatrix_directions: deflation remainder not certified");
    cur = std::move(quot);
  }
  ComplexBall ck = cur.eval(zero_point) / q.phi().den().eval(zero_point);
  RealBall argc = ck.arg();
  RealBall twopi = RealBall::pi(wctx).mul_2si(1);
  std::vector<RealBall> out;
  for (int j = 0; j < order + 2; ++j)
    out.push_back((RealBall::from_int(j, wctx) * twopi - argc) / RealBall::from_int(order + 2, wctx));
  return out;
}

// ---------------------------------------------------------------------------
// Endpoint corrections: the contour integral of sqrt(phi) from a zero to
// a nearby endpoint along the straight ray, computed through u = p + d t^2
// (which makes the integrand analytic at the vertex for every order k).

namespace {

struct RayIntegral {
  ComplexBall w;             // integral of sqrt(phi) du from p to endpoint
  ComplexBall sqrtphi_end;   // branch value at the endpoint consistent with w
};

RayIntegral ray_w_integral(const TrajectoryTracer& tracer, int vertex, const ComplexBall& endpoint,
                           const std::vector<std::complex<double>>& singulars, double target) {
  const PrecisionContext& ctx = tracer.context();
  const TraceVertex& v = tracer.vertices()[static_cast<size_t>(vertex)];
  const RationalMap& phi = tracer.differential().phi();
  int k = v.order;
  ComplexBall d = endpoint - v.point;
  ComplexBall jac = d.mul_2si(1);

  // Fixed-branch local model sqrt(c_k) d^{k/2} t^k for sign anchoring.
  ComplexBall model_pref = v.leading_coeff.sqrt();
  {
    ComplexBall dpow = ComplexBall::from_int(1, 0, ctx);
    for (int t = 0; t < k / 2; ++t) dpow = dpow * d;
    if (k % 2 == 1) dpow = dpow * d.sqrt();
    model_pref = model_pref * dpow;
  }

  auto eval = [&](const RealBall& t) -> ComplexBall {
    ComplexBall u = v.point + d.scale(t * t);
    ComplexBall w = eval_phi(phi, u).sqrt();
    // model value at t
    RealBall tk = RealBall::from_int(1, ctx);
    for (int e = 0; e < k; ++e) tk = tk * t;
    ComplexBall m = model_pref.scale(tk);
    std::complex<double> wm = w.midpoint_complex(), mm = m.midpoint_complex();
    if (wm.real() * mm.real() + wm.imag() * mm.imag() < 0) w = -w;
    return w * jac.scale(t);
  };

  QuadratureGeometry geom;
  std::complex<double> pd = v.point.midpoint_complex();
  std::complex<double> dd = d.midpoint_complex();
  for (const auto& s : singulars) {
    std::complex<double> ratio = (s - pd) / dd;
    if (std::abs(ratio) < 1e-12) continue;  // the vertex itself
    std::complex<double> root = std::sqrt(ratio);
    geom.singular_points.push_back(root);
    geom.singular_points.push_back(-root);
  }
  double dabs = std::abs(dd);
  geom.sup_on_disk = [&tracer, pd, dd, dabs](std::complex<double> c, double r) {
    std::complex<double> ucenter = pd + dd * (c * c);
    double urad = rad::mul(dabs, rad::add(rad::mul(r, r), rad::mul(2.0 * std::abs(c), r))) * 1.01;
    double m = tracer.sqrtphi_sup(ucenter, urad);
    double jacsup = 2.0 * dabs * (std::abs(c) + r) * 1.01;
    return rad::mul(m, jacsup);
  };

  RayIntegral out{integrate_param(eval, geom, target, ctx), ComplexBall(ctx)};

  // Branch value at the endpoint under the same anchoring.
  ComplexBall w_end = eval_phi(phi, endpoint).sqrt();
  {
    std::complex<double> wm = w_end.midpoint_complex(), mm = model_pref.midpoint_complex();
    if (wm.real() * mm.real() + wm.imag() * mm.imag() < 0) w_end = -w_end;
  }
  out.sqrtphi_end = w_end;
  return out;
}

// Flips the ray integral so its endpoint branch agrees with `want`.
void match_branch(RayIntegral& ray, std::complex<double> want) {
  std::complex<double> have = ray.sqrtphi_end.midpoint_complex();
  if (have.real() * want.real() + have.imag() * want.imag() < 0) {
    ray.w = -ray.w;
    ray.sqrtphi_end = -ray.sqrtphi_end;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// The tracing driver.

struct TraceDriver {
  const TrajectoryTracer& tracer;
  const TraceConfig& cfg;
  PrecisionContext ctx;
  long prec;

  std::vector<MpComplex> num_mid, den_mid;
  std::vector<std::complex<double>> zero_pts;
  std::vector<double> zero_ck;
  std::vector<int> zero_k;

  explicit TraceDriver(const TrajectoryTracer& t)
      : tracer(t), cfg(t.cfg_), ctx(t.context()), prec(t.context().mantissa_bits) {
    for (const auto& c : t.q_.phi().num().coeffs()) num_mid.push_back(MpComplex::from_ball(c));
    for (const auto& c : t.q_.phi().den().coeffs()) den_mid.push_back(MpComplex::from_ball(c));
    for (const auto& v : t.vertices_) {
      zero_pts.push_back(v.point.midpoint_complex());
      zero_ck.push_back(v.leading_coeff.abs().midpoint_double());
      zero_k.push_back(v.order);
    }
  }

  MpComplex horner(const std::vector<MpComplex>& cs, const MpComplex& z) const {
    MpComplex acc(prec);
    for (size_t i = cs.size(); i-- > 0;) acc = acc * z + cs[i];
    return acc;
  }

  // Velocity 1/sqrt(phi) with the branch continued from prev (midpoint
  // arithmetic only). Throws DivergedError at the pole fence.
  MpComplex velocity(const MpComplex& z, std::complex<double>& prev) const {
    MpComplex phi = horner(num_mid, z) / horner(den_mid, z);
    double mag = phi.abs_d();
    if (!(mag < 1e14)) throw DivergedError("trace: pole fence hit (|phi| too large)");
    MpComplex root = phi.sqrt();
    MpComplex v = MpComplex::from_d({1, 0}, prec) / root;
    std::complex<double> vd = v.to_d();
    if (vd.real() * prev.real() + vd.imag() * prev.imag() < 0) {
      v = -v;
      vd = -vd;
    }
    prev = vd;
    return v;
  }

  double arg_phi(const MpComplex& z) const {
    MpComplex phi = horner(num_mid, z) / horner(den_mid, z);
    std::complex<double> p = phi.to_d();
    return std::atan2(p.imag(), p.real());
  }

  double min_qdist(std::complex<double> z, int* which = nullptr) const {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < zero_pts.size(); ++i) {
      double qd = q_dist_estimate(std::abs(z - zero_pts[i]), zero_ck[i], zero_k[i]);
      if (qd < best) {
        best = qd;
        if (which) *which = static_cast<int>(i);
      }
    }
    return best;
  }

  // One RKF78 attempt from z with step h; fills znew and the local error
  // estimate. Stage branch states start from prev.
  void rk_step(const MpComplex& z, double h, std::complex<double> prev, const MpComplex& k1,
               MpComplex& znew, double& err) const {
    std::vector<MpComplex> k;
    k.reserve(kStages);
    k.push_back(k1);
    for (int s = 1; s < kStages; ++s) {
      MpComplex acc(prec);
      for (int j = 0; j < s; ++j) {
        const Frac& f = kBeta[s - 1][j];
        if (f.num == 0) continue;
        acc = acc + k[static_cast<size_t>(j)].scale_si(f.num, f.den);
      }
      MpComplex zs = z + acc.scale_d(h);
      std::complex<double> pv = prev;
      k.push_back(velocity(zs, pv));
    }
    MpComplex sum(prec);
    for (int s = 0; s < kStages; ++s) {
      const Frac& f = kWeight[s];
      if (f.num == 0) continue;
      sum = sum + k[static_cast<size_t>(s)].scale_si(f.num, f.den);
    }
    znew = z + sum.scale_d(h);
    MpComplex ev = (k[0] + k[10]) - (k[11] + k[12]);
    err = std::abs(ev.to_d()) * (41.0 / 840.0) * h;
  }
};

Separatrix TrajectoryTracer::trace(int vertex, int direction) const {
  TraceDriver drv(*this);
  const TraceVertex& org = vertices_[static_cast<size_t>(vertex)];
  Separatrix sep(ctx_);
  sep.origin_vertex = vertex;
  sep.direction_index = direction;

  // Seed at Euclidean offset along the separatrix angle.
  Mpfr theta = org.angles[static_cast<size_t>(direction)].midpoint();
  MpComplex dir(ctx_.mantissa_bits);
  mpfr_sin_cos(dir.im.get(), dir.re.get(), theta.get(), MPFR_RNDN);
  MpComplex z = MpComplex::from_ball(org.point) + dir.scale_d(cfg_.seed_offset);
  double seed_qdist =
      q_dist_estimate(cfg_.seed_offset, drv.zero_ck[static_cast<size_t>(vertex)], org.order);

  std::complex<double> prev = dir.to_d();
  MpComplex k1 = drv.velocity(z, prev);
  {
    std::complex<double> v0 = k1.to_d();
    double misalign = wrap_angle(std::atan2(v0.imag(), v0.real()) -
                                 mpfr_get_d(theta.get(), MPFR_RNDN));
    if (std::fabs(misalign) > 0.3)
      throw PrecisionExhaustedError("trace: seed velocity misaligned with the separatrix angle");
  }

  sep.path.push_back(ComplexBall(z.re, z.im, 0.0));
  double quad_target = std::ldexp(1.0, static_cast<int>(-(ctx_.mantissa_bits - 30)));

  // Chunked contour integration state.
  ComplexBall w_sum(ctx_);
  size_t chunk_start = 0;
  Mpfr chunk_dt(ctx_.mantissa_bits);
  Mpfr total_t(ctx_.mantissa_bits);
  double chunk_turn = 0, chunk_argphi = 0;
  double chunk_dist0 = 0;
  {
    int unused;
    chunk_dist0 = drv.min_qdist(z.to_d(), &unused);
  }
  std::complex<double> last_v = prev;
  double last_argphi = drv.arg_phi(z);
  std::complex<double> chain_ref = std::complex<double>(1.0, 0.0) / prev;

  auto close_chunk = [&](const MpComplex& endpt) {
    if (sep.path.size() - 1 == chunk_start) return;  // nothing accumulated
    const ComplexBall& a = sep.path[chunk_start];
    ComplexBall b(endpt.re, endpt.im, 0.0);
    BranchChain chain{&q_.phi(), chain_ref};
    auto sup = [this](std::complex<double> c, double r) { return sqrtphi_sup(c, r); };
    ComplexBall wseg = integrate_segment([&chain](const ComplexBall& u) { return chain(u); }, a, b,
                                         singular_pts_, sup, quad_target, ctx_);
    // Unit-speed / horizontality consistency of the accepted chunk.
    double dt = mpfr_get_d(chunk_dt.get(), MPFR_RNDN);
    double budget = 2e4 * cfg_.step_tolerance * (dt + 1e-3) + wseg.radius() + 1e-28;
    RealBall dtb(Mpfr(chunk_dt), 0.0);
    double re_dev = (wseg.real() - dtb).abs().upper();
    double im_dev = wseg.imag().abs().upper();
    if (re_dev > budget || im_dev > budget)
      throw MismatchError("trace: chunk failed the unit-speed/horizontality check");
    w_sum = w_sum + wseg;
    chunk_start = sep.path.size() - 1;
    mpfr_set_zero(chunk_dt.get(), 1);
    chunk_turn = 0;
    chunk_argphi = 0;
    int unused;
    chunk_dist0 = drv.min_qdist(endpt.to_d(), &unused);
    chain_ref = std::complex<double>(1.0, 0.0) / last_v;
  };

  double h = std::min(0.5 * seed_qdist, 0.02);
  double t_eligible = std::max(100.0 * cfg_.capture_radius, 4.0 * seed_qdist);
  int captured_vertex = -1;
  bool hit_max_length = false;

  for (long iter = 0;; ++iter) {
    if (iter > 2000000) throw DivergedError("trace: iteration limit");
    double t_now = mpfr_get_d(total_t.get(), MPFR_RNDN);
    if (t_now > cfg_.max_length) {
      hit_max_length = true;
      break;
    }
    if (std::abs(z.to_d()) > 1e6) throw DivergedError("trace: left the affine chart (|z| fence)");
    int nearest = -1;
    double qd = drv.min_qdist(z.to_d(), &nearest);
    double hcap = std::min(0.02, 0.4 * qd);
    if (h > hcap) h = hcap;
    if (h < 1e-16) throw DivergedError("trace: step size collapsed");

    MpComplex znew(ctx_.mantissa_bits);
    double err = 0;
    drv.rk_step(z, h, prev, k1, znew, err);
    double argphi_new = drv.arg_phi(znew);
    double dargphi = wrap_angle(argphi_new - last_argphi);
    if (err > cfg_.step_tolerance * h || std::fabs(dargphi) > 1.4) {
      h *= 0.5;
      continue;
    }

    // Accept.
    std::complex<double> pv = prev;
    MpComplex vnew = drv.velocity(znew, pv);
    std::complex<double> vd = vnew.to_d();
    chunk_turn += std::fabs(wrap_angle(std::atan2(vd.imag(), vd.real()) -
                                       std::atan2(last_v.imag(), last_v.real())));
    chunk_argphi += std::fabs(dargphi);
    last_argphi = argphi_new;
    last_v = vd;
    prev = pv;
    z = znew;
    k1 = vnew;
    mpfr_add_d(total_t.get(), total_t.get(), h, MPFR_RNDN);
    mpfr_add_d(chunk_dt.get(), chunk_dt.get(), h, MPFR_RNDN);
    sep.path.push_back(ComplexBall(z.re, z.im, 0.0));

    // Step-size growth for the next attempt.
    double grow = 0.9 * std::pow(cfg_.step_tolerance * h / std::max(err, 1e-300), 1.0 / 7.0);
    h *= std::min(std::max(grow, 0.25), 3.5);

    // Chunk closing rules.
    int near_new = -1;
    double qd_new = drv.min_qdist(z.to_d(), &near_new);
    size_t fine = sep.path.size() - 1 - chunk_start;
    double span = std::abs(z.to_d() - sep.path[chunk_start].midpoint_complex());
    bool dist_jump = qd_new > 1.5 * chunk_dist0 || qd_new < chunk_dist0 / 1.5;
    if (fine >= 32 || span > 0.1 || chunk_turn > 0.4 || chunk_argphi > 1.2 || dist_jump)
      close_chunk(z);

    // Capture.
    double t_d = mpfr_get_d(total_t.get(), MPFR_RNDN);
    if (t_d >= t_eligible && qd_new <= cfg_.capture_radius) {
      captured_vertex = near_new;
      break;
    }
  }

  close_chunk(z);
  sep.flow_time = mpfr_get_d(total_t.get(), MPFR_RNDN);

  if (hit_max_length || captured_vertex < 0) {
    sep.w_increment = w_sum;
    sep.q_length = w_sum.real().abs();
    return sep;  // terminal NONE
  }

  const TraceVertex& term = vertices_[static_cast<size_t>(captured_vertex)];
  ComplexBall z_fin = sep.path.back();

  // Incoming slot: the terminal half-edge points back along the edge.
  std::complex<double> back = z_fin.midpoint_complex() - term.point.midpoint_complex();
  double theta_in = std::atan2(back.imag(), back.real());
  int slot = -1;
  for (size_t j = 0; j < term.angles.size(); ++j) {
    if (std::fabs(wrap_angle(theta_in - term.angles[j].midpoint_double())) <= 0.1) {
      slot = static_cast<int>(j);
      break;
    }
  }
  if (slot < 0)
    throw MismatchError("trace: incoming direction does not match a separatrix slot within 0.1 rad");
  sep.terminal_vertex = captured_vertex;
  sep.terminal_direction = slot;

  // Endpoint corrections, branch-matched at the seams: the branch of
  // sqrt(phi) along the trajectory is 1/velocity.
  RayIntegral seed_ray = ray_w_integral(*this, vertex, sep.path.front(), singular_pts_, quad_target);
  {
    MpComplex zseed = MpComplex::from_ball(sep.path.front());
    std::complex<double> pv = dir.to_d();
    MpComplex v0 = drv.velocity(zseed, pv);
    match_branch(seed_ray, std::complex<double>(1.0, 0.0) / v0.to_d());
  }
  RayIntegral cap_ray = ray_w_integral(*this, captured_vertex, z_fin, singular_pts_, quad_target);
  match_branch(cap_ray, std::complex<double>(1.0, 0.0) / last_v);

  ComplexBall w_total = seed_ray.w + w_sum - cap_ray.w;
  // Vertex cluster slop: the rays start at the ball centers, not the true
  // zeros; the integral over that gap is folded into the radius.
  double slop = 0;
  for (int vv : {vertex, captured_vertex}) {
    const TraceVertex& tv = vertices_[static_cast<size_t>(vv)];
    double r = tv.point.radius();
    slop = rad::add(slop, rad::mul(4.0, rad::mul(rad::sqrt_up(tv.leading_coeff.abs_up()) + 1.0, r)));
  }
  w_total = w_total.inflate(slop);

  if (!w_total.imag().contains_zero())
    throw MismatchError("trace: period integral has nonvanishing imaginary part");
  RealBall re = w_total.real();
  if (!re.is_positive()) throw MismatchError("trace: period not certified positive");
  sep.w_increment = w_total;
  sep.q_length = re.abs();
  return sep;
}

std::vector<Separatrix> TrajectoryTracer::trace_all() const {
  std::vector<Separatrix> out;
  for (size_t v = 0; v < vertices_.size(); ++v)
    for (size_t j = 0; j < vertices_[v].angles.size(); ++j)
      out.push_back(trace(static_cast<int>(v), static_cast<int>(j)));
  return out;
}

// ---------------------------------------------------------------------------

EdgeMeasure edge_period(const std::vector<Separatrix>& seps, int a, int b) {
  const Separatrix& A = seps[static_cast<size_t>(a)];
  const Separatrix& B = seps[static_cast<size_t>(b)];
  if (!A.terminal_vertex || !B.terminal_vertex)
    throw MaxLengthError("edge_period: an orientation did not terminate at a zero");
  bool mutual = *A.terminal_vertex == B.origin_vertex && *A.terminal_direction == B.direction_index &&
                *B.terminal_vertex == A.origin_vertex && *B.terminal_direction == A.direction_index;
  if (!mutual) throw MismatchError("edge_period: orientations are not mutually inverse");
  if (!RealBall::overlaps(A.q_length, B.q_length))
    throw MismatchError("edge_period: the two orientations disagree beyond combined radii");
  EdgeMeasure em(A.q_length.context());
  em.sep_a = a;
  em.sep_b = b;
  em.period = RealBall::intersect(A.q_length, B.q_length);
  return em;
}

RealBall ell_closed_form(const Rational& r, const PrecisionContext& ctx) {
  Rational a = sin_pi_ell_exact(r);
  RealBall ab = RealBall::from_rational(a, ctx);
  return ab.asin() / RealBall::pi(ctx);
}

MembershipResult membership_check(const std::vector<ComplexBall>& points,
                                  const std::vector<RationalMap>& chain, double tol,
                                  const PrecisionContext& ctx) {
  (void)ctx;
  MembershipResult res;
  for (const auto& pt : points) {
    SpherePoint cur = SpherePoint::finite(pt);
    bool bad = false;
    for (const auto& f : chain) {
      try {
        cur = f.eval(cur);
      } catch (const IndeterminateError&) {
        bad = true;
        break;
      }
      if (cur.is_infinity()) {
        bad = true;
        break;
      }
    }
    if (bad) {
      res.ok = false;
      res.worst_abs_im = std::numeric_limits<double>::infinity();
      continue;
    }
    const ComplexBall& zeta = cur.z();
    double im_hi = std::max(std::fabs(zeta.imag().upper()), std::fabs(zeta.imag().lower()));
    double re_lo = -zeta.real().lower();          // > 0 when Re < 0
    double re_hi = zeta.real().upper() - 1.0;     // > 0 when Re > 1
    res.worst_abs_im = std::max(res.worst_abs_im, im_hi);
    res.worst_re_low = std::max(res.worst_re_low, re_lo);
    res.worst_re_high = std::max(res.worst_re_high, re_hi);
    if (im_hi > tol || re_lo > tol || re_hi > tol) res.ok = false;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Straight-segment length oracle.

namespace {

struct SegmentPiece {
  ComplexBall a, b;
  int zero_order_at_a = 0;  // > 0: substitution piece with a zero at `a`
};

}  // namespace

RealBall segment_period(const QuadraticDifferential& q, const ComplexBall& y0, const ComplexBall& y1,
                        const PrecisionContext& ctx) {
  PrecisionContext wctx{std::max(ctx.mantissa_bits, q.context().mantissa_bits)};
  if (mpfr_equal_p(y0.re().get(), y1.re().get()) && mpfr_equal_p(y0.im().get(), y1.im().get()))
    return RealBall(wctx);

  Divisor div = divisor(q, wctx);
  std::vector<RootCluster> dens =
      q.phi().den().certified_degree() >= 1 ? poly_roots(q.phi().den(), wctx) : std::vector<RootCluster>{};
  SqrtPhiSup supimpl;
  supimpl.init(q.phi(), dens);

  std::complex<double> a_d = y0.midpoint_complex();
  std::complex<double> d_d = y1.midpoint_complex() - a_d;
  double len = std::abs(d_d);
  double quad_target = std::ldexp(1.0, static_cast<int>(-(wctx.mantissa_bits - 30)));

  // Divisor geometry relative to the segment.
  std::vector<std::complex<double>> divisor_pts;
  struct OnSeg {
    double t;
    ComplexBall point;
    int order;
  };
  std::vector<OnSeg> on_segment;
  double kink_slop = 0;
  for (const auto& e : div.entries) {
    if (e.point.is_infinity()) continue;
    std::complex<double> s = e.point.z().midpoint_complex();
    divisor_pts.push_back(s);
    std::complex<double> rel = (s - a_d) / d_d;
    double t = std::min(std::max(rel.real(), 0.0), 1.0);
    double dist = std::abs(s - (a_d + t * d_d));
    if (e.order < 0) {
      if (dist < 1e-6 * (1.0 + len))
        throw PoleOnPathError("segment_period: pole within 1e-6 of the segment");
      continue;
    }
    if (dist < 1e-9 * (1.0 + len)) {
      on_segment.push_back({rel.real(), e.point.z(), e.order});
      kink_slop = rad::add(kink_slop, dist);
    }
  }
  std::sort(on_segment.begin(), on_segment.end(), [](const OnSeg& x, const OnSeg& y) { return x.t < y.t; });

  // Build pieces; a zero never sits in the interior of a piece.
  std::vector<SegmentPiece> pieces;
  auto push_plain = [&](const ComplexBall& pa, const ComplexBall& pb) {
    pieces.push_back({pa, pb, 0});
  };
  auto push_from_zero = [&](const ComplexBall& zp, int order, const ComplexBall& other) {
    pieces.push_back({zp, other, order});
  };
  {
    struct Node {
      ComplexBall pt;
      int order;
    };
    std::vector<Node> nodes;
    nodes.push_back({y0, 0});
    for (const auto& os : on_segment) {
      if (os.t <= 1e-12) {
        nodes.front().order = os.order;  // zero at y0
      } else if (os.t >= 1.0 - 1e-12) {
        continue;  // handled as y1 below
      } else {
        nodes.push_back({os.point, os.order});
      }
    }
    Node last{y1, 0};
    for (const auto& os : on_segment)
      if (os.t >= 1.0 - 1e-12) last.order = os.order;
    nodes.push_back(last);

    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
      const Node& A = nodes[i];
      const Node& B = nodes[i + 1];
      if (A.order > 0 && B.order > 0) {
        ComplexBall mid = (A.pt + B.pt).mul_2si(-1);
        push_from_zero(A.pt, A.order, mid);
        push_from_zero(B.pt, B.order, mid);
      } else if (A.order > 0) {
        push_from_zero(A.pt, A.order, B.pt);
      } else if (B.order > 0) {
        push_from_zero(B.pt, B.order, A.pt);
      } else {
        push_plain(A.pt, B.pt);
      }
    }
  }

  const RationalMap& phi = q.phi();
  RealBall total(wctx);
  for (const auto& piece : pieces) {
    std::complex<double> pa = piece.a.midpoint_complex();
    std::complex<double> pd = piece.b.midpoint_complex() - pa;
    double plen = std::abs(pd);
    if (plen == 0) continue;
    ComplexBall d = piece.b - piece.a;
    RealBall dabs = d.abs();

    QuadratureGeometry geom;
    if (piece.zero_order_at_a == 0) {
      for (const auto& s : divisor_pts) {
        std::complex<double> ts = (s - pa) / pd;
        geom.singular_points.push_back(ts);
        geom.singular_points.push_back(std::conj(ts));  // sqrt(f fbar) mirror
      }
      geom.sup_on_disk = [&supimpl, pa, pd, plen](std::complex<double> c, double r) {
        return rad::mul(supimpl(pa + c * pd, rad::mul(r, plen * 1.0001)), plen * 1.0001);
      };
      auto f = [&](const RealBall& t) -> RealBall {
        ComplexBall u = piece.a + d.scale(t);
        return eval_phi(phi, u).abs().sqrt() * dabs;
      };
      total = total + integrate_param_abs(f, geom, quad_target, wctx);
    } else {
      for (const auto& s : divisor_pts) {
        std::complex<double> ratio = (s - pa) / pd;
        if (std::abs(ratio) < 1e-12) continue;  // the zero itself
        std::complex<double> root = std::sqrt(ratio);
        for (const auto& ts : {root, -root}) {
          geom.singular_points.push_back(ts);
          geom.singular_points.push_back(std::conj(ts));
        }
      }
      geom.sup_on_disk = [&supimpl, pa, pd, plen](std::complex<double> c, double r) {
        std::complex<double> ucenter = pa + pd * (c * c);
        double urad = rad::mul(plen, rad::add(rad::mul(r, r), rad::mul(2.0 * std::abs(c), r))) * 1.01;
        double m = supimpl(ucenter, urad);
        double jacsup = 2.0 * plen * (std::abs(c) + r) * 1.01;
        return rad::mul(m, jacsup);
      };
      RealBall two_dabs = dabs.mul_2si(1);
      auto f = [&](const RealBall& t) -> RealBall {
        ComplexBall u = piece.a + d.scale(t * t);
        return eval_phi(phi, u).abs().sqrt() * two_dabs * t;
      };
      total = total + integrate_param_abs(f, geom, quad_target, wctx);
    }
  }

  if (kink_slop > 0) {
    double local_sup = supimpl(a_d + 0.5 * d_d, 0.6 * len + 2 * kink_slop);
    if (!std::isfinite(local_sup)) local_sup = 1e3;  // defensive fallback, unused by the artifact's inputs
    total = total.inflate(rad::mul(4.0 * kink_slop, local_sup));
  }
  return total;
}

}  // namespace strebel
