#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "strebel/ball.hpp"

namespace strebel {

/// Gauss-Legendre rule on [-1, 1] with certified node/weight balls,
/// nodes ascending.
struct GaussRule {
  std::vector<RealBall> nodes;
  std::vector<RealBall> weights;
};

/// Cached per (n, mantissa_bits).
const GaussRule& gauss_legendre(int n, const PrecisionContext& ctx);

/// Analytic-continuation geometry of an integrand over the parameter
/// interval [0, 1]: where its continuation is singular (parameter-plane
/// coordinates) and a certified sup bound over parameter-plane disks.
/// Both may be conservative; they only size the truncation bound.
struct QuadratureGeometry {
  std::vector<std::complex<double>> singular_points;
  std::function<double(std::complex<double> center, double radius)> sup_on_disk;
};

/// Adaptive certified quadrature of a complex integrand over the
/// parameter interval [0, 1]: returns a ball containing
/// integral_0^1 f(t) dt, with the Gauss truncation bounded through the
/// Bernstein-ellipse estimate and folded into the radius.
/// `f` is invoked at parameters in ascending order (callables that track
/// a square-root branch by continuity rely on this).
ComplexBall integrate_param(const std::function<ComplexBall(const RealBall&)>& f,
                            const QuadratureGeometry& geom, double target_abs_err,
                            const PrecisionContext& ctx);

/// Same engine for nonnegative real integrands (|.|-type); the geometry
/// must describe the analytic continuation sqrt(f fbar), i.e. include
/// mirror singularities across the real parameter axis.
RealBall integrate_param_abs(const std::function<RealBall(const RealBall&)>& f,
                             const QuadratureGeometry& geom, double target_abs_err,
                             const PrecisionContext& ctx);

/// Contour integral of f along the straight segment [a, b]:
/// integral f(u) du. Singular points and sup bounds are given in
/// u-plane coordinates and converted internally.
ComplexBall integrate_segment(const std::function<ComplexBall(const ComplexBall&)>& f,
                              const ComplexBall& a, const ComplexBall& b,
                              const std::vector<std::complex<double>>& singular_u,
                              const std::function<double(std::complex<double>, double)>& sup_on_disk_u,
                              double target_abs_err, const PrecisionContext& ctx);

}  // namespace strebel
