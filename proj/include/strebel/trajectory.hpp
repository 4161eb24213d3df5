#pragma once

#include <optional>
#include <vector>

#include "strebel/qdiff.hpp"
#include "strebel/quadrature.hpp"

namespace strebel {

struct TraceConfig {
  double step_tolerance = 1e-25;  // local ODE error per unit flow time
  double capture_radius = 1e-10;  // |q|-metric capture threshold at zeros
  double max_length = 100.0;      // flow-time fence (terminal NONE beyond it)
  double seed_offset = 1e-8;      // Euclidean start offset from the zero
};

/// A zero of the differential prepared for tracing: phi ~ c_k (z - p)^k
/// emits k + 2 separatrices at the stored angles (ascending, one full
/// turn, counterclockwise).
struct TraceVertex {
  ComplexBall point;
  int order = 0;
  ComplexBall leading_coeff;
  std::vector<RealBall> angles;

  TraceVertex(const PrecisionContext& ctx) : point(ctx), leading_coeff(ctx) {}
};

/// A traced critical horizontal trajectory. q_length is the certified
/// |q|-metric length (contour integral of sqrt(phi) over the polyline
/// plus endpoint corrections); w_increment is the full complex integral,
/// whose imaginary part vanishes for a genuine critical trajectory.
struct Separatrix {
  int origin_vertex = -1;
  int direction_index = -1;
  std::vector<ComplexBall> path;
  std::optional<int> terminal_vertex;
  std::optional<int> terminal_direction;
  RealBall q_length;
  ComplexBall w_increment;
  double flow_time = 0;

  Separatrix(const PrecisionContext& ctx) : q_length(ctx), w_increment(ctx) {}
};

/// A matched pair of separatrix orientations with the combined period.
struct EdgeMeasure {
  int sep_a = -1;
  int sep_b = -1;
  RealBall period;

  EdgeMeasure(const PrecisionContext& ctx) : period(ctx) {}
};

/// Shared geometry (divisor, local data at zeros, midpoint caches) plus
/// the tracing engine. Immutable after construction; traces are pure.
class TrajectoryTracer {
 public:
  TrajectoryTracer(QuadraticDifferential q, TraceConfig cfg, const PrecisionContext& ctx);

  const std::vector<TraceVertex>& vertices() const { return vertices_; }
  const Divisor& div() const { return divisor_; }
  const QuadraticDifferential& differential() const { return q_; }
  const PrecisionContext& context() const { return ctx_; }

  Separatrix trace(int vertex, int direction) const;
  /// All k+2 slots of every vertex, ordered by (vertex, direction).
  std::vector<Separatrix> trace_all() const;

  /// Certified sup bound of |sqrt(phi)| over a disk (for quadrature
  /// truncation bounds).
  double sqrtphi_sup(std::complex<double> center, double radius) const;

 private:
  QuadraticDifferential q_;
  TraceConfig cfg_;
  PrecisionContext ctx_;
  Divisor divisor_;
  std::vector<TraceVertex> vertices_;
  // Pole clusters of the reduced coefficient (for sup bounds).
  std::vector<RootCluster> den_clusters_;
  double den_lead_lo_ = 0;
  std::vector<std::complex<double>> singular_pts_;  // zeros + finite poles

  friend struct TraceDriver;
};

/// Angles of the k+2 separatrices at a zero of order k.
std::vector<RealBall> separatrix_directions(const QuadraticDifferential& q, const ComplexBall& zero_point,
                                            int order, const PrecisionContext& ctx);

/// Combines the two orientations of one edge; throws MaxLengthError when
/// either lacks a terminal and MismatchError when the lengths disagree
/// beyond their combined radii.
EdgeMeasure edge_period(const std::vector<Separatrix>& seps, int a, int b);

/// Certified length integral of |sqrt(phi)| |dy| along [y0, y1]; zeros of
/// q at (or on) the segment are handled by endpoint substitution, poles
/// on the path raise PoleOnPathError.
RealBall segment_period(const QuadraticDifferential& q, const ComplexBall& y0, const ComplexBall& y1,
                        const PrecisionContext& ctx);

/// (1/pi) arcsin(2r(3+4r^2)/(1+12r^2)) as a certified ball.
RealBall ell_closed_form(const Rational& r, const PrecisionContext& ctx);

struct MembershipResult {
  bool ok = true;
  double worst_abs_im = 0;   // max |Im zeta|
  double worst_re_low = 0;   // max (0 - Re zeta)
  double worst_re_high = 0;  // max (Re zeta - 1)
};

/// Maps every point through the chain (applied left to right) and checks
/// the image lies in the strip |Im| <= tol, -tol <= Re <= 1 + tol.
MembershipResult membership_check(const std::vector<ComplexBall>& points,
                                  const std::vector<RationalMap>& chain, double tol,
                                  const PrecisionContext& ctx);

}  // namespace strebel
