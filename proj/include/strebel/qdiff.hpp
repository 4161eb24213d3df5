#pragma once

#include <string>
#include <utility>
#include <vector>

#include "strebel/rational.hpp"
#include "strebel/rational_map.hpp"

namespace strebel {

/// One entry of a divisor: a certified point with its order (negative at
/// poles, positive at zeros).
struct DivisorEntry {
  SpherePoint point;
  int order;
};

/// Divisor of a quadratic differential; entries are pairwise disjoint and
/// the orders sum to -4 on the sphere.
struct Divisor {
  std::vector<DivisorEntry> entries;

  int degree() const;
  std::vector<DivisorEntry> zeros() const;
  std::vector<DivisorEntry> poles() const;
};

/// Meromorphic quadratic differential q = phi(z) dz^2 in the affine chart,
/// with a provenance label for reports.
class QuadraticDifferential {
 public:
  QuadraticDifferential(RationalMap phi, std::string label)
      : phi_(std::move(phi)), label_(std::move(label)) {}

  const RationalMap& phi() const { return phi_; }
  const std::string& label() const { return label_; }
  PrecisionContext context() const { return phi_.context(); }

 private:
  RationalMap phi_;
  std::string label_;
};

/// The paper's parameter: s = r sqrt(3) with 0 < r < 1/2, and the target
/// ramification value w = f(-c) = 1/2 + i s.
struct SParameter {
  Rational r;
  RealBall s;
  ComplexBall w;

  /// Validates 0 < r < 1/2 (RangeError otherwise) and certifies
  /// 0 < s < sqrt(3)/2.
  static SParameter make(const Rational& r, const PrecisionContext& ctx);
};

/// Both roots of w c^2 + (4 - 2w) c + w = 0; `c` is the root certified
/// inside the unit circle, `other` its reciprocal outside.
struct CSolution {
  ComplexBall c;
  ComplexBall other;
};

/// The paper's maps. f depends on the branch-point parameter c.
RationalMap f_map(const ComplexBall& c);
RationalMap g_map(const PrecisionContext& ctx);

/// q0 = (1/(4 pi^2)) dzeta^2 / (zeta (1 - zeta)).
QuadraticDifferential build_q0(const PrecisionContext& ctx);

/// Pullback F^*(q): coefficient phi(F(x)) F'(x)^2, reduced.
QuadraticDifferential pullback(const QuadraticDifferential& q, const RationalMap& f,
                               const PrecisionContext& ctx, const std::string& map_label = "F");

/// Zeros and poles with certified multiplicities, including the chart
/// point at infinity with order (deg den - deg num - 4).
Divisor divisor(const QuadraticDifferential& q, const PrecisionContext& ctx);

/// Residue of sqrt(q) at a double pole: with phi = c2 u^-2 (1 + O(u))
/// locally, returns 2 pi sqrt(-c2), requiring c2 certified negative real
/// (NotStrebelLikeError otherwise; NotDoublePoleError when the pole order
/// is not exactly 2).
RealBall residue_sqrt(const QuadraticDifferential& q, const SpherePoint& p, const PrecisionContext& ctx);

/// Root selection for Eq. (c): returns the |c| < 1 root, certified, with
/// a residual check that f(-c) meets the ball of w.
CSolution solve_c(const SParameter& sp, const PrecisionContext& ctx);

/// q1 = g^*(q0).
QuadraticDifferential build_q1(const PrecisionContext& ctx);

/// q_c = f^*(q1) with c from solve_c; the label records r.
std::pair<QuadraticDifferential, CSolution> build_qc(const SParameter& sp, const PrecisionContext& ctx);

}  // namespace strebel
