#pragma once

#include <utility>

#include "strebel/errors.hpp"

namespace strebel {

/// Working precision for ball arithmetic. Every operation taking a
/// PrecisionContext produces midpoints at `mantissa_bits` and radii
/// consistent with that precision.
struct PrecisionContext {
  long mantissa_bits = 256;

  static constexpr long kMinBits = 32;
  static constexpr long kMaxBits = 4096;

  PrecisionContext doubled() const { return PrecisionContext{mantissa_bits * 2}; }
};

/// Runs `f(ctx)` and, on IndeterminateError/PrecisionExhaustedError,
/// retries with doubled mantissa up to kMaxBits before giving up.
template <typename F>
auto with_precision_escalation(PrecisionContext ctx, F&& f) {
  for (;;) {
    try {
      return f(ctx);
    } catch (const IndeterminateError&) {
      if (ctx.mantissa_bits * 2 > PrecisionContext::kMaxBits) throw;
    } catch (const PrecisionExhaustedError&) {
      if (ctx.mantissa_bits * 2 > PrecisionContext::kMaxBits) throw;
    }
    ctx = ctx.doubled();
  }
}

}  // namespace strebel
