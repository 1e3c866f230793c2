#pragma once

namespace fracderiv {

/**
 * @brief Multiplier of the renormalized order-k fractional derivative.
 *
 * prefactor = sign * Gamma(1+alpha) * trig_term / (pi * sum_term), where
 * trig_term is sin(alpha pi/2) for even k and cos(alpha pi/2) for odd k and
 * sum_term is stencil_sum(k, alpha). This is the reciprocal of the
 * Gamma(1-alpha) form of the normalization, rewritten so it has no poles
 * at integer alpha.
 */
struct NormalizationResult {
    int k = 0;
    double alpha = 0.0;
    double prefactor = 0.0;
    double sum_term = 0.0;
    double trig_term = 0.0;
    int sign = 1;
    bool at_removable_point = false;
};

/// Window around an interior integer inside which the 0/0 limit is used.
inline constexpr double kRemovableWindow = 1e-8;

/// sum over non-negative offsets o of a_o * o^alpha, with 0^alpha = 0.
/// Throws DomainError unless 0 < alpha < k.
double stencil_sum(int k, double alpha);

/// Throws DomainError unless 0 < alpha < k; NumericalError if the stencil sum
/// vanishes where the trig factor does not.
NormalizationResult prefactor(int k, double alpha);

/// Sign making alpha -> k from below reproduce +d^k/dx^k.
int calibrate_sign(int k);

/// sin(alpha pi/2) for even k, cos(alpha pi/2) for odd k.
double trig_factor(int k, double alpha);

} // namespace fracderiv
