#pragma once

#include <complex>
#include <functional>

namespace fracderiv {

using Complex = std::complex<double>;

/**
 * @brief Tolerances and geometry for integrals of psi(xi) / xi^(alpha+1) over (0, inf).
 *
 * The range is split as [0, eta] u [eta, delta] u [delta, Xi] u [Xi, inf):
 * a power-series model of psi near zero, adaptive Gauss-Kronrod panels in
 * log(xi) and then in xi, and an analytic tail.
 */
struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    /// delta. Only affects efficiency.
    double split_point = 1.0;
    /// Fixed Xi when positive; otherwise Xi doubles from 2*delta until the tail
    /// bound is below its share of the tolerance (capped at 2^60 delta).
    double truncation = 0.0;
    /// Maximum bisection depth of any Gauss-Kronrod panel.
    int max_subdivisions = 60;
    /// psi = O(xi^near_zero_order) at 0. Integrable only if alpha < near_zero_order.
    int near_zero_order = 1;
    /// psi expands in powers near_zero_order + j * series_step near 0
    /// (2 for symmetric or antisymmetric stencils, 1 for one-sided differences).
    int series_step = 1;
    /// Integrand evaluations allowed per integral before panels stop subdividing.
    long max_evaluations = 20'000'000;

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

struct IntegralEstimate {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

/// Bound on |int_Xi^inf (psi(xi) - asymptote) xi^(-alpha-1) dxi| given (Xi, alpha).
using TailBound = std::function<double(double xi, double alpha)>;

struct SingularIntegrand {
    std::function<Complex(double)> psi;
    /// Constant psi tends to at infinity; its tail is integrated exactly.
    Complex asymptote{0.0, 0.0};
    /// Empty means no declared bound: singular_integral throws TailBoundError.
    TailBound tail_bound;
    /// Optional size of the summands making up psi(xi), e.g. sum |c_t f(x + o_t xi)|.
    /// Sets the roundoff floor where psi is a cancelling difference. Defaults to |psi|.
    std::function<double(double)> magnitude;
};

/// Tail bound for a remainder with |psi - asymptote| <= sup on [Xi, inf).
TailBound bounded_tail(double sup);

/**
 * @brief int_0^inf psi(xi) xi^(-alpha-1) dxi.
 *
 * Throws DomainError unless 0 < alpha < config.near_zero_order and
 * TailBoundError when the integrand has no tail bound. Failure to meet the
 * tolerance is reported through converged = false with the best estimate.
 */
IntegralEstimate singular_integral(const SingularIntegrand& integrand, double alpha,
                                   const QuadratureConfig& config = {});

/// Adaptive 21-point Gauss-Kronrod on a finite interval [a, b].
IntegralEstimate adaptive_gauss_kronrod(const std::function<Complex(double)>& f, double a,
                                        double b, double tol, int max_depth = 60);

} // namespace fracderiv
