#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fracderiv/function.hpp"
#include "fracderiv/quadrature.hpp"

namespace fracderiv {

enum class Family { lw_plus, lw_minus, riesz, feller, feller_rotation, central, hyperspherical };

/// CLI spelling: lw+, lw-, riesz, feller, feller-rot, central, hyper.
std::string_view to_string(Family f);
/// Accepts the CLI spelling or the enumerator name. Throws std::invalid_argument.
Family parse_family(std::string_view name);

struct OperatorSpec {
    Family family = Family::riesz;
    double alpha = 0.5;
    /// Stencil order for the central family.
    int k = 1;
    /// Feller families.
    double theta = 0.0;
    /// theta_1 .. theta_{n-1} for the hyperspherical family.
    std::vector<double> angles;
    /// Skip the |theta| <= min(alpha, 2 - alpha) check for the Feller family.
    bool unsafe_theta = false;
};

/// Throws DomainError or std::invalid_argument when parameters do not fit the family.
void validate(const OperatorSpec& spec);

struct FellerCoefficients {
    double c_minus = 0.0;
    double c_plus = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

/// c_plus = sin((alpha-theta) pi/2) / sin(alpha pi), c_minus = sin((alpha+theta) pi/2) / sin(alpha pi).
/// a1 = -(c_plus - c_minus)/2, a2 = -(c_plus + c_minus)/2.
FellerCoefficients feller_coeffs(double theta, double alpha, bool unsafe_theta = false);

/// Left Liouville-Weyl derivative, alpha/Gamma(1-alpha) int (f(x) - f(x-xi)) xi^(-alpha-1), alpha in (0,1).
IntegralEstimate lw_plus(const FunctionHandle& f, double x, double alpha,
                         const QuadratureConfig& config = {});
/// Right Liouville-Weyl derivative, mirror of lw_plus with f(x+xi).
IntegralEstimate lw_minus(const FunctionHandle& f, double x, double alpha,
                          const QuadratureConfig& config = {});
/// Riesz derivative from the second central difference, alpha in (0,2). Symbol -|w|^alpha.
IntegralEstimate riesz(const FunctionHandle& f, double x, double alpha,
                       const QuadratureConfig& config = {});
/// Antisymmetric derivative D_1 = (D+ - D-)/(2 sin(alpha pi/2)) from its direct
/// integral, alpha in (0,1). Symbol i sign(w) |w|^alpha.
IntegralEstimate d1(const FunctionHandle& f, double x, double alpha,
                    const QuadratureConfig& config = {});
/// -(c_plus D+ + c_minus D-), alpha in (0,1).
IntegralEstimate feller(const FunctionHandle& f, double x, double alpha, double theta,
                        const QuadratureConfig& config = {}, bool unsafe_theta = false);
/// sin(theta pi/2) D_1 + cos(theta pi/2) D_R, alpha in (0,1), any theta.
IntegralEstimate feller_rotation(const FunctionHandle& f, double x, double alpha, double theta,
                                 const QuadratureConfig& config = {});

/// prefactor(k, alpha) * int_0^inf (central k-th difference of f at x with step xi) xi^(-alpha-1).
/// alpha in (0,k); larger alpha goes through extended_order.
IntegralEstimate central_fractional(int k, double alpha, const FunctionHandle& f, double x,
                                    const QuadratureConfig& config = {});

enum class OrderExtension {
    automatic,          // analytic derivatives when available, else finite differences
    analytic,           // commute d^(nk)/dx^(nk) onto f; requires analytic derivatives
    finite_difference,  // differentiate x -> D^{k; alpha-nk} f(x) numerically
};

/// Offset used when alpha is an exact multiple of k, so the residual order is k - offset.
inline constexpr double kMultipleOffset = 1e-6;

/// d^(nk)/dx^(nk) D^{k; alpha - nk} with the smallest n giving 0 < alpha - nk < k.
IntegralEstimate extended_order(int k, double alpha, const FunctionHandle& f, double x,
                                const QuadratureConfig& config = {},
                                OrderExtension strategy = OrderExtension::automatic);

struct DirectionWeights {
    int n = 1;
    std::vector<double> weights;
};

/// Direction cosines on the unit sphere of R^n from angles theta_1 .. theta_{n-1}:
/// x_1 = cos(theta_{n-1}), x_2 = sin(theta_{n-1}) cos(theta_{n-2}), ...,
/// x_n = sin(theta_{n-1}) ... sin(theta_1).
DirectionWeights hyperspherical_weights(const std::vector<double>& angles);

/// sum_k x_k D^{k; alpha} f(x), alpha in (0,1).
IntegralEstimate hyperspherical_apply(const std::vector<double>& angles, double alpha,
                                      const FunctionHandle& f, double x,
                                      const QuadratureConfig& config = {});

/// Dispatches on spec.family.
IntegralEstimate evaluate(const OperatorSpec& spec, const FunctionHandle& f, double x,
                          const QuadratureConfig& config = {});

} // namespace fracderiv
