#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fracderiv {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

/// Largest stencil order accepted by default. Beyond this the float
/// application suffers from cancellation between large binomials.
inline constexpr int kDefaultMaxStencilOrder = 16;

/**
 * @brief Symmetric central-difference operator of order k.
 *
 * Entry n acts on f(x + offset[n] * step), with offset[n] = r - n and
 * r = floor((k+1)/2). Even k is the k-th power of the half-step difference;
 * odd k is one full-step difference times the (k-1)-th power of the
 * half-step difference, so its coefficients are antisymmetric.
 *
 * Coefficients are exact. They satisfy sum_n a_n o_n^j = 0 for j < k and
 * k! for j = k.
 */
class CentralStencil {
public:
    int order() const noexcept { return k_; }
    int radius() const noexcept { return (k_ + 1) / 2; }
    std::size_t size() const noexcept { return coefficients_.size(); }

    const std::vector<int>& offsets() const noexcept { return offsets_; }
    const std::vector<Rational>& coefficients() const noexcept { return coefficients_; }
    const std::vector<double>& coefficients_double() const noexcept { return coefficients_f_; }

    /// Coefficient attached to offset 0 (the term that does not move with the step).
    double center_coefficient() const noexcept { return coefficients_f_[static_cast<std::size_t>(radius())]; }

private:
    friend CentralStencil build_stencil(int k, int max_order);

    int k_ = 0;
    std::vector<int> offsets_;
    std::vector<Rational> coefficients_;
    std::vector<double> coefficients_f_;
};

/// Throws std::invalid_argument for k < 1 or k > max_order.
CentralStencil build_stencil(int k, int max_order = kDefaultMaxStencilOrder);

/// Shared immutable stencil for 1 <= k <= kDefaultMaxStencilOrder, built once.
const CentralStencil& cached_stencil(int k);

/// sum_n a_n f(x + o_n * step). Exceptions thrown by f propagate.
Complex apply_stencil(const CentralStencil& s, const std::function<Complex(double)>& f,
                      double x, double step);

/// sum_n a_n o_n^j, exactly.
Rational stencil_moment(const CentralStencil& s, int j);

/// Binomial coefficient with C(n, m) = 0 for m < 0 or m > n.
Rational binomial(int n, int m);

} // namespace fracderiv
