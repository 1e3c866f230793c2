#include "fracderiv/normalization.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "fracderiv/errors.hpp"
#include "fracderiv/special.hpp"
#include "fracderiv/stencil.hpp"

namespace fracderiv {

namespace {

using std::numbers::pi;

void check_domain(int k, double alpha) {
    if (k < 1) throw DomainError(fmt::format("order k must be >= 1, got {}", k));
    if (!(alpha > 0.0 && alpha < static_cast<double>(k))) {
        throw DomainError(fmt::format("alpha must lie in (0, {}), got {}", k, alpha));
    }
}

// d^m/dalpha^m of sum_{o>0} a_o o^alpha, for m = 0, 1, 2.
double stencil_sum_derivative(int k, double alpha, int m) {
    const auto& s = cached_stencil(k);
    const auto& a = s.coefficients_double();
    const auto& o = s.offsets();
    double acc = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (o[n] <= 0) continue;
        const double base = static_cast<double>(o[n]);
        acc += a[n] * std::pow(base, alpha) * std::pow(std::log(base), m);
    }
    return acc;
}

// d^m/dalpha^m of trig_factor(k, alpha).
double trig_derivative(int k, double alpha, int m) {
    const double h = 0.5 * pi;
    // sin(h a) shifted by a quarter period per derivative; cos is sin shifted once more.
    const int shift = m + (k % 2 == 1 ? 1 : 0);
    return std::pow(h, m) * std::sin(h * alpha + shift * h);
}

bool trig_vanishes_at(int k, int m) {
    // sin(m pi/2) = 0 for even m; cos(m pi/2) = 0 for odd m.
    return (k % 2 == 0) ? (m % 2 == 0) : (m % 2 != 0);
}

} // namespace

double trig_factor(int k, double alpha) {
    return (k % 2 == 0) ? std::sin(0.5 * pi * alpha) : std::cos(0.5 * pi * alpha);
}

double stencil_sum(int k, double alpha) {
    check_domain(k, alpha);
    return stencil_sum_derivative(k, alpha, 0);
}

int calibrate_sign(int k) {
    if (k < 1) throw DomainError(fmt::format("order k must be >= 1, got {}", k));
    static const std::array<int, kDefaultMaxStencilOrder + 1> table = [] {
        std::array<int, kDefaultMaxStencilOrder + 1> t{};
        for (int kk = 1; kk <= kDefaultMaxStencilOrder; ++kk) {
            // Just below alpha = k the trig factor has the sign of -T'(k).
            const int trig_sign_below = (kk % 2 == 0) ? -((kk / 2) % 2 == 0 ? 1 : -1)
                                                      : (((kk - 1) / 2) % 2 == 0 ? 1 : -1);
            const auto& s = cached_stencil(kk);
            Rational sum_at_k = 0;
            for (std::size_t n = 0; n < s.size(); ++n) {
                const int o = s.offsets()[n];
                if (o <= 0) continue;
                boost::multiprecision::cpp_int p = 1;
                for (int i = 0; i < kk; ++i) p *= o;
                sum_at_k += s.coefficients()[n] * Rational(p);
            }
            const int sum_sign = sum_at_k > 0 ? 1 : -1;
            t[static_cast<std::size_t>(kk)] = trig_sign_below * sum_sign;
        }
        return t;
    }();
    if (k > kDefaultMaxStencilOrder) {
        throw DomainError(fmt::format("order {} exceeds the supported maximum {}", k,
                                      kDefaultMaxStencilOrder));
    }
    return table[static_cast<std::size_t>(k)];
}

NormalizationResult prefactor(int k, double alpha) {
    check_domain(k, alpha);
    NormalizationResult r;
    r.k = k;
    r.alpha = alpha;
    r.sign = calibrate_sign(k);
    r.trig_term = trig_factor(k, alpha);
    r.sum_term = stencil_sum_derivative(k, alpha, 0);

    const double gamma_part = gamma_fn(1.0 + alpha) / pi;
    const double nearest = std::round(alpha);
    const int m = static_cast<int>(nearest);
    const double d = alpha - nearest;
    if (m > 0 && m < k && std::abs(d) < kRemovableWindow && trig_vanishes_at(k, m)) {
        // Both factors vanish at m: second-order Taylor ratio around m.
        const double num = trig_derivative(k, nearest, 1) + 0.5 * d * trig_derivative(k, nearest, 2);
        const double den =
            stencil_sum_derivative(k, nearest, 1) + 0.5 * d * stencil_sum_derivative(k, nearest, 2);
        r.at_removable_point = true;
        r.prefactor = r.sign * gamma_part * num / den;
        return r;
    }

    double scale = 0.0;
    const auto& s = cached_stencil(k);
    for (std::size_t n = 0; n < s.size(); ++n) {
        if (s.offsets()[n] > 0) {
            scale += std::abs(s.coefficients_double()[n]) * std::pow(s.offsets()[n], alpha);
        }
    }
    if (std::abs(r.sum_term) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
        throw NumericalError(fmt::format(
            "stencil sum vanishes at k={}, alpha={} while the trig factor is {}", k, alpha,
            r.trig_term));
    }
    r.prefactor = r.sign * gamma_part * r.trig_term / r.sum_term;
    return r;
}

} // namespace fracderiv
