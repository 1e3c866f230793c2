#include "fracderiv/stencil.hpp"

#include <stdexcept>
#include <string>

namespace fracderiv {

Rational binomial(int n, int m) {
    if (m < 0 || n < 0 || m > n) return Rational(0);
    boost::multiprecision::cpp_int c = 1;
    for (int i = 1; i <= m; ++i) {
        c *= n - m + i;
        c /= i;
    }
    return Rational(c);
}

CentralStencil build_stencil(int k, int max_order) {
    if (k < 1) {
        throw std::invalid_argument("stencil order must be >= 1, got " + std::to_string(k));
    }
    if (k > max_order) {
        throw std::invalid_argument("stencil order " + std::to_string(k) +
                                    " exceeds the configured maximum " + std::to_string(max_order));
    }

    CentralStencil s;
    s.k_ = k;
    const int r = (k + 1) / 2;
    const bool even = (k % 2 == 0);
    for (int n = 0; n <= 2 * r; ++n) {
        Rational a = even ? binomial(k, n)
                          : Rational(binomial(k - 1, n) - binomial(k - 1, n - 2)) / 2;
        if (n % 2 == 1) a = -a;
        s.offsets_.push_back(r - n);
        s.coefficients_f_.push_back(static_cast<double>(a));
        s.coefficients_.push_back(std::move(a));
    }
    return s;
}

const CentralStencil& cached_stencil(int k) {
    static const std::vector<CentralStencil> table = [] {
        std::vector<CentralStencil> t;
        for (int i = 1; i <= kDefaultMaxStencilOrder; ++i) t.push_back(build_stencil(i));
        return t;
    }();
    if (k < 1 || k > kDefaultMaxStencilOrder) {
        throw std::invalid_argument("no cached stencil of order " + std::to_string(k));
    }
    return table[static_cast<std::size_t>(k - 1)];
}

Complex apply_stencil(const CentralStencil& s, const std::function<Complex(double)>& f,
                      double x, double step) {
    const auto& a = s.coefficients_double();
    const auto& o = s.offsets();
    Complex acc{0.0, 0.0};
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (a[n] == 0.0) continue;
        acc += a[n] * f(x + o[n] * step);
    }
    return acc;
}

Rational stencil_moment(const CentralStencil& s, int j) {
    if (j < 0) throw std::invalid_argument("moment index must be non-negative");
    Rational acc = 0;
    const auto& a = s.coefficients();
    const auto& o = s.offsets();
    for (std::size_t n = 0; n < a.size(); ++n) {
        // 0^0 = 1 so the zeroth moment is the coefficient sum.
        boost::multiprecision::cpp_int p = 1;
        for (int i = 0; i < j; ++i) p *= o[n];
        acc += a[n] * Rational(p);
    }
    return acc;
}

} // namespace fracderiv
