#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "fracderiv/stencil.hpp"

using namespace fracderiv;

namespace {

// Difference operators as {shift in half steps -> coefficient}, composed by
// convolution. Independent of the binomial formula in build_stencil.
using ShiftOp = std::map<int, Rational>;

ShiftOp compose(const ShiftOp& a, const ShiftOp& b) {
    ShiftOp out;
    for (const auto& [sa, ca] : a) {
        for (const auto& [sb, cb] : b) out[sa + sb] += ca * cb;
    }
    return out;
}

ShiftOp composed_central(int k) {
    const ShiftOp half{{1, Rational(1)}, {-1, Rational(-1)}};
    const ShiftOp full{{2, Rational(1, 2)}, {-2, Rational(-1, 2)}};
    ShiftOp op{{0, Rational(1)}};
    const int halves = (k % 2 == 0) ? k : k - 1;
    for (int i = 0; i < halves; ++i) op = compose(op, half);
    if (k % 2 == 1) op = compose(op, full);
    return op;
}

std::vector<Rational> rationals(std::initializer_list<std::pair<int, int>> xs) {
    std::vector<Rational> out;
    for (auto [n, d] : xs) out.emplace_back(n, d);
    return out;
}

long factorial(int n) {
    long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

TEST_CASE("explicit low-order stencils") {
    auto s1 = build_stencil(1);
    CHECK(s1.offsets() == std::vector<int>{1, 0, -1});
    CHECK(s1.coefficients() == rationals({{1, 2}, {0, 1}, {-1, 2}}));

    auto s2 = build_stencil(2);
    CHECK(s2.offsets() == std::vector<int>{1, 0, -1});
    CHECK(s2.coefficients() == rationals({{1, 1}, {-2, 1}, {1, 1}}));

    auto s3 = build_stencil(3);
    CHECK(s3.offsets() == std::vector<int>{2, 1, 0, -1, -2});
    CHECK(s3.coefficients() == rationals({{1, 2}, {-1, 1}, {0, 1}, {1, 1}, {-1, 2}}));

    auto s4 = build_stencil(4);
    CHECK(s4.offsets() == std::vector<int>{2, 1, 0, -1, -2});
    CHECK(s4.coefficients() == rationals({{1, 1}, {-4, 1}, {6, 1}, {-4, 1}, {1, 1}}));
}

TEST_CASE("binomial formula matches composed half- and full-step differences") {
    for (int k = 1; k <= 12; ++k) {
        CAPTURE(k);
        const auto s = build_stencil(k);
        const auto op = composed_central(k);
        ShiftOp from_stencil;
        for (std::size_t n = 0; n < s.size(); ++n) {
            if (s.coefficients()[n] != 0) from_stencil[2 * s.offsets()[n]] = s.coefficients()[n];
        }
        ShiftOp nonzero;
        for (const auto& [shift, c] : op) {
            if (c != 0) nonzero[shift] = c;
        }
        CHECK(from_stencil == nonzero);
    }
}

TEST_CASE("stencil invariants") {
    for (int k = 1; k <= 16; ++k) {
        CAPTURE(k);
        const auto s = build_stencil(k);
        const int r = (k + 1) / 2;
        REQUIRE(s.size() == static_cast<std::size_t>(2 * r + 1));
        const auto& a = s.coefficients();
        const int sym = (k % 2 == 0) ? 1 : -1;
        for (std::size_t n = 0; n < a.size(); ++n) {
            CHECK(a[n] == sym * a[a.size() - 1 - n]);
        }
    }
}

TEST_CASE("moment ladder is exact") {
    CHECK(stencil_moment(build_stencil(4), 2) == 0);
    CHECK(stencil_moment(build_stencil(4), 4) == 24);
    CHECK(stencil_moment(build_stencil(1), 1) == 1);
    for (int k = 1; k <= 8; ++k) {
        const auto s = build_stencil(k);
        for (int j = 0; j < k; ++j) CHECK(stencil_moment(s, j) == 0);
        CHECK(stencil_moment(s, k) == factorial(k));
    }
}

TEST_CASE("order validation") {
    CHECK_THROWS_AS(build_stencil(0), std::invalid_argument);
    CHECK_THROWS_AS(build_stencil(-3), std::invalid_argument);
    CHECK_THROWS_AS(build_stencil(17), std::invalid_argument);
    CHECK_NOTHROW(build_stencil(20, 24));
    CHECK_THROWS_AS(cached_stencil(0), std::invalid_argument);
}

TEST_CASE("apply_stencil examples") {
    const double h = 0.37;
    auto one = [](double) { return Complex{1.0, 0.0}; };
    CHECK(std::abs(apply_stencil(build_stencil(2), one, 1.7, h)) == doctest::Approx(0.0));

    auto lin = [](double x) { return Complex{x, 0.0}; };
    CHECK(apply_stencil(build_stencil(1), lin, 0.0, h).real() == doctest::Approx(h).epsilon(1e-15));

    auto cube = [](double x) { return Complex{x * x * x, 0.0}; };
    CHECK(apply_stencil(build_stencil(3), cube, 0.0, h).real() ==
          doctest::Approx(6.0 * h * h * h).epsilon(1e-14));
}

TEST_CASE("evaluation failures propagate") {
    auto bad = [](double x) -> Complex {
        if (x < 0.0) throw std::domain_error("negative argument");
        return {x, 0.0};
    };
    CHECK_THROWS_AS(apply_stencil(build_stencil(2), bad, 0.0, 1.0), std::domain_error);
}

TEST_CASE("scaled stencil converges to the k-th derivative") {
    // All derivatives of exp are exp.
    auto f = [](double x) { return Complex{std::exp(x), 0.0}; };
    const double x = 0.3;
    for (int k = 1; k <= 6; ++k) {
        CAPTURE(k);
        const auto s = build_stencil(k);
        double prev = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double h = 0.2 * std::exp2(-i);
            const double err = std::abs(apply_stencil(s, f, x, h).real() / std::pow(h, k) - std::exp(x));
            if (i > 0) CHECK(std::log2(prev / err) > 1.8);  // second order for every k
            prev = err;
        }
    }
}

TEST_CASE("parity annihilation") {
    auto even = [](double x) { return Complex{std::cos(x - 0.4), 0.0}; };
    auto odd = [](double x) { return Complex{std::sin(x - 0.4), 0.0}; };
    for (int k = 1; k <= 8; ++k) {
        const auto s = build_stencil(k);
        const auto& target = (k % 2 == 1) ? even : odd;
        CHECK(std::abs(apply_stencil(s, target, 0.4, 0.3)) < 1e-13);
    }
}
