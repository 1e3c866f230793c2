#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fracderiv/function.hpp"

using namespace fracderiv;

namespace {

// Central difference of the handle itself, for checking analytic derivatives.
Complex numeric_derivative(const FunctionHandle& f, double x, double h = 1e-4) {
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

} // namespace

TEST_CASE("hermite polynomials") {
    CHECK(catalog::hermite(0, 0.3) == 1.0);
    CHECK(catalog::hermite(1, 0.3) == doctest::Approx(0.6));
    CHECK(catalog::hermite(2, 0.3) == doctest::Approx(4 * 0.09 - 2));
    CHECK(catalog::hermite(3, 0.3) == doctest::Approx(8 * 0.027 - 12 * 0.3));
    CHECK_THROWS_AS(catalog::hermite(-1, 0.0), std::invalid_argument);
}

TEST_CASE("analytic derivatives agree with finite differences") {
    const FunctionHandle fs[] = {
        catalog::gaussian(),          catalog::gaussian(0.7, 0.4), catalog::lorentzian(),
        catalog::lorentzian(1.5, -1), catalog::plane_wave(2.0),   catalog::cosine(1.3),
        catalog::sine(0.8),           catalog::exp_growth(0.5),   catalog::exp_decay(1.5),
    };
    for (const auto& f : fs) {
        CAPTURE(f.description());
        REQUIRE(f.has_derivatives());
        for (int j = 0; j < 4; ++j) {
            const auto fj = f.derivative(j);
            const auto fj1 = f.derivative(j + 1);
            REQUIRE(fj);
            REQUIRE(fj1);
            for (double x : {-1.1, 0.0, 0.45, 2.0}) {
                CAPTURE(j);
                CAPTURE(x);
                const Complex expected = numeric_derivative(*fj, x);
                CHECK(std::abs((*fj1)(x) - expected) <= 1e-7 * (1.0 + std::abs(expected)));
            }
        }
    }
}

TEST_CASE("gaussian fourth derivative at 0") {
    const auto d4 = catalog::gaussian().derivative(4);
    REQUIRE(d4);
    CHECK((*d4)(0.0).real() == doctest::Approx(12.0));
}

TEST_CASE("tails") {
    const auto g = catalog::exp_growth(1.0);
    CHECK(g.tail(-1).bounded);
    CHECK_FALSE(g.tail(+1).bounded);
    const auto d = catalog::exp_decay(1.0);
    CHECK(d.tail(+1).bounded);
    CHECK_FALSE(d.tail(-1).bounded);

    const auto c = catalog::constant(2.5);
    CHECK(c.tail(1).limit == Complex(2.5));
    CHECK(c.tail(-1).envelope_at(-100.0) == 0.0);

    // Envelopes bound |f - limit| beyond the given point.
    const FunctionHandle fs[] = {catalog::gaussian(), catalog::lorentzian(0.5, 1.0),
                                 *catalog::gaussian().derivative(3),
                                 *catalog::lorentzian().derivative(2)};
    for (const auto& f : fs) {
        CAPTURE(f.description());
        for (int dir : {-1, 1}) {
            for (double y0 : {3.0, 10.0, 40.0}) {
                const double start = dir * y0;
                const double env = f.tail(dir).envelope_at(start);
                for (double y = y0; y < 4 * y0; y += 0.25) {
                    CHECK(std::abs(f(dir * y) - f.tail(dir).limit) <= env * (1 + 1e-12));
                }
            }
        }
    }
    const auto w = catalog::plane_wave(3.0);
    CHECK(w.tail(1).osc_amplitude == 1.0);
    CHECK(w.tail(-1).osc_frequency == 3.0);
}

TEST_CASE("transforms") {
    const auto g = catalog::gaussian();
    const auto s = shifted(g, 0.5);
    CHECK(s(0.5) == Complex(1.0));
    CHECK(std::abs((*s.derivative(1))(1.0) - (*g.derivative(1))(0.5)) < 1e-15);

    const auto c = scaled(g, 2.0);
    CHECK(std::abs(c(0.5) - g(1.0)) < 1e-15);
    CHECK(std::abs((*c.derivative(2))(0.3) - 4.0 * (*g.derivative(2))(0.6)) < 1e-14);
    CHECK_THROWS_AS(scaled(g, 0.0), std::invalid_argument);

    const auto lc = linear_combination({{2.0, g}, {Complex(0, 1), catalog::cosine()}});
    CHECK(std::abs(lc(0.4) - (2.0 * g(0.4) + Complex(0, 1) * std::cos(0.4))) < 1e-15);
    CHECK(std::abs((*lc.derivative(1))(0.4) -
                   (2.0 * (*g.derivative(1))(0.4) - Complex(0, 1) * std::sin(0.4))) < 1e-14);
}

TEST_CASE("catalog parsing") {
    CHECK(catalog::parse("gaussian")(0.0) == Complex(1.0));
    CHECK(std::abs(catalog::parse("gaussian:sigma=2,center=1")(3.0) - std::exp(-1.0)) < 1e-15);
    CHECK(std::abs(catalog::parse("plane_wave:omega=2")(0.25) - std::polar(1.0, 0.5)) < 1e-15);
    CHECK(catalog::parse("exp_growth:lambda=2").decay_class() == DecayClass::left_decaying);
    CHECK_THROWS_AS(catalog::parse("nope"), std::invalid_argument);
    CHECK_THROWS_AS(catalog::parse("gaussian:width=2"), std::invalid_argument);
    CHECK_THROWS_AS(catalog::parse("gaussian:sigma=abc"), std::invalid_argument);
    CHECK_THROWS_AS(catalog::parse("gaussian:sigma=-1"), std::invalid_argument);
    CHECK(catalog::names().size() == 8);
}
