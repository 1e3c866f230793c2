#include "fracderiv/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace fracderiv {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

} // namespace

double gamma_fn(double x) {
    using std::numbers::pi;
    if (std::isnan(x)) return x;
    if (x <= 0.0 && x == std::floor(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x < 0.5) {
        return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double sum = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        sum += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    }
    const double t = z + kLanczosG + 0.5;
    // Split the power so t^(z+0.5) does not overflow before exp(-t) brings it back.
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * pi) * half * (half * std::exp(-t)) * sum;
}

} // namespace fracderiv
