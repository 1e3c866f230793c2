#include "fracderiv/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "fracderiv/errors.hpp"
#include "fracderiv/normalization.hpp"
#include "fracderiv/special.hpp"
#include "fracderiv/stencil.hpp"

namespace fracderiv {

namespace {

using std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Term {
    double coefficient;
    int offset;
};

// psi(xi) = sum_t c_t f(x + o_t xi), with its exact asymptote and an analytic
// bound on the remainder tail built from f's ray metadata.
SingularIntegrand difference_integrand(const FunctionHandle& f, double x, std::vector<Term> terms) {
    const Complex fx = f(x);
    Complex asymptote{0.0, 0.0};
    std::vector<std::pair<Term, RayTail>> moving;
    for (const auto& t : terms) {
        if (t.coefficient == 0.0) continue;
        if (t.offset == 0) {
            asymptote += t.coefficient * fx;
            continue;
        }
        const RayTail& tail = f.tail(t.offset);
        if (!tail.bounded) {
            throw DomainError(fmt::format("{} is unbounded toward {}inf; the integral diverges",
                                          f.description(), t.offset > 0 ? "+" : "-"));
        }
        asymptote += t.coefficient * tail.limit;
        moving.emplace_back(t, tail);
    }

    SingularIntegrand ig;
    ig.asymptote = asymptote;
    const auto& eval = f.evaluator();
    // magnitude(xi) is always requested right after psi(xi); share the evaluations.
    struct Last {
        double xi = std::numeric_limits<double>::quiet_NaN();
        double magnitude = 0.0;
    };
    auto last = std::make_shared<Last>();
    auto run = [eval, terms = std::move(terms), fx, x](double xi, double& magnitude) {
        Complex acc{0.0, 0.0};
        magnitude = 0.0;
        for (const auto& t : terms) {
            if (t.coefficient == 0.0) continue;
            const Complex term = t.coefficient * (t.offset == 0 ? fx : eval(x + t.offset * xi));
            acc += term;
            magnitude += std::abs(term);
        }
        return acc;
    };
    ig.psi = [run, last](double xi) {
        double m = 0.0;
        const Complex v = run(xi, m);
        last->xi = xi;
        last->magnitude = m;
        return v;
    };
    ig.magnitude = [run, last](double xi) {
        if (xi == last->xi) return last->magnitude;
        double m = 0.0;
        run(xi, m);
        return m;
    };
    ig.tail_bound = [moving = std::move(moving), x](double xi, double alpha) {
        double bound = 0.0;
        for (const auto& [t, tail] : moving) {
            const double w = std::abs(t.coefficient);
            bound += w * tail.envelope_at(x + t.offset * xi) * std::pow(xi, -alpha) / alpha;
            if (tail.osc_amplitude > 0.0) {
                if (tail.osc_frequency > 0.0) {
                    // Integration by parts against e^{i w o xi}.
                    bound += w * tail.osc_amplitude * 2.0 * std::pow(xi, -alpha - 1.0) /
                             (tail.osc_frequency * std::abs(t.offset));
                } else {
                    bound += w * tail.osc_amplitude * std::pow(xi, -alpha) / alpha;
                }
            }
        }
        return bound;
    };
    return ig;
}

IntegralEstimate scaled_integral(double factor, const SingularIntegrand& ig, double alpha,
                                 QuadratureConfig cfg, int order, int step) {
    cfg.near_zero_order = order;
    cfg.series_step = step;
    // The multiplier is applied afterwards; the tolerance is on the final value.
    cfg.abs_tol = factor != 0.0 ? cfg.abs_tol / std::abs(factor) : cfg.abs_tol;
    IntegralEstimate r = singular_integral(ig, alpha, cfg);
    r.value *= factor;
    r.error_estimate = std::abs(factor) * r.error_estimate + 4.0 * kEps * std::abs(r.value);
    return r;
}

void accumulate(IntegralEstimate& acc, Complex weight, const IntegralEstimate& part) {
    acc.value += weight * part.value;
    acc.error_estimate += std::abs(weight) * part.error_estimate;
    acc.evaluations += part.evaluations;
    acc.converged = acc.converged && part.converged;
}

void require_open(double alpha, double lo, double hi, std::string_view what) {
    if (!(alpha > lo && alpha < hi)) {
        throw DomainError(fmt::format("{} requires alpha in ({}, {}), got {}", what, lo, hi, alpha));
    }
}

// sin and cos of theta * pi/2, exact at integer theta.
std::pair<double, double> quarter_turn(double theta) {
    if (theta == std::floor(theta) && std::abs(theta) < 1e15) {
        const long q = static_cast<long>(theta) % 4;
        switch ((q + 4) % 4) {
        case 0: return {0.0, 1.0};
        case 1: return {1.0, 0.0};
        case 2: return {0.0, -1.0};
        default: return {-1.0, 0.0};
        }
    }
    return {std::sin(0.5 * pi * theta), std::cos(0.5 * pi * theta)};
}

} // namespace

std::string_view to_string(Family f) {
    switch (f) {
    case Family::lw_plus: return "lw+";
    case Family::lw_minus: return "lw-";
    case Family::riesz: return "riesz";
    case Family::feller: return "feller";
    case Family::feller_rotation: return "feller-rot";
    case Family::central: return "central";
    case Family::hyperspherical: return "hyper";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "lw+" || name == "lw_plus") return Family::lw_plus;
    if (name == "lw-" || name == "lw_minus") return Family::lw_minus;
    if (name == "riesz") return Family::riesz;
    if (name == "feller") return Family::feller;
    if (name == "feller-rot" || name == "feller_rotation") return Family::feller_rotation;
    if (name == "central") return Family::central;
    if (name == "hyper" || name == "hyperspherical") return Family::hyperspherical;
    throw std::invalid_argument(fmt::format("unknown operator '{}'", name));
}

void validate(const OperatorSpec& spec) {
    if (!std::isfinite(spec.alpha) || !(spec.alpha > 0.0)) {
        throw DomainError(fmt::format("alpha must be positive, got {}", spec.alpha));
    }
    switch (spec.family) {
    case Family::lw_plus:
    case Family::lw_minus:
    case Family::feller_rotation:
        require_open(spec.alpha, 0.0, 1.0, to_string(spec.family));
        break;
    case Family::riesz:
        require_open(spec.alpha, 0.0, 2.0, "riesz");
        break;
    case Family::feller:
        require_open(spec.alpha, 0.0, 1.0, "feller");
        feller_coeffs(spec.theta, spec.alpha, spec.unsafe_theta);
        break;
    case Family::central:
        if (spec.k < 1 || spec.k > kDefaultMaxStencilOrder) {
            throw DomainError(fmt::format("central order k must be in [1, {}], got {}",
                                          kDefaultMaxStencilOrder, spec.k));
        }
        break;
    case Family::hyperspherical:
        require_open(spec.alpha, 0.0, 1.0, "hyper");
        if (spec.angles.size() + 1 > static_cast<std::size_t>(kDefaultMaxStencilOrder)) {
            throw DomainError("too many angles for the supported stencil orders");
        }
        break;
    }
}

FellerCoefficients feller_coeffs(double theta, double alpha, bool unsafe_theta) {
    require_open(alpha, 0.0, 2.0, "feller");
    if (alpha == 1.0) throw DomainError("feller coefficients are singular at alpha = 1");
    if (!unsafe_theta && std::abs(theta) > std::min(alpha, 2.0 - alpha)) {
        throw DomainError(fmt::format(
            "theta = {} violates |theta| <= min(alpha, 2 - alpha) = {}", theta,
            std::min(alpha, 2.0 - alpha)));
    }
    const double s = std::sin(pi * alpha);
    FellerCoefficients c;
    c.c_plus = std::sin(0.5 * pi * (alpha - theta)) / s;
    c.c_minus = std::sin(0.5 * pi * (alpha + theta)) / s;
    c.a1 = -0.5 * (c.c_plus - c.c_minus);
    c.a2 = -0.5 * (c.c_plus + c.c_minus);
    return c;
}

IntegralEstimate lw_plus(const FunctionHandle& f, double x, double alpha, const QuadratureConfig& config) {
    require_open(alpha, 0.0, 1.0, "lw+");
    const auto ig = difference_integrand(f, x, {{1.0, 0}, {-1.0, -1}});
    return scaled_integral(alpha / gamma_fn(1.0 - alpha), ig, alpha, config, 1, 1);
}

IntegralEstimate lw_minus(const FunctionHandle& f, double x, double alpha, const QuadratureConfig& config) {
    require_open(alpha, 0.0, 1.0, "lw-");
    const auto ig = difference_integrand(f, x, {{1.0, 0}, {-1.0, 1}});
    return scaled_integral(alpha / gamma_fn(1.0 - alpha), ig, alpha, config, 1, 1);
}

IntegralEstimate riesz(const FunctionHandle& f, double x, double alpha, const QuadratureConfig& config) {
    require_open(alpha, 0.0, 2.0, "riesz");
    const auto ig = difference_integrand(f, x, {{1.0, 1}, {-2.0, 0}, {1.0, -1}});
    const double factor = gamma_fn(1.0 + alpha) * std::sin(0.5 * pi * alpha) / pi;
    return scaled_integral(factor, ig, alpha, config, 2, 2);
}

IntegralEstimate d1(const FunctionHandle& f, double x, double alpha, const QuadratureConfig& config) {
    require_open(alpha, 0.0, 1.0, "d1");
    const auto ig = difference_integrand(f, x, {{1.0, 1}, {-1.0, -1}});
    const double factor = gamma_fn(1.0 + alpha) * std::cos(0.5 * pi * alpha) / pi;
    return scaled_integral(factor, ig, alpha, config, 1, 2);
}

IntegralEstimate feller(const FunctionHandle& f, double x, double alpha, double theta,
                        const QuadratureConfig& config, bool unsafe_theta) {
    require_open(alpha, 0.0, 1.0, "feller");
    const auto c = feller_coeffs(theta, alpha, unsafe_theta);
    IntegralEstimate out;
    if (c.c_plus != 0.0) accumulate(out, -c.c_plus, lw_plus(f, x, alpha, config));
    if (c.c_minus != 0.0) accumulate(out, -c.c_minus, lw_minus(f, x, alpha, config));
    return out;
}

IntegralEstimate feller_rotation(const FunctionHandle& f, double x, double alpha, double theta,
                                 const QuadratureConfig& config) {
    require_open(alpha, 0.0, 1.0, "feller-rot");
    const auto [s, c] = quarter_turn(theta);
    IntegralEstimate out;
    if (s != 0.0) accumulate(out, s, d1(f, x, alpha, config));
    if (c != 0.0) accumulate(out, c, riesz(f, x, alpha, config));
    return out;
}

IntegralEstimate central_fractional(int k, double alpha, const FunctionHandle& f, double x,
                                    const QuadratureConfig& config) {
    if (k < 1 || k > kDefaultMaxStencilOrder) {
        throw DomainError(fmt::format("central order k must be in [1, {}], got {}",
                                      kDefaultMaxStencilOrder, k));
    }
    if (alpha >= k) return extended_order(k, alpha, f, x, config);
    require_open(alpha, 0.0, k, "central");
    const auto& s = cached_stencil(k);
    std::vector<Term> terms;
    for (std::size_t n = 0; n < s.size(); ++n) {
        terms.push_back({s.coefficients_double()[n], s.offsets()[n]});
    }
    const auto ig = difference_integrand(f, x, std::move(terms));
    return scaled_integral(prefactor(k, alpha).prefactor, ig, alpha, config, k, 2);
}

IntegralEstimate extended_order(int k, double alpha, const FunctionHandle& f, double x,
                                const QuadratureConfig& config, OrderExtension strategy) {
    if (k < 1 || k > kDefaultMaxStencilOrder) {
        throw DomainError(fmt::format("central order k must be in [1, {}], got {}",
                                      kDefaultMaxStencilOrder, k));
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
    }
    if (alpha < k) return central_fractional(k, alpha, f, x, config);

    const double ratio = alpha / k;
    int n = static_cast<int>(std::floor(ratio));
    double residual = alpha - n * k;
    if (residual <= 0.0) {
        // Exact multiple: approach the order-k limit from below.
        n -= 1;
        residual = k - kMultipleOffset;
    }
    const int m = n * k;

    const bool analytic = strategy == OrderExtension::analytic ||
                          (strategy == OrderExtension::automatic && f.has_derivatives());
    if (analytic) {
        const auto fm = f.derivative(m);
        if (!fm) {
            throw DomainError(fmt::format("{} has no analytic derivative of order {}",
                                          f.description(), m));
        }
        return central_fractional(k, residual, *fm, x, config);
    }

    // Outer central difference of order m with Richardson extrapolation in h^2.
    if (m > kDefaultMaxStencilOrder) {
        throw DomainError(fmt::format("finite-difference order {} exceeds the supported maximum", m));
    }
    QuadratureConfig inner = config;
    inner.rel_tol = std::min(config.rel_tol, 1e-12);
    inner.abs_tol = std::min(config.abs_tol, 1e-14);
    const auto& s = cached_stencil(m);
    IntegralEstimate out;
    double noise = 0.0;
    auto g = [&](double y) {
        const auto r = central_fractional(k, residual, f, y, inner);
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
        noise = std::max(noise, r.error_estimate);
        return r.value;
    };
    constexpr int levels = 4;
    const double h0 = 0.4;
    double abs_coeffs = 0.0;
    for (double a : s.coefficients_double()) abs_coeffs += std::abs(a);
    std::vector<std::vector<Complex>> table(levels);
    for (int i = 0; i < levels; ++i) {
        const double h = h0 * std::exp2(-i);
        table[i].push_back(apply_stencil(s, g, x, h) / std::pow(h, m));
        for (int j = 1; j <= i; ++j) {
            const double fac = std::pow(4.0, j) - 1.0;
            table[i].push_back(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / fac);
        }
    }
    out.value = table[levels - 1][levels - 1];
    const double h_min = h0 * std::exp2(-(levels - 1));
    out.error_estimate = std::abs(table[levels - 1][levels - 1] - table[levels - 2][levels - 2]) +
                         4.0 * abs_coeffs * noise / std::pow(h_min, m);
    return out;
}

DirectionWeights hyperspherical_weights(const std::vector<double>& angles) {
    const int n = static_cast<int>(angles.size()) + 1;
    DirectionWeights w;
    w.n = n;
    w.weights.assign(static_cast<std::size_t>(n), 0.0);
    // angles[l - 1] is theta_l. Walk x_1 .. x_{n-1}, accumulating the sine product.
    double sin_product = 1.0;
    for (int i = 1; i < n; ++i) {
        const double theta = angles[static_cast<std::size_t>(n - i - 1)];  // theta_{n-i}
        w.weights[static_cast<std::size_t>(i - 1)] = sin_product * std::cos(theta);
        sin_product *= std::sin(theta);
    }
    w.weights[static_cast<std::size_t>(n - 1)] = sin_product;
    return w;
}

IntegralEstimate hyperspherical_apply(const std::vector<double>& angles, double alpha,
                                      const FunctionHandle& f, double x,
                                      const QuadratureConfig& config) {
    require_open(alpha, 0.0, 1.0, "hyper");
    const auto w = hyperspherical_weights(angles);
    if (w.n > kDefaultMaxStencilOrder) throw DomainError("too many angles for the supported stencil orders");
    IntegralEstimate out;
    for (int k = 1; k <= w.n; ++k) {
        const double weight = w.weights[static_cast<std::size_t>(k - 1)];
        if (weight == 0.0) continue;
        accumulate(out, weight, central_fractional(k, alpha, f, x, config));
    }
    return out;
}

IntegralEstimate evaluate(const OperatorSpec& spec, const FunctionHandle& f, double x,
                          const QuadratureConfig& config) {
    validate(spec);
    switch (spec.family) {
    case Family::lw_plus: return lw_plus(f, x, spec.alpha, config);
    case Family::lw_minus: return lw_minus(f, x, spec.alpha, config);
    case Family::riesz: return riesz(f, x, spec.alpha, config);
    case Family::feller: return feller(f, x, spec.alpha, spec.theta, config, spec.unsafe_theta);
    case Family::feller_rotation: return feller_rotation(f, x, spec.alpha, spec.theta, config);
    case Family::central: return central_fractional(spec.k, spec.alpha, f, x, config);
    case Family::hyperspherical: return hyperspherical_apply(spec.angles, spec.alpha, f, x, config);
    }
    throw std::invalid_argument("unknown operator family");
}

} // namespace fracderiv
