// Independent reference values. Nothing here calls into the quadrature engine
// except limit_check and measure_symmetry, which exist to test it.
#include "fracderiv/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "fracderiv/errors.hpp"
#include "fracderiv/normalization.hpp"
#include "fracderiv/stencil.hpp"

namespace fracderiv::oracle {

namespace {

using std::numbers::pi;

double param(const std::map<std::string, double>& p, const std::string& key) {
    const auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument(fmt::format("missing parameter '{}'", key));
    return it->second;
}

double param_or(const std::map<std::string, double>& p, const std::string& key, double def) {
    const auto it = p.find(key);
    return it == p.end() ? def : it->second;
}

// m e^{i w x}, or its real/imaginary part for cos/sin inputs (all operators are real).
Complex apply_symbol(Complex m, double omega, double x, double part) {
    const Complex v = m * std::polar(1.0, omega * x);
    if (part == 0.0) return v;
    if (part == 1.0) return v.real();
    if (part == 2.0) return v.imag();
    throw std::invalid_argument("part must be 0, 1 or 2");
}

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

// Physicists' Hermite polynomial by the three-term recurrence.
double hermite(int n, double u) {
    double h0 = 1.0, h1 = 2.0 * u;
    if (n == 0) return h0;
    for (int m = 1; m < n; ++m) {
        const double h2 = 2.0 * u * h1 - 2.0 * m * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

struct Term {
    double c;
    int offset;
};

} // namespace

void VerificationReport::check(std::string description, Complex expected, Complex actual,
                               double tolerance) {
    const bool pass = std::abs(actual - expected) <= tolerance;
    record(std::move(description), expected, actual, tolerance, pass);
}

void VerificationReport::record(std::string description, Complex expected, Complex actual,
                                double tolerance, bool pass) {
    cases.push_back({std::move(description), expected, actual, tolerance, pass, false});
    overall_pass = overall_pass && pass;
}

void VerificationReport::inform(std::string description, Complex expected, Complex actual) {
    cases.push_back({std::move(description), expected, actual, 0.0, true, true});
}

void VerificationReport::merge(const VerificationReport& other) {
    cases.insert(cases.end(), other.cases.begin(), other.cases.end());
    overall_pass = overall_pass && other.overall_pass;
    for (const auto& [k, v] : other.metrics) metrics[k] = v;
}

Complex brute_force_integral(const std::function<Complex(double)>& psi, double alpha, double lo,
                             double hi, long points, const BruteForceEnds& ends) {
    const double u0 = std::log(lo);
    const double u1 = std::log(hi);
    const double h = (u1 - u0) / static_cast<double>(points - 1);
    Complex sum{0.0, 0.0};
    for (long i = 0; i < points; ++i) {
        const double u = u0 + h * static_cast<double>(i);
        const Complex v = psi(std::exp(u)) * std::exp(-alpha * u);
        sum += (i == 0 || i == points - 1) ? 0.5 * v : v;
    }
    sum *= h;
    if (ends.near_zero_order > 0) {
        sum += psi(lo) * std::pow(lo, -alpha) / (ends.near_zero_order - alpha);
    }
    sum += ends.asymptote * std::pow(hi, -alpha) / alpha;
    return sum;
}

Complex brute_force_operator(const OperatorSpec& spec, const FunctionHandle& f, double x) {
    const double a = spec.alpha;
    std::vector<Term> terms;
    double factor = 0.0;
    int order = 1;
    switch (spec.family) {
    case Family::lw_plus:
        terms = {{1.0, 0}, {-1.0, -1}};
        factor = a / std::tgamma(1.0 - a);
        break;
    case Family::lw_minus:
        terms = {{1.0, 0}, {-1.0, 1}};
        factor = a / std::tgamma(1.0 - a);
        break;
    case Family::riesz:
        terms = {{1.0, 1}, {-2.0, 0}, {1.0, -1}};
        factor = std::tgamma(1.0 + a) * std::sin(0.5 * pi * a) / pi;
        order = 2;
        break;
    case Family::central: {
        if (!(a < spec.k)) throw DomainError("brute force needs alpha < k");
        const auto s = build_stencil(spec.k);
        for (std::size_t n = 0; n < s.size(); ++n) {
            terms.push_back({s.coefficients_double()[n], s.offsets()[n]});
        }
        factor = prefactor(spec.k, a).prefactor;
        order = spec.k;
        break;
    }
    default:
        throw std::invalid_argument("brute force supports lw+, lw-, riesz and central");
    }

    const Complex fx = f(x);
    BruteForceEnds ends;
    ends.near_zero_order = order;
    for (const auto& t : terms) {
        if (t.offset == 0) {
            ends.asymptote += t.c * fx;
        } else {
            const auto& tail = f.tail(t.offset);
            if (!tail.bounded) throw DomainError("brute force: unbounded ray");
            ends.asymptote += t.c * tail.limit;
        }
    }
    auto psi = [&](double xi) {
        Complex acc{0.0, 0.0};
        for (const auto& t : terms) acc += t.c * (t.offset == 0 ? fx : f(x + t.offset * xi));
        return acc;
    };
    const bool oscillatory = f.decay_class() == DecayClass::bounded_oscillatory;
    const double lo = order <= 2 ? 1e-6 : 1e-3;
    const double hi = oscillatory ? 1e5 : 1e3;
    const long points = oscillatory ? 10'000'000 : 1'000'000;
    return factor * brute_force_integral(psi, a, lo, hi, points, ends);
}

Complex closed_form_reference(std::string_view case_id, const std::map<std::string, double>& p) {
    if (case_id == "lw_plus_exp") {
        // D+ e^{lambda x}: substitute u = lambda xi in the defining integral,
        // int (1 - e^-u) u^(-alpha-1) du = Gamma(1-alpha)/alpha.
        const double lambda = param(p, "lambda");
        return std::pow(lambda, param(p, "alpha")) * std::exp(lambda * param(p, "x"));
    }
    if (case_id == "d1_plane_wave") {
        const double w = param(p, "omega");
        const Complex m{0.0, sign(w) * std::pow(std::abs(w), param(p, "alpha"))};
        return apply_symbol(m, w, param(p, "x"), param_or(p, "part", 0));
    }
    if (case_id == "riesz_plane_wave") {
        const double w = param(p, "omega");
        const Complex m = -std::pow(std::abs(w), param(p, "alpha"));
        return apply_symbol(m, w, param(p, "x"), param_or(p, "part", 0));
    }
    if (case_id == "feller_plane_wave") {
        const double w = param(p, "omega");
        const double theta = param(p, "theta");
        const Complex m =
            -std::pow(std::abs(w), param(p, "alpha")) * std::polar(1.0, -sign(w) * theta * pi / 2);
        return apply_symbol(m, w, param(p, "x"), param_or(p, "part", 0));
    }
    if (case_id == "central_plane_wave") {
        const int k = static_cast<int>(param(p, "k"));
        if (k != 1 && k != 2) throw std::invalid_argument("central_plane_wave is derived for k = 1, 2 only");
        const double w = param(p, "omega");
        const double alpha = param(p, "alpha");
        // Below k: (i sign w)^k |w|^alpha. Above: (i w)^(n k) times that at the residual order.
        int n = static_cast<int>(std::floor(alpha / k));
        double r = alpha - n * k;
        if (r == 0.0 && n > 0) {
            n -= 1;
            r = k - kMultipleOffset;
        }
        const Complex is{0.0, sign(w)};
        const Complex m = std::pow(Complex(0.0, w), n * k) * std::pow(is, k) * std::pow(std::abs(w), r);
        return apply_symbol(m, w, param(p, "x"), param_or(p, "part", 0));
    }
    if (case_id == "ordinary_derivative") {
        const int k = static_cast<int>(param(p, "k"));
        const double sigma = param_or(p, "sigma", 1.0);
        const double u = (param(p, "x") - param_or(p, "center", 0.0)) / sigma;
        // d^k/du^k e^{-u^2} = (-1)^k H_k(u) e^{-u^2}.
        return ((k % 2) ? -1.0 : 1.0) * hermite(k, u) * std::exp(-u * u) / std::pow(sigma, k);
    }
    throw std::invalid_argument(fmt::format("unknown closed-form case '{}'", case_id));
}

VerificationReport limit_check(int k, const FunctionHandle& f, double x,
                               const std::vector<double>& epsilons) {
    const auto dk = f.derivative(k);
    if (!dk) throw std::invalid_argument("limit_check needs an analytic k-th derivative");
    const Complex exact = (*dk)(x);
    VerificationReport rep;
    rep.suite = "limits";
    std::vector<std::pair<double, double>> pts;
    for (double eps : epsilons) {
        const auto r = central_fractional(k, k - eps, f, x);
        // The bias is first order in eps; 5 eps (1 + |f^(k)|) is 5e-3 at eps = 1e-3.
        const double tol = tolerances().limit_rel * (eps / 1e-3) * (1.0 + std::abs(exact));
        rep.check(fmt::format("k={} alpha=k-{:g} x={:g} {}", k, eps, x, f.description()), exact,
                  r.value, tol);
        const double err = std::abs(r.value - exact);
        // Errors at roundoff level carry no rate information.
        if (err > 1e-10 * (1.0 + std::abs(exact))) pts.emplace_back(std::log(eps), std::log(err));
    }
    if (pts.size() >= 2) {
        double mx = 0, my = 0;
        for (auto [a, b] : pts) {
            mx += a;
            my += b;
        }
        mx /= pts.size();
        my /= pts.size();
        double sxy = 0, sxx = 0;
        for (auto [a, b] : pts) {
            sxy += (a - mx) * (b - my);
            sxx += (a - mx) * (a - mx);
        }
        if (sxx > 0) rep.metrics["rate"] = sxy / sxx;
    }
    return rep;
}

SymmetryMeasurement measure_symmetry(int k, double alpha, const FunctionHandle& f,
                                     const FunctionHandle& g) {
    constexpr int nodes = 4001;
    constexpr double a = -20.0, b = 20.0;
    const double h = (b - a) / (nodes - 1);
    SymmetryMeasurement m;
    double ff = 0, gg = 0, dfdf = 0, dgdg = 0;
    for (int i = 0; i < nodes; ++i) {
        const double x = a + h * i;
        const double w = h / 3.0 * ((i == 0 || i == nodes - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0));
        const Complex fx = f(x), gx = g(x);
        const Complex dfx = central_fractional(k, alpha, f, x).value;
        const Complex dgx = central_fractional(k, alpha, g, x).value;
        m.lhs += w * dfx * std::conj(gx);
        m.rhs += w * fx * std::conj(dgx);
        ff += w * std::norm(fx);
        gg += w * std::norm(gx);
        dfdf += w * std::norm(dfx);
        dgdg += w * std::norm(dgx);
    }
    m.sigma = (m.lhs * std::conj(m.rhs)).real() >= 0.0 ? 1 : -1;
    m.residual = std::abs(m.lhs - static_cast<double>(m.sigma) * m.rhs);
    m.norm_product = std::max(std::sqrt(dfdf * gg), std::sqrt(ff * dgdg));
    return m;
}

VerificationReport symmetry_check(int k, double alpha, const FunctionHandle& f,
                                  const FunctionHandle& g) {
    const auto m = measure_symmetry(k, alpha, f, g);
    VerificationReport rep;
    rep.suite = "symmetry";
    rep.metrics["sigma"] = m.sigma;
    rep.metrics["residual"] = m.residual;
    rep.metrics["norm_product"] = m.norm_product;
    rep.check(fmt::format("k={} alpha={:g} <Df,g> = {:+d} <f,Dg>, f={}, g={}", k, alpha, m.sigma,
                          f.description(), g.description()),
              static_cast<double>(m.sigma) * m.rhs, m.lhs,
              tolerances().symmetry_rel * m.norm_product);
    return rep;
}

} // namespace fracderiv::oracle
