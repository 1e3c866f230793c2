#include "fracderiv/function.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace fracderiv {

std::string_view to_string(DecayClass c) {
    switch (c) {
    case DecayClass::schwartz: return "schwartz";
    case DecayClass::bounded_oscillatory: return "bounded_oscillatory";
    case DecayClass::left_decaying: return "left_decaying";
    case DecayClass::right_decaying: return "right_decaying";
    case DecayClass::constant: return "constant";
    }
    return "unknown";
}

FunctionHandle::FunctionHandle(std::string description, DecayClass decay, Eval eval, RayTail left,
                               RayTail right, DerivativeFactory derivative)
    : state_(std::make_shared<const State>(State{std::move(description), decay,
                                                 std::make_shared<const Eval>(std::move(eval)),
                                                 std::move(left), std::move(right),
                                                 std::move(derivative)})) {}

std::optional<FunctionHandle> FunctionHandle::derivative(int j) const {
    if (j < 0) throw std::invalid_argument("derivative order must be non-negative");
    if (j == 0) return *this;
    if (!state_->derivative) return std::nullopt;
    return state_->derivative(j);
}

namespace {

std::string derivative_label(int j, const std::string& base) {
    return j == 0 ? base : fmt::format("d^{}/dx^{} {}", j, j, base);
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Coefficients of H_n in increasing powers.
std::vector<double> hermite_coefficients(int n) {
    std::vector<double> prev{1.0};
    if (n == 0) return prev;
    std::vector<double> cur{0.0, 2.0};
    for (int m = 1; m < n; ++m) {
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= 2.0 * m * prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

RayTail unbounded() {
    RayTail t;
    t.bounded = false;
    return t;
}

RayTail oscillatory(double amplitude, double frequency) {
    RayTail t;
    t.osc_amplitude = amplitude;
    t.osc_frequency = frequency;
    return t;
}

FunctionHandle gaussian_impl(double sigma, double center, int j) {
    const std::string base = fmt::format("gaussian(sigma={},center={})", sigma, center);
    const double scale = std::pow(-1.0 / sigma, j);
    auto eval = [sigma, center, j, scale](double x) {
        const double u = (x - center) / sigma;
        return Complex{scale * catalog::hermite(j, u) * std::exp(-u * u), 0.0};
    };
    // sup_{r >= r0} |H_j(r)| e^{-r^2} <= P(max(r0, rs)) e^{-r0^2}, with P the
    // absolute-coefficient polynomial; P e^{-r^2} decreases beyond rs = sqrt(j/2).
    std::vector<double> abs_coeffs = hermite_coefficients(j);
    for (double& c : abs_coeffs) c = std::abs(c);
    const double rs = std::sqrt(0.5 * j);
    auto env = [abs_coeffs, rs, sigma, j](double r0) {
        r0 = std::max(r0, 0.0);
        const double r = std::max(r0, rs);
        double p = 0.0;
        for (std::size_t i = abs_coeffs.size(); i-- > 0;) p = p * r + abs_coeffs[i];
        return std::pow(sigma, -j) * p * std::exp(-r0 * r0);
    };
    RayTail right;
    right.envelope = [env, sigma, center](double y0) { return env((y0 - center) / sigma); };
    RayTail left;
    left.envelope = [env, sigma, center](double y0) { return env((center - y0) / sigma); };
    return FunctionHandle(derivative_label(j, base), DecayClass::schwartz, eval, left, right,
                          [sigma, center, j](int m) { return gaussian_impl(sigma, center, j + m); });
}

FunctionHandle lorentzian_impl(double width, double center, int j) {
    const std::string base = fmt::format("lorentzian(width={},center={})", width, center);
    const double scale = ((j % 2 == 0) ? 1.0 : -1.0) * factorial(j) * std::pow(width, -j);
    auto eval = [width, center, j, scale](double x) {
        // 1/(1+u^2) = Im 1/(u - i); differentiate the pole term.
        const double u = (x - center) / width;
        const Complex z = 1.0 / Complex{u, -1.0};
        Complex p = z;
        for (int i = 0; i < j; ++i) p *= z;
        return Complex{scale * p.imag(), 0.0};
    };
    const double amp = factorial(j) * std::pow(width, -j);
    auto env = [amp, j](double r0) {
        r0 = std::max(r0, 0.0);
        return amp * std::pow(1.0 + r0 * r0, -0.5 * (j + 1));
    };
    RayTail right;
    right.envelope = [env, width, center](double y0) { return env((y0 - center) / width); };
    RayTail left;
    left.envelope = [env, width, center](double y0) { return env((center - y0) / width); };
    return FunctionHandle(derivative_label(j, base), DecayClass::schwartz, eval, left, right,
                          [width, center, j](int m) { return lorentzian_impl(width, center, j + m); });
}

FunctionHandle plane_wave_impl(double omega, int j) {
    const std::string base = fmt::format("plane_wave(omega={})", omega);
    Complex factor{1.0, 0.0};
    for (int i = 0; i < j; ++i) factor *= Complex{0.0, omega};
    if (omega == 0.0) return catalog::constant(factor);
    auto eval = [omega, factor](double x) {
        return factor * Complex{std::cos(omega * x), std::sin(omega * x)};
    };
    const auto t = oscillatory(std::abs(factor), std::abs(omega));
    return FunctionHandle(derivative_label(j, base), DecayClass::bounded_oscillatory, eval, t, t,
                          [omega, j](int m) { return plane_wave_impl(omega, j + m); });
}

// omega^j * trig(omega x + j pi/2) with trig = cos (is_sine false) or sin.
FunctionHandle trig_impl(double omega, int j, bool is_sine) {
    const std::string base = fmt::format("{}(omega={})", is_sine ? "sine" : "cosine", omega);
    const double amp = std::pow(omega, j);
    // Quarter-period shifts applied exactly: phase index q selects among cos, -sin, -cos, sin.
    const int q = (j + (is_sine ? 3 : 0)) % 4;
    if (omega == 0.0) return catalog::constant(j == 0 && !is_sine ? 1.0 : 0.0);
    auto eval = [omega, amp, q](double x) {
        const double t = omega * x;
        double v = 0.0;
        switch (q) {
        case 0: v = std::cos(t); break;
        case 1: v = -std::sin(t); break;
        case 2: v = -std::cos(t); break;
        default: v = std::sin(t); break;
        }
        return Complex{amp * v, 0.0};
    };
    const auto t = oscillatory(std::abs(amp), std::abs(omega));
    return FunctionHandle(derivative_label(j, base), DecayClass::bounded_oscillatory, eval, t, t,
                          [omega, j, is_sine](int m) { return trig_impl(omega, j + m, is_sine); });
}

FunctionHandle exp_impl(double lambda, int j, bool growth) {
    const std::string base = fmt::format("{}(lambda={})", growth ? "exp_growth" : "exp_decay", lambda);
    const double rate = growth ? lambda : -lambda;
    const double amp = std::pow(rate, j);
    auto eval = [rate, amp](double x) { return Complex{amp * std::exp(rate * x), 0.0}; };
    RayTail decaying;
    decaying.envelope = [rate, amp](double y0) { return std::abs(amp) * std::exp(rate * y0); };
    return FunctionHandle(derivative_label(j, base),
                          growth ? DecayClass::left_decaying : DecayClass::right_decaying, eval,
                          growth ? decaying : unbounded(), growth ? unbounded() : decaying,
                          [lambda, j, growth](int m) { return exp_impl(lambda, j + m, growth); });
}

RayTail combine_tails(const std::vector<std::pair<Complex, const RayTail*>>& parts) {
    RayTail out;
    std::vector<std::pair<double, std::function<double(double)>>> envelopes;
    double freq = 0.0;
    for (const auto& [w, t] : parts) {
        if (w == Complex{}) continue;
        if (!t->bounded) return unbounded();
        out.limit += w * t->limit;
        if (t->envelope) envelopes.emplace_back(std::abs(w), t->envelope);
        if (t->osc_amplitude > 0.0) {
            out.osc_amplitude += std::abs(w) * t->osc_amplitude;
            freq = (freq == 0.0) ? t->osc_frequency : std::min(freq, t->osc_frequency);
        }
    }
    out.osc_frequency = freq;
    if (!envelopes.empty()) {
        out.envelope = [envelopes](double y0) {
            double acc = 0.0;
            for (const auto& [w, e] : envelopes) acc += w * e(y0);
            return acc;
        };
    }
    return out;
}

} // namespace

FunctionHandle shifted(const FunctionHandle& f, double a) {
    auto shift_tail = [a](const RayTail& t) {
        RayTail out = t;
        if (t.envelope) out.envelope = [env = t.envelope, a](double y0) { return env(y0 - a); };
        return out;
    };
    const auto& ev = f.evaluator();
    FunctionHandle::DerivativeFactory deriv;
    if (f.has_derivatives()) {
        deriv = [f, a](int j) { return shifted(*f.derivative(j), a); };
    }
    return FunctionHandle(fmt::format("{} shifted by {}", f.description(), a), f.decay_class(),
                          [ev, a](double x) { return ev(x - a); }, shift_tail(f.tail(-1)),
                          shift_tail(f.tail(1)), deriv);
}

FunctionHandle scaled(const FunctionHandle& f, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("scale factor must be positive");
    auto scale_tail = [c](const RayTail& t) {
        RayTail out = t;
        if (t.envelope) out.envelope = [env = t.envelope, c](double y0) { return env(c * y0); };
        out.osc_frequency = c * t.osc_frequency;
        return out;
    };
    const auto& ev = f.evaluator();
    FunctionHandle::DerivativeFactory deriv;
    if (f.has_derivatives()) {
        deriv = [f, c](int j) {
            return linear_combination({{std::pow(c, j), scaled(*f.derivative(j), c)}});
        };
    }
    return FunctionHandle(fmt::format("{} at {} x", f.description(), c), f.decay_class(),
                          [ev, c](double x) { return ev(c * x); }, scale_tail(f.tail(-1)),
                          scale_tail(f.tail(1)), deriv);
}

FunctionHandle linear_combination(const std::vector<std::pair<Complex, FunctionHandle>>& terms) {
    if (terms.empty()) return catalog::constant(0.0);
    std::vector<std::pair<Complex, FunctionHandle::Eval>> evals;
    std::vector<std::pair<Complex, const RayTail*>> left, right;
    std::string desc;
    bool all_derivatives = true;
    DecayClass decay = terms.front().second.decay_class();
    for (const auto& [w, f] : terms) {
        evals.emplace_back(w, f.evaluator());
        left.emplace_back(w, &f.tail(-1));
        right.emplace_back(w, &f.tail(1));
        if (!desc.empty()) desc += " + ";
        desc += fmt::format("({}{:+}i)*{}", w.real(), w.imag(), f.description());
        all_derivatives = all_derivatives && f.has_derivatives();
        if (f.decay_class() != decay) decay = DecayClass::bounded_oscillatory;
    }
    FunctionHandle::DerivativeFactory deriv;
    if (all_derivatives) {
        deriv = [terms](int j) {
            std::vector<std::pair<Complex, FunctionHandle>> d;
            for (const auto& [w, f] : terms) d.emplace_back(w, *f.derivative(j));
            return linear_combination(d);
        };
    }
    return FunctionHandle(
        desc, decay,
        [evals](double x) {
            Complex acc{0.0, 0.0};
            for (const auto& [w, e] : evals) acc += w * e(x);
            return acc;
        },
        combine_tails(left), combine_tails(right), deriv);
}

namespace catalog {

double hermite(int n, double u) {
    if (n < 0) throw std::invalid_argument("Hermite degree must be non-negative");
    double h0 = 1.0;
    if (n == 0) return h0;
    double h1 = 2.0 * u;
    for (int m = 1; m < n; ++m) {
        const double h2 = 2.0 * u * h1 - 2.0 * m * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

FunctionHandle gaussian(double sigma, double center) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
    return gaussian_impl(sigma, center, 0);
}

FunctionHandle lorentzian(double width, double center) {
    if (!(width > 0.0)) throw std::invalid_argument("lorentzian width must be positive");
    return lorentzian_impl(width, center, 0);
}

FunctionHandle plane_wave(double omega) { return plane_wave_impl(omega, 0); }
FunctionHandle cosine(double omega) { return trig_impl(omega, 0, false); }
FunctionHandle sine(double omega) { return trig_impl(omega, 0, true); }

FunctionHandle exp_growth(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("exp_growth lambda must be positive");
    return exp_impl(lambda, 0, true);
}

FunctionHandle exp_decay(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("exp_decay lambda must be positive");
    return exp_impl(lambda, 0, false);
}

FunctionHandle constant(Complex value) {
    RayTail t;
    t.limit = value;
    return FunctionHandle(fmt::format("constant({})", value.real()), DecayClass::constant,
                          [value](double) { return value; }, t, t,
                          [](int) { return constant(0.0); });
}

std::vector<std::string> names() {
    return {"gaussian[:sigma=1,center=0]", "lorentzian[:width=1,center=0]",
            "plane_wave[:omega=1]",        "cosine[:omega=1]",
            "sine[:omega=1]",              "exp_growth[:lambda=1]",
            "exp_decay[:lambda=1]",        "constant[:value=1]"};
}

FunctionHandle parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string name(spec.substr(0, colon));
    std::map<std::string, double> params;
    if (colon != std::string_view::npos) {
        std::string_view rest = spec.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) {
                throw std::invalid_argument(fmt::format("expected param=value, got '{}'", item));
            }
            const std::string key(item.substr(0, eq));
            const std::string value(item.substr(eq + 1));
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != value.size() || value.empty()) {
                throw std::invalid_argument(fmt::format("parameter {} is not a number: '{}'", key, value));
            }
            params[key] = v;
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }

    auto take = [&](std::initializer_list<std::pair<const char*, double>> allowed) {
        std::vector<double> out;
        for (const auto& [key, def] : allowed) {
            const auto it = params.find(key);
            out.push_back(it == params.end() ? def : it->second);
            if (it != params.end()) params.erase(it);
        }
        if (!params.empty()) {
            throw std::invalid_argument(
                fmt::format("unknown parameter '{}' for function {}", params.begin()->first, name));
        }
        return out;
    };

    if (name == "gaussian") {
        const auto p = take({{"sigma", 1.0}, {"center", 0.0}});
        return gaussian(p[0], p[1]);
    }
    if (name == "lorentzian") {
        const auto p = take({{"width", 1.0}, {"center", 0.0}});
        return lorentzian(p[0], p[1]);
    }
    if (name == "plane_wave") return plane_wave(take({{"omega", 1.0}})[0]);
    if (name == "cosine") return cosine(take({{"omega", 1.0}})[0]);
    if (name == "sine") return sine(take({{"omega", 1.0}})[0]);
    if (name == "exp_growth") return exp_growth(take({{"lambda", 1.0}})[0]);
    if (name == "exp_decay") return exp_decay(take({{"lambda", 1.0}})[0]);
    if (name == "constant") return constant(take({{"value", 1.0}})[0]);
    throw std::invalid_argument(fmt::format("unknown function '{}'", name));
}

} // namespace catalog

} // namespace fracderiv
