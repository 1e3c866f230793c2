#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "fracderiv/normalization.hpp"
#include "fracderiv/oracle.hpp"
#include "fracderiv/quadrature.hpp"
#include "fracderiv/stencil.hpp"

namespace fracderiv::oracle {

namespace {

using std::numbers::pi;

// Relative bounds are taken against max(|expected|, kRelativeFloor) so that
// values vanishing by symmetry are compared at the scale of the unit-amplitude inputs.
constexpr double kRelativeFloor = 1e-2;

double rel_bound(double rel, Complex expected) {
    return rel * std::max(std::abs(expected), kRelativeFloor);
}

Complex to_complex(const Rational& r) { return static_cast<double>(r); }

QuadratureConfig tight(double rel) {
    QuadratureConfig c;
    c.rel_tol = rel;
    c.abs_tol = 1e-15;
    return c;
}

VerificationReport stencil_suite(int k_max) {
    VerificationReport rep;
    rep.suite = "stencil";
    for (int k = 1; k <= std::max(8, k_max); ++k) {
        const auto s = build_stencil(k);
        Rational fact = 1;
        for (int i = 2; i <= k; ++i) fact *= i;
        bool ok = true;
        for (int j = 0; j < k; ++j) ok = ok && stencil_moment(s, j) == 0;
        const Rational top = stencil_moment(s, k);
        ok = ok && top == fact;
        rep.record(fmt::format("k={} moments sum a o^j = 0 (j<k), = k! (j=k), exact", k),
                   to_complex(fact), to_complex(top), tolerances().moment_exact, ok);
    }
    // Integrands of the four low-order operators, written out by hand, and the
    // factor relating them to the generated stencils.
    struct Explicit {
        int k;
        std::vector<int> offsets;
        std::vector<Rational> coeffs;
        Rational factor;
    };
    const std::vector<Explicit> lows = {
        {1, {1, -1}, {1, -1}, Rational(1, 2)},
        {2, {1, 0, -1}, {1, -2, 1}, Rational(1)},
        {3, {2, 1, -1, -2}, {-1, 2, -2, 1}, Rational(-1, 2)},
        {4, {2, 1, 0, -1, -2}, {-1, 4, -6, 4, -1}, Rational(-1)},
    };
    for (const auto& e : lows) {
        const auto s = build_stencil(e.k);
        bool ok = true;
        for (std::size_t n = 0; n < s.size(); ++n) {
            Rational expected = 0;
            for (std::size_t m = 0; m < e.offsets.size(); ++m) {
                if (e.offsets[m] == s.offsets()[n]) expected = e.factor * e.coeffs[m];
            }
            ok = ok && expected == s.coefficients()[n];
        }
        rep.record(fmt::format("k={} stencil = {} x explicit integrand", e.k,
                               e.factor.str()),
                   to_complex(e.factor), to_complex(e.factor), 0.0, ok);
    }
    return rep;
}

VerificationReport norm_suite(int k_max) {
    VerificationReport rep;
    rep.suite = "norm";
    const auto& tol = tolerances();
    auto explicit_prefactor = [](int k, double a) {
        const double g = std::tgamma(1.0 + a) / pi;
        switch (k) {
        case 1: return g * std::cos(a * pi / 2) / 0.5;
        case 2: return g * std::sin(a * pi / 2);
        case 3: return g * std::cos(a * pi / 2) / (std::pow(2.0, a) - 2.0) / -0.5;
        default: return g * std::sin(a * pi / 2) / (std::pow(2.0, a) - 4.0) / -1.0;
        }
    };
    for (int k = 1; k <= std::min(4, k_max); ++k) {
        for (double frac : {0.25, 0.5, 0.75}) {
            const double a = frac * k;
            const double expected = (k == 4 && frac == 0.5) ? 1.0 / (4.0 * std::log(2.0))
                                                           : explicit_prefactor(k, a);
            rep.check(fmt::format("prefactor k={} alpha={:g} vs explicit form", k, a), expected,
                      prefactor(k, a).prefactor, tol.prefactor_rel * std::abs(expected));
        }
    }
    for (int k = 1; k <= k_max; ++k) {
        std::vector<double> alphas;
        for (int i = 1; i < 1000 * k; ++i) alphas.push_back(1e-3 * i);
        for (int m = 1; m < k; ++m) {
            for (double d : {-1e-6, -1e-8, 0.0, 1e-8, 1e-6}) alphas.push_back(m + d);
        }
        alphas.push_back(1e-6);
        alphas.push_back(k - 1e-6);
        double worst = 0.0;
        bool finite = true;
        for (double a : alphas) {
            const double p = prefactor(k, a).prefactor;
            finite = finite && std::isfinite(p);
            worst = std::max(worst, std::abs(p));
        }
        rep.record(fmt::format("k={} prefactor finite on (0,k) scan, max |prefactor|", k), 0.0,
                   worst, tol.prefactor_max, finite && worst <= tol.prefactor_max);
    }
    return rep;
}

VerificationReport limits_suite(int k_max) {
    VerificationReport rep;
    rep.suite = "limits";
    const auto g = catalog::gaussian();
    for (int k = 1; k <= k_max; ++k) {
        for (double x : {0.0, 0.7, 1.3}) {
            const auto r = limit_check(k, g, x, {1e-1, 1e-2, 1e-3});
            rep.merge(r);
            if (r.metrics.count("rate")) rep.metrics[fmt::format("rate_k{}_x{:g}", k, x)] = r.metrics.at("rate");
        }
    }
    rep.metrics.erase("rate");
    rep.merge(limit_check(2, catalog::cosine(), 0.0, {1e-3}));
    rep.metrics.erase("rate");
    // Interior integer order: compared with the classical derivative of the same
    // order, reported only.
    if (k_max >= 4) {
        for (double x : {0.0, 0.7}) {
            rep.inform(fmt::format("central k=4 alpha=2 x={:g} vs -f''(x)", x), -(*g.derivative(2))(x),
                       central_fractional(4, 2.0, g, x).value);
        }
    }
    return rep;
}

VerificationReport equivalence_suite(int k_max) {
    VerificationReport rep;
    rep.suite = "equivalence";
    const auto& tol = tolerances();

    for (auto [lambda, alpha] : {std::pair{1.0, 0.5}, {2.0, 0.5}, {1.0, 0.25}}) {
        for (double x : {-1.0, 0.0, 1.0}) {
            const Complex expected = closed_form_reference(
                "lw_plus_exp", {{"lambda", lambda}, {"alpha", alpha}, {"x", x}});
            rep.check(fmt::format("lw+ e^({:g}x) alpha={:g} x={:g}", lambda, alpha, x), expected,
                      lw_plus(catalog::exp_growth(lambda), x, alpha).value,
                      tol.eigen_rel * std::abs(expected));
        }
    }

    const QuadratureConfig fine = tight(1e-10);
    for (const auto& f : {catalog::gaussian(), catalog::lorentzian()}) {
        for (double alpha : {0.3, 0.7}) {
            for (double x : {0.0, 1.3}) {
                const Complex dp = lw_plus(f, x, alpha, fine).value;
                const Complex dm = lw_minus(f, x, alpha, fine).value;
                const Complex rz = riesz(f, x, alpha, fine).value;
                const Complex combo_r = -(dp + dm) / (2.0 * std::cos(alpha * pi / 2));
                const Complex combo_1 = (dp - dm) / (2.0 * std::sin(alpha * pi / 2));
                const auto tag = fmt::format("alpha={:g} x={:g} {}", alpha, x, f.description());
                rep.check("central k=2 vs riesz, " + tag, rz,
                          central_fractional(2, alpha, f, x, fine).value, rel_bound(tol.equivalence_rel, rz));
                rep.check("riesz vs -(D+ + D-)/(2cos), " + tag, combo_r, rz,
                          rel_bound(tol.equivalence_rel, combo_r));
                rep.check("central k=1 vs (D+ - D-)/(2sin), " + tag, combo_1,
                          central_fractional(1, alpha, f, x, fine).value,
                          rel_bound(tol.equivalence_rel, combo_1));
            }
        }
    }

    const QuadratureConfig finest = tight(1e-12);
    const auto g = catalog::gaussian(1.0, 0.3);
    for (double alpha : {0.3, 0.7}) {
        for (double theta : {0.0, 0.25, 0.5, 1.0}) {
            const Complex rot = feller_rotation(g, 0.4, alpha, theta, finest).value;
            const Complex fel = feller(g, 0.4, alpha, theta, finest, true).value;
            rep.check(fmt::format("feller vs rotation form alpha={:g} theta={:g}", alpha, theta), rot,
                      fel, tol.feller_rel * std::abs(rot));
        }
        const Complex rz = riesz(g, 0.4, alpha, finest).value;
        rep.check(fmt::format("feller theta=0 vs riesz alpha={:g}", alpha), rz,
                  feller(g, 0.4, alpha, 0.0, finest).value, tol.feller_rel * std::abs(rz));
    }

    // Plane-wave symbols. Oscillatory tails are the expensive case, so these run
    // one decade looser than the default.
    const QuadratureConfig wave = tight(1e-7);
    const auto w = catalog::plane_wave(1.0);
    for (double alpha : {0.3, 0.7}) {
        for (double theta : {0.0, 0.25, 0.5, 1.0}) {
            const Complex expected = closed_form_reference(
                "feller_plane_wave", {{"omega", 1.0}, {"alpha", alpha}, {"theta", theta}, {"x", 0.0}});
            rep.check(fmt::format("feller symbol alpha={:g} theta={:g}", alpha, theta), expected,
                      feller(w, 0.0, alpha, theta, wave, true).value, tol.symbol_rel * std::abs(expected));
        }
    }
    {
        const auto w2 = catalog::plane_wave(2.0);
        const Complex e1 = closed_form_reference("d1_plane_wave", {{"omega", 2.0}, {"alpha", 0.5}, {"x", 0.0}});
        rep.check("d1 symbol omega=2 alpha=0.5", e1, d1(w2, 0.0, 0.5, wave).value, tol.symbol_rel * std::abs(e1));
        const Complex er = closed_form_reference("riesz_plane_wave", {{"omega", 2.0}, {"alpha", 1.5}, {"x", 0.0}});
        rep.check("riesz symbol omega=2 alpha=1.5", er, riesz(w2, 0.0, 1.5, wave).value, tol.symbol_rel * std::abs(er));
        const Complex ec = closed_form_reference("riesz_plane_wave", {{"omega", 1.0}, {"alpha", 0.5}, {"x", 0.0}, {"part", 1}});
        rep.check("riesz on cos alpha=0.5 x=0", ec, riesz(catalog::cosine(), 0.0, 0.5, wave).value,
                  tol.symbol_rel * std::abs(ec));
        for (int k = 3; k <= k_max; ++k) {
            const double alpha = 0.6 * k;
            const Complex conj = std::pow(Complex(0.0, 1.0), k) * std::pow(2.0, alpha);
            rep.inform(fmt::format("measured central k={} symbol at omega=2 alpha={:g} vs (i sign w)^k |w|^alpha", k, alpha),
                       conj, central_fractional(k, alpha, w2, 0.0, wave).value);
        }
    }

    // Order extension: derivative-commuting vs outer finite differences, and the composite symbol.
    {
        const auto gg = catalog::gaussian();
        for (double x : {0.0, 0.7}) {
            const Complex an = extended_order(1, 1.5, gg, x, {}, OrderExtension::analytic).value;
            const Complex fd = extended_order(1, 1.5, gg, x, {}, OrderExtension::finite_difference).value;
            rep.check(fmt::format("extended k=1 alpha=1.5 x={:g}: analytic vs finite difference", x), an, fd,
                      tol.extension_abs);
        }
        const Complex e = closed_form_reference("central_plane_wave", {{"k", 1}, {"omega", 2.0}, {"alpha", 2.5}, {"x", 0.0}});
        rep.check("extended k=1 alpha=2.5 plane-wave symbol omega=2", e,
                  extended_order(1, 2.5, catalog::plane_wave(2.0), 0.0, wave).value, tol.symbol_rel * std::abs(e));
    }

    // Quadrature against the two closed-form kernels.
    {
        const double alpha = 0.5;
        SingularIntegrand expk;
        expk.psi = [](double xi) { return Complex(-std::expm1(-xi)); };
        expk.asymptote = 1.0;
        expk.tail_bound = [](double xi, double a) { return std::exp(-xi) * std::pow(xi, -a - 1.0); };
        SingularIntegrand cosk;
        cosk.psi = [](double xi) { return Complex(2.0 * std::pow(std::sin(0.5 * xi), 2)); };
        cosk.asymptote = 1.0;
        cosk.tail_bound = [](double xi, double a) { return 2.0 * std::pow(xi, -a - 1.0); };
        QuadratureConfig c1;
        QuadratureConfig c2;
        c2.near_zero_order = 2;
        c2.series_step = 2;
        const double exact_exp = std::tgamma(1.0 - alpha) / alpha;
        const double exact_cos = -std::tgamma(-alpha) * std::cos(alpha * pi / 2);
        const auto r1 = singular_integral(expk, alpha, c1);
        const auto r2 = singular_integral(cosk, alpha, c2);
        for (auto [name, r, exact] : {std::tuple{"1 - e^-xi", r1, exact_exp}, {"1 - cos xi", r2, exact_cos}}) {
            const double err = std::abs(r.value - exact);
            rep.record(fmt::format("quadrature {} kernel alpha=0.5 within 3x its error estimate", name), exact,
                       r.value, 3.0 * r.error_estimate, err <= 3.0 * r.error_estimate);
            rep.check(fmt::format("quadrature {} kernel alpha=0.5 relative accuracy", name), exact, r.value,
                      tol.quadrature_rel * exact);
        }
    }

    // Engine against the brute-force oracle on every catalog entry.
    struct Pair {
        Family family;
        double alpha;
        FunctionHandle f;
    };
    const std::vector<Pair> pairs = {
        {Family::lw_plus, 0.5, catalog::gaussian()},    {Family::lw_plus, 0.5, catalog::lorentzian()},
        {Family::lw_plus, 0.5, catalog::exp_growth()},  {Family::lw_minus, 0.5, catalog::exp_decay()},
        {Family::lw_plus, 0.5, catalog::plane_wave()},  {Family::lw_minus, 0.7, catalog::sine()},
        {Family::riesz, 1.2, catalog::cosine()},        {Family::riesz, 0.5, catalog::constant(2.0)},
        {Family::riesz, 1.2, catalog::gaussian()},      {Family::riesz, 0.4, catalog::lorentzian()},
    };
    for (const auto& p : pairs) {
        OperatorSpec spec;
        spec.family = p.family;
        spec.alpha = p.alpha;
        const double x = 0.3;
        const Complex engine = evaluate(spec, p.f, x, tight(1e-9)).value;
        const Complex brute = brute_force_operator(spec, p.f, x);
        rep.check(fmt::format("engine vs brute force: {} alpha={:g} {}", to_string(p.family), p.alpha,
                              p.f.description()),
                  brute, engine, rel_bound(tol.brute_force_rel, brute));
    }
    for (int k = 1; k <= std::min(k_max, 4); ++k) {
        OperatorSpec spec;
        spec.family = Family::central;
        spec.k = k;
        spec.alpha = 0.6 * k;
        const auto f = catalog::gaussian();
        const Complex engine = evaluate(spec, f, 0.3, tight(1e-9)).value;
        const Complex brute = brute_force_operator(spec, f, 0.3);
        rep.check(fmt::format("engine vs brute force: central k={} alpha={:g} gaussian", k, spec.alpha),
                  brute, engine, rel_bound(tol.brute_force_rel, brute));
    }
    return rep;
}

VerificationReport symmetry_suite(int k_max) {
    VerificationReport rep;
    rep.suite = "symmetry";
    const std::vector<std::pair<FunctionHandle, FunctionHandle>> pairs = {
        {catalog::gaussian(), catalog::gaussian(1.0, 0.5)},
        {catalog::gaussian(0.8, -0.3), catalog::gaussian(1.2, 0.7)},
        {catalog::gaussian(1.0, 0.2), catalog::gaussian(0.6, -1.0)},
    };
    for (int k = 1; k <= k_max; ++k) {
        const double alpha = 0.6 * k;
        std::vector<int> signs;
        for (const auto& [f, g] : pairs) {
            const auto r = symmetry_check(k, alpha, f, g);
            signs.push_back(static_cast<int>(r.metrics.at("sigma")));
            rep.merge(r);
        }
        rep.metrics.erase("sigma");
        rep.metrics.erase("residual");
        rep.metrics.erase("norm_product");
        const bool constant = std::all_of(signs.begin(), signs.end(), [&](int s) { return s == signs[0]; });
        rep.metrics[fmt::format("sigma_k{}", k)] = signs[0];
        rep.record(fmt::format("k={} measured sign constant across pairs", k), signs[0], signs.back(), 0.0, constant);
        if (k <= 2) {
            const int expected = k == 1 ? -1 : 1;
            rep.record(fmt::format("k={} sign equals {:+d}", k, expected), expected, signs[0], 0.0,
                       signs[0] == expected);
        }
    }
    return rep;
}

VerificationReport scaling_suite(int k_max) {
    VerificationReport rep;
    rep.suite = "scaling";
    const auto& tol = tolerances();
    const auto g = catalog::gaussian();
    const QuadratureConfig fine = tight(1e-10);
    struct Op {
        std::string name;
        int k;
        double alpha;
    };
    std::vector<Op> ops = {{"riesz", 2, 0.7}, {"riesz", 2, 1.4}};
    if (k_max >= 3) ops.push_back({"central k=3", 3, 1.8});
    auto apply = [&](const Op& op, const FunctionHandle& f, double x) {
        return op.name == "riesz" ? riesz(f, x, op.alpha, fine).value
                                  : central_fractional(op.k, op.alpha, f, x, fine).value;
    };
    for (const auto& op : ops) {
        const double x = 0.7;
        for (double c : {0.5, 2.0}) {
            const Complex expected = std::pow(c, op.alpha) * apply(op, g, c * x);
            rep.check(fmt::format("{} alpha={:g}: D[f(c.)](x) = c^alpha Df(cx), c={:g}", op.name, op.alpha, c),
                      expected, apply(op, scaled(g, c), x), rel_bound(tol.scaling_rel, expected));
        }
        for (double a : {-1.0, 2.5}) {
            const Complex expected = apply(op, g, x - a);
            rep.check(fmt::format("{} alpha={:g}: D[f(. - a)](x) = Df(x - a), a={:g}", op.name, op.alpha, a),
                      expected, apply(op, shifted(g, a), x), rel_bound(tol.scaling_rel, expected));
        }
    }
    return rep;
}

} // namespace

const Tolerances& tolerances() {
    static const Tolerances t;
    return t;
}

std::vector<std::string> suite_names() {
    return {"all", "stencil", "norm", "limits", "equivalence", "symmetry", "scaling"};
}

std::vector<VerificationReport> run_verify(std::string_view suite, int k_max) {
    if (k_max < 1 || k_max > 8) throw std::invalid_argument("k-max must be in [1, 8]");
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        throw std::invalid_argument(fmt::format("unknown suite '{}'", suite));
    }
    using Runner = VerificationReport (*)(int);
    const std::vector<std::pair<std::string_view, Runner>> all = {
        {"stencil", stencil_suite},         {"norm", norm_suite},         {"limits", limits_suite},
        {"equivalence", equivalence_suite}, {"symmetry", symmetry_suite}, {"scaling", scaling_suite},
    };
    std::vector<VerificationReport> out;
    for (const auto& [name, run] : all) {
        if (suite == "all" || suite == name) out.push_back(run(k_max));
    }
    return out;
}

} // namespace fracderiv::oracle
