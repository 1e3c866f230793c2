#include "fracderiv/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "fracderiv/errors.hpp"

namespace fracderiv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Number of terms in the power-series model of psi near zero.
constexpr int kSeriesTerms = 3;
constexpr int kMaxHalvings = 48;
constexpr int kMaxPasses = 4;

struct Rule21 {
    std::array<double, 11> x{};
    std::array<double, 11> wk{};
    std::array<double, 11> wg{};  // non-zero only at Gauss nodes

    Rule21() {
        const auto& ka = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
        const auto& kw = boost::math::quadrature::gauss_kronrod<double, 21>::weights();
        const auto& ga = boost::math::quadrature::gauss<double, 10>::abscissa();
        const auto& gw = boost::math::quadrature::gauss<double, 10>::weights();
        for (std::size_t i = 0; i < 11; ++i) {
            x[i] = ka[i];
            wk[i] = kw[i];
            for (std::size_t j = 0; j < ga.size(); ++j) {
                if (ga[j] == ka[i]) wg[i] = gw[j];
            }
        }
    }
};

const Rule21& rule() {
    static const Rule21 r;
    return r;
}

struct Accumulator {
    Complex value{0.0, 0.0};
    double error = 0.0;
    long evaluations = 0;
    long budget = std::numeric_limits<long>::max();
    bool converged = true;
};

// Integrand value together with the size of the terms it was computed from.
struct Sample {
    Complex value;
    double magnitude;
};
using SampledFn = std::function<Sample(double)>;

Complex checked(const std::function<Complex(double)>& f, double t) {
    const Complex v = f(t);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalError(fmt::format("integrand is not finite at {}", t));
    }
    return v;
}

void adapt(const SampledFn& f, double a, double b, double tol, int depth, int max_depth,
           Accumulator& acc) {
    const auto& r = rule();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Sample fc = f(c);
    Complex k = r.wk[0] * fc.value;
    Complex g{0.0, 0.0};
    double abs_k = r.wk[0] * fc.magnitude;
    for (std::size_t i = 1; i < 11; ++i) {
        const Sample f1 = f(c - h * r.x[i]);
        const Sample f2 = f(c + h * r.x[i]);
        k += r.wk[i] * (f1.value + f2.value);
        g += r.wg[i] * (f1.value + f2.value);
        abs_k += r.wk[i] * (f1.magnitude + f2.magnitude);
    }
    acc.evaluations += 21;
    k *= h;
    g *= h;
    abs_k *= std::abs(h);
    const double err = std::abs(k - g);
    const double roundoff = 50.0 * kEps * abs_k;
    if (err <= std::max(tol, roundoff)) {
        acc.value += k;
        acc.error += std::max(err, roundoff);
        return;
    }
    const bool too_narrow = std::abs(b - a) <= 64.0 * kEps * std::max(std::abs(a), std::abs(b));
    if (depth >= max_depth || too_narrow || acc.evaluations >= acc.budget) {
        acc.value += k;
        acc.error += err;
        acc.converged = false;
        return;
    }
    adapt(f, a, c, 0.5 * tol, depth + 1, max_depth, acc);
    adapt(f, c, b, 0.5 * tol, depth + 1, max_depth, acc);
}

// Solves the kSeriesTerms x kSeriesTerms system m * c = rhs in place.
std::array<Complex, kSeriesTerms> solve(std::array<std::array<double, kSeriesTerms>, kSeriesTerms> m,
                                        std::array<Complex, kSeriesTerms> rhs) {
    constexpr int n = kSeriesTerms;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
        }
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (int row = col + 1; row < n; ++row) {
            const double f = m[row][col] / m[col][col];
            for (int j = col; j < n; ++j) m[row][j] -= f * m[col][j];
            rhs[row] -= f * rhs[col];
        }
    }
    std::array<Complex, n> out{};
    for (int row = n - 1; row >= 0; --row) {
        Complex s = rhs[row];
        for (int j = row + 1; j < n; ++j) s -= m[row][j] * out[j];
        out[row] = s / m[row][row];
    }
    return out;
}

class SingularEngine {
public:
    SingularEngine(const SingularIntegrand& ig, double alpha, const QuadratureConfig& cfg)
        : ig_(ig), alpha_(alpha), cfg_(cfg) {}

    IntegralEstimate run() {
        const double delta = cfg_.split_point;
        const Complex probe = eval(delta);
        const double scale = std::abs(probe) * std::pow(delta, -alpha_) +
                             std::abs(ig_.asymptote) * std::pow(delta, -alpha_) / alpha_;
        double tau = std::max(cfg_.abs_tol, cfg_.rel_tol * scale);

        IntegralEstimate best;
        for (int pass = 0; pass < kMaxPasses; ++pass) {
            best = one_pass(tau);
            best.evaluations = evaluations_;
            const double target = std::max(cfg_.abs_tol, cfg_.rel_tol * std::abs(best.value));
            if (best.error_estimate <= target) {
                best.converged = true;
                return best;
            }
            const double next = 0.5 * target;
            if (!(next < 0.99 * tau)) break;
            tau = next;
        }
        best.converged = false;
        return best;
    }

private:
    Complex eval(double xi) {
        ++evaluations_;
        return checked(ig_.psi, xi);
    }

    Sample sample(double xi) {
        const Complex v = eval(xi);
        return {v, ig_.magnitude ? ig_.magnitude(xi) : std::abs(v)};
    }

    Accumulator fresh() const {
        Accumulator a;
        a.budget = std::max(0L, cfg_.max_evaluations - evaluations_);
        return a;
    }

    IntegralEstimate one_pass(double tau) {
        IntegralEstimate out;
        const double share = tau / 3.0;

        near_zero(share, out);
        middle(share, out);
        return out;
    }

    // [0, delta]: adaptive panels in u = log(xi) down to eta, series model below eta.
    void near_zero(double budget, IntegralEstimate& out) {
        const double delta = cfg_.split_point;
        const double p = cfg_.near_zero_order;
        const double s = cfg_.series_step;
        std::array<std::array<double, kSeriesTerms>, kSeriesTerms> vander{};
        std::array<double, kSeriesTerms> expo{};
        for (int j = 0; j < kSeriesTerms; ++j) {
            expo[j] = p + j * s;
            for (int i = 0; i < kSeriesTerms; ++i) vander[i][j] = std::exp2(-i * expo[j]);
        }

        SampledFn in_log = [this](double u) {
            const double xi = std::exp(u);
            const double w = std::exp(-alpha_ * u);
            const Sample s = sample(xi);
            return Sample{s.value * w, s.magnitude * w};
        };

        std::vector<Complex> samples;  // psi(eta_0 * 2^-j)
        auto sample = [&](int j) {
            while (static_cast<int>(samples.size()) <= j) {
                samples.push_back(eval(delta * 0.5 * std::exp2(-static_cast<double>(samples.size()))));
            }
            return samples[static_cast<std::size_t>(j)];
        };
        auto model = [&](int j) {
            const double eta = delta * 0.5 * std::exp2(-j);
            std::array<Complex, kSeriesTerms> rhs{};
            for (int i = 0; i < kSeriesTerms; ++i) rhs[i] = sample(j + i);
            const auto c = solve(vander, rhs);
            Complex acc{0.0, 0.0};
            for (int t = 0; t < kSeriesTerms; ++t) acc += c[t] / (expo[t] - alpha_);
            return acc * std::pow(eta, -alpha_);
        };

        const double panel_tol = budget / 64.0;
        Accumulator head = fresh();
        const double log_delta = std::log(delta);
        adapt(in_log, log_delta - std::log(2.0), log_delta, panel_tol, 0, cfg_.max_subdivisions, head);
        Complex previous = head.value + model(0);
        Complex best_total = previous;
        double best_delta = std::numeric_limits<double>::infinity();
        double best_panel_err = head.error;
        int best_j = 0;

        for (int j = 1; j <= kMaxHalvings; ++j) {
            const double hi = log_delta - std::log(2.0) * j;
            adapt(in_log, hi - std::log(2.0), hi, panel_tol, 0, cfg_.max_subdivisions, head);
            const Complex total = head.value + model(j);
            const double change = std::abs(total - previous);
            previous = total;
            if (change < best_delta) {
                best_delta = change;
                best_total = total;
                best_panel_err = head.error;
                best_j = j;
            }
            if (change <= budget) break;
            // Past the optimum: roundoff in psi now dominates the model residual.
            if (j - best_j >= 4) break;
        }
        out.value += best_total;
        out.error_estimate += best_delta + best_panel_err;
        if (!head.converged || best_delta > budget) out.converged = false;
    }

    // [delta, Xi] adaptively on doubling panels, [Xi, inf) analytically.
    void middle(double budget, IntegralEstimate& out) {
        const double delta = cfg_.split_point;
        double xi_max = cfg_.truncation;
        double tail_err = 0.0;
        if (xi_max > 0.0) {
            tail_err = ig_.tail_bound(xi_max, alpha_);
        } else {
            const double cap = delta * std::exp2(60.0);
            xi_max = 2.0 * delta;
            tail_err = ig_.tail_bound(xi_max, alpha_);
            while (tail_err > budget && xi_max < cap) {
                xi_max *= 2.0;
                tail_err = ig_.tail_bound(xi_max, alpha_);
            }
        }
        if (!(tail_err <= budget)) out.converged = false;

        std::vector<double> edges{delta};
        while (edges.back() < xi_max) edges.push_back(std::min(2.0 * edges.back(), xi_max));
        const double panel_tol = budget / static_cast<double>(edges.size());
        Accumulator mid = fresh();
        SampledFn direct = [this](double xi) {
            const double w = std::pow(xi, -alpha_ - 1.0);
            const Sample s = sample(xi);
            return Sample{s.value * w, s.magnitude * w};
        };
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            adapt(direct, edges[i], edges[i + 1], panel_tol, 0, cfg_.max_subdivisions, mid);
        }
        out.value += mid.value + ig_.asymptote * std::pow(xi_max, -alpha_) / alpha_;
        out.error_estimate += mid.error + tail_err;
        if (!mid.converged) out.converged = false;
    }

    const SingularIntegrand& ig_;
    double alpha_;
    const QuadratureConfig& cfg_;
    long evaluations_ = 0;
};

} // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
    if (!(abs_tol >= 0.0)) throw std::invalid_argument("abs_tol must be non-negative");
    if (!(split_point > 0.0)) throw std::invalid_argument("split_point must be positive");
    if (truncation != 0.0 && !(truncation > split_point)) {
        throw std::invalid_argument("truncation must exceed split_point");
    }
    if (max_evaluations < 1) throw std::invalid_argument("max_evaluations must be >= 1");
    if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
    if (near_zero_order < 1) throw std::invalid_argument("near_zero_order must be >= 1");
    if (series_step < 1) throw std::invalid_argument("series_step must be >= 1");
}

TailBound bounded_tail(double sup) {
    return [sup](double xi, double alpha) { return sup * std::pow(xi, -alpha) / alpha; };
}

IntegralEstimate singular_integral(const SingularIntegrand& integrand, double alpha,
                                   const QuadratureConfig& config) {
    config.validate();
    if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
    if (!(alpha < config.near_zero_order)) {
        throw DomainError(fmt::format(
            "integral diverges at 0: alpha = {} is not below the vanishing order {}", alpha,
            config.near_zero_order));
    }
    if (!integrand.psi) throw std::invalid_argument("integrand has no psi");
    if (!integrand.tail_bound) {
        throw TailBoundError("integrand declares no bound on [Xi, inf)");
    }
    SingularEngine engine(integrand, alpha, config);
    return engine.run();
}

IntegralEstimate adaptive_gauss_kronrod(const std::function<Complex(double)>& f, double a,
                                        double b, double tol, int max_depth) {
    Accumulator acc;
    const SampledFn sampled = [&f](double t) {
        const Complex v = checked(f, t);
        return Sample{v, std::abs(v)};
    };
    adapt(sampled, a, b, tol, 0, max_depth, acc);
    return {acc.value, acc.error, acc.evaluations, acc.converged};
}

} // namespace fracderiv
