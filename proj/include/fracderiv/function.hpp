#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fracderiv {

using Complex = std::complex<double>;

enum class DecayClass {
    schwartz,
    bounded_oscillatory,
    left_decaying,   // decays as x -> -inf, may grow to the right
    right_decaying,  // decays as x -> +inf, may grow to the left
    constant,
};

std::string_view to_string(DecayClass c);

/**
 * @brief Behaviour of f along one ray, y -> +inf (right) or y -> -inf (left).
 *
 * Beyond any point y0 on the ray, f(y) = limit + r(y) + q(y) where
 * |r(y)| <= envelope(y0) and q is a sum of plane waves e^{i w y} with
 * |w| >= osc_frequency and total amplitude osc_amplitude.
 */
struct RayTail {
    bool bounded = true;
    Complex limit{0.0, 0.0};
    /// Empty means r = 0.
    std::function<double(double y0)> envelope;
    double osc_amplitude = 0.0;
    double osc_frequency = 0.0;

    double envelope_at(double y0) const { return envelope ? envelope(y0) : 0.0; }
};

/**
 * @brief Evaluable test function with tail metadata and optional analytic derivatives.
 *
 * Cheap to copy; the callable state is shared and immutable.
 */
class FunctionHandle {
public:
    using Eval = std::function<Complex(double)>;
    /// Returns the j-th derivative (j >= 1).
    using DerivativeFactory = std::function<FunctionHandle(int j)>;

    FunctionHandle(std::string description, DecayClass decay, Eval eval, RayTail left,
                   RayTail right, DerivativeFactory derivative = {});

    Complex operator()(double x) const { return (*state_->eval)(x); }
    const Eval& evaluator() const { return *state_->eval; }

    /// j = 0 returns a copy of this handle; nullopt when no analytic derivative exists.
    std::optional<FunctionHandle> derivative(int j) const;
    bool has_derivatives() const { return static_cast<bool>(state_->derivative); }

    DecayClass decay_class() const { return state_->decay; }
    const std::string& description() const { return state_->description; }
    /// dir > 0: ray to +inf, dir < 0: ray to -inf.
    const RayTail& tail(int dir) const { return dir > 0 ? state_->right : state_->left; }

private:
    struct State {
        std::string description;
        DecayClass decay;
        std::shared_ptr<const Eval> eval;
        RayTail left;
        RayTail right;
        DerivativeFactory derivative;
    };
    std::shared_ptr<const State> state_;
};

/// x -> f(x - a).
FunctionHandle shifted(const FunctionHandle& f, double a);
/// x -> f(c x), c > 0.
FunctionHandle scaled(const FunctionHandle& f, double c);
/// x -> sum_i w_i f_i(x).
FunctionHandle linear_combination(const std::vector<std::pair<Complex, FunctionHandle>>& terms);

namespace catalog {

/// exp(-((x - center)/sigma)^2). Default is exp(-x^2).
FunctionHandle gaussian(double sigma = 1.0, double center = 0.0);
/// 1 / (1 + ((x - center)/width)^2).
FunctionHandle lorentzian(double width = 1.0, double center = 0.0);
/// exp(i omega x).
FunctionHandle plane_wave(double omega = 1.0);
FunctionHandle cosine(double omega = 1.0);
FunctionHandle sine(double omega = 1.0);
/// exp(lambda x), lambda > 0. Bounded only toward -inf.
FunctionHandle exp_growth(double lambda = 1.0);
/// exp(-lambda x), lambda > 0. Bounded only toward +inf.
FunctionHandle exp_decay(double lambda = 1.0);
FunctionHandle constant(Complex value = 1.0);

/// Parses "NAME" or "NAME:param=value,param=value". Throws std::invalid_argument.
FunctionHandle parse(std::string_view spec);

/// Catalog names with their parameter names, for help text.
std::vector<std::string> names();

/// Physicists' Hermite polynomial H_n(u).
double hermite(int n, double u);

} // namespace catalog

} // namespace fracderiv
