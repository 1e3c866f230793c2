#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracderiv/function.hpp"
#include "fracderiv/operators.hpp"
#include "fracderiv/quadrature.hpp"

namespace fracderiv {

struct GridResult {
    OperatorSpec spec;
    std::string function;
    QuadratureConfig config;
    /// UTC, ISO 8601.
    std::string timestamp;
    std::vector<double> x;
    std::vector<Complex> values;
    std::vector<double> errors;
    std::vector<bool> converged;
    /// One line per failed point.
    std::vector<std::string> messages;

    bool all_converged() const;
};

/// n evenly spaced points on [xmin, xmax], both ends included (n = 1 gives xmin).
std::vector<double> linspace(double xmin, double xmax, int n);

/**
 * @brief Evaluates the operator at every grid point.
 *
 * Points must be finite and strictly increasing. A point whose evaluation throws
 * NumericalError is recorded as NaN, not converged, with a message; DomainError
 * propagates. With threads > 1 points are split across workers; every point is
 * computed independently, so results do not depend on the thread count.
 */
GridResult grid_eval(const OperatorSpec& spec, const FunctionHandle& f,
                     const std::vector<double>& points, const QuadratureConfig& config = {},
                     int threads = 1);

/// Header x,re_value,im_value,error_estimate,converged; numbers with 17 significant digits.
void write_csv(std::ostream& out, const GridResult& r);
void write_json(std::ostream& out, const GridResult& r);

struct CsvRow {
    double x;
    Complex value;
    double error;
    bool converged;
};
/// Reads what write_csv emits. Throws std::runtime_error on malformed input.
std::vector<CsvRow> read_csv(std::istream& in);

} // namespace fracderiv
