#include "fracderiv/grid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "fracderiv/errors.hpp"

namespace fracderiv {

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

void check_points(const std::vector<double>& points) {
    if (points.empty()) throw std::invalid_argument("grid has no points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) {
            throw std::invalid_argument(fmt::format("grid point {} is not finite", i));
        }
        if (i > 0 && !(points[i] > points[i - 1])) {
            throw std::invalid_argument("grid points must be strictly increasing");
        }
    }
}

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

double parse_double(const std::string& s, std::size_t line) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw std::runtime_error(fmt::format("line {}: '{}' is not a number", line, s));
    }
    return v;
}

} // namespace

bool GridResult::all_converged() const {
    return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

std::vector<double> linspace(double xmin, double xmax, int n) {
    if (n < 1) throw std::invalid_argument("need at least one point");
    if (!std::isfinite(xmin) || !std::isfinite(xmax)) throw std::invalid_argument("grid bounds must be finite");
    if (n > 1 && !(xmax > xmin)) throw std::invalid_argument("xmax must exceed xmin");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            n == 1 ? xmin : xmin + (xmax - xmin) * static_cast<double>(i) / (n - 1);
    }
    if (n > 1) out.back() = xmax;
    return out;
}

GridResult grid_eval(const OperatorSpec& spec, const FunctionHandle& f,
                     const std::vector<double>& points, const QuadratureConfig& config,
                     int threads) {
    validate(spec);
    config.validate();
    check_points(points);

    const std::size_t n = points.size();
    GridResult r;
    r.spec = spec;
    r.function = f.description();
    r.config = config;
    r.timestamp = utc_now();
    r.x = points;
    r.values.assign(n, Complex{std::numeric_limits<double>::quiet_NaN(), 0.0});
    r.errors.assign(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> ok(n, 0);
    std::vector<std::string> failure(n);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const auto e = evaluate(spec, f, points[i], config);
                r.values[i] = e.value;
                r.errors[i] = e.error_estimate;
                ok[i] = e.converged ? 1 : 0;
                if (!e.converged) {
                    failure[i] = fmt::format("x = {}: tolerance not met (error estimate {:.3g})",
                                             points[i], e.error_estimate);
                }
            } catch (const NumericalError& ex) {
                failure[i] = fmt::format("x = {}: {}", points[i], ex.what());
            }
        }
    };

    const std::size_t workers =
        std::clamp<std::size_t>(threads < 1 ? 1 : static_cast<std::size_t>(threads), 1, n);
    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t b = std::min(n, w * chunk);
            const std::size_t e = std::min(n, b + chunk);
            pool.emplace_back([&, w, b, e] {
                try {
                    work(b, e);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    r.converged.assign(ok.begin(), ok.end());
    for (auto& m : failure) {
        if (!m.empty()) r.messages.push_back(std::move(m));
    }
    return r;
}

void write_csv(std::ostream& out, const GridResult& r) {
    out << "x,re_value,im_value,error_estimate,converged\n";
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        out << fmt::format("{},{},{},{},{}\n", fmt17(r.x[i]), fmt17(r.values[i].real()),
                           fmt17(r.values[i].imag()), fmt17(r.errors[i]), r.converged[i] ? 1 : 0);
    }
}

void write_json(std::ostream& out, const GridResult& r) {
    using nlohmann::json;
    json op = {{"family", std::string(to_string(r.spec.family))}, {"alpha", r.spec.alpha}};
    switch (r.spec.family) {
    case Family::central: op["k"] = r.spec.k; break;
    case Family::feller:
        op["theta"] = r.spec.theta;
        op["unsafe_theta"] = r.spec.unsafe_theta;
        break;
    case Family::feller_rotation: op["theta"] = r.spec.theta; break;
    case Family::hyperspherical: op["angles"] = r.spec.angles; break;
    default: break;
    }
    json cfg = {{"rel_tol", r.config.rel_tol},
                {"abs_tol", r.config.abs_tol},
                {"split_point", r.config.split_point},
                {"truncation", r.config.truncation},
                {"max_subdivisions", r.config.max_subdivisions},
                {"max_evaluations", r.config.max_evaluations}};
    json re = json::array(), im = json::array();
    for (const auto& v : r.values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    json doc = {{"operator", op},          {"function", r.function}, {"config", cfg},
                {"timestamp", r.timestamp}, {"x", r.x},               {"re", re},
                {"im", im},                 {"err", r.errors},        {"converged", r.converged},
                {"messages", r.messages}};
    out << doc.dump(2) << '\n';
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "x,re_value,im_value,error_estimate,converged") {
        throw std::runtime_error("missing or unexpected CSV header");
    }
    std::vector<CsvRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) {
            throw std::runtime_error(fmt::format("line {}: expected 5 fields, got {}", lineno, cells.size()));
        }
        CsvRow row{};
        row.x = parse_double(cells[0], lineno);
        row.value = {parse_double(cells[1], lineno), parse_double(cells[2], lineno)};
        row.error = parse_double(cells[3], lineno);
        if (cells[4] != "0" && cells[4] != "1") {
            throw std::runtime_error(fmt::format("line {}: converged must be 0 or 1", lineno));
        }
        row.converged = cells[4] == "1";
        rows.push_back(row);
    }
    return rows;
}

} // namespace fracderiv
