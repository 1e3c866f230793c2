// Command-line front end: coeffs, norm, eval, verify, table.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fracderiv/errors.hpp"
#include "fracderiv/grid.hpp"
#include "fracderiv/normalization.hpp"
#include "fracderiv/operators.hpp"
#include "fracderiv/oracle.hpp"
#include "fracderiv/stencil.hpp"

using namespace fracderiv;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNotConverged = 3 };

struct OperatorArgs {
    std::string op = "riesz";
    double alpha = 0.5;
    int k = 1;
    double theta = 0.0;
    std::vector<double> angles;
    bool unsafe_theta = false;
    std::string function = "gaussian";
    double rel_tol = QuadratureConfig{}.rel_tol;
    double abs_tol = QuadratureConfig{}.abs_tol;

    OperatorSpec spec() const {
        OperatorSpec s;
        s.family = parse_family(op);
        s.alpha = alpha;
        s.k = k;
        s.theta = theta;
        s.angles = angles;
        s.unsafe_theta = unsafe_theta;
        return s;
    }
    QuadratureConfig config() const {
        QuadratureConfig c;
        c.rel_tol = rel_tol;
        c.abs_tol = abs_tol;
        return c;
    }
};

void add_operator_options(CLI::App* cmd, OperatorArgs& a, bool with_alpha) {
    cmd->add_option("--operator", a.op, "lw+, lw-, riesz, feller, feller-rot, central or hyper")
        ->required()
        ->check(CLI::IsMember({"lw+", "lw-", "riesz", "feller", "feller-rot", "central", "hyper"}));
    if (with_alpha) cmd->add_option("--alpha", a.alpha, "Order alpha > 0")->required();
    cmd->add_option("--k", a.k, "Stencil order for --operator central")->capture_default_str();
    cmd->add_option("--theta", a.theta, "Skewness for feller and feller-rot")->capture_default_str();
    cmd->add_option("--angles", a.angles, "Hyperspherical angles theta_1,...,theta_{n-1} (radians)")
        ->delimiter(',');
    cmd->add_flag("--unsafe-theta", a.unsafe_theta, "Allow feller theta outside |theta| <= min(alpha, 2-alpha)");
    cmd->add_option("--function", a.function,
                    "Catalog function NAME[:param=value,...]; one of: " + [] {
                        std::string s;
                        for (const auto& n : catalog::names()) s += (s.empty() ? "" : ", ") + n;
                        return s;
                    }())
        ->capture_default_str();
    cmd->add_option("--rel-tol", a.rel_tol, "Relative tolerance")->capture_default_str();
    cmd->add_option("--abs-tol", a.abs_tol, "Absolute tolerance")->capture_default_str();
}

// Writes to --output when given, stdout otherwise.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("cannot open {} for writing", path));
    out << text;
}

int run_coeffs(int k, const std::string& format) {
    const auto s = build_stencil(k);
    if (format == "json") {
        json coeffs = json::array();
        for (const auto& c : s.coefficients()) coeffs.push_back(c.str());
        std::cout << json{{"k", k}, {"offsets", s.offsets()}, {"coefficients", coeffs}}.dump(2) << '\n';
    } else {
        std::cout << "offset,coefficient\n";
        for (std::size_t n = 0; n < s.size(); ++n) {
            std::cout << s.offsets()[n] << ',' << s.coefficients()[n].str() << '\n';
        }
    }
    return kOk;
}

int run_norm(int k, double alpha, const std::string& format) {
    const auto r = prefactor(k, alpha);
    if (format == "json") {
        std::cout << json{{"k", r.k},
                          {"alpha", r.alpha},
                          {"prefactor", r.prefactor},
                          {"stencil_sum", r.sum_term},
                          {"trig_factor", r.trig_term},
                          {"sign", r.sign},
                          {"removable_point", r.at_removable_point}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << fmt::format("k            {}\nalpha        {:.17g}\nprefactor    {:.17g}\n"
                                 "stencil_sum  {:.17g}\ntrig_factor  {:.17g}\nsign         {:+d}\n"
                                 "removable    {}\n",
                                 r.k, r.alpha, r.prefactor, r.sum_term, r.trig_term, r.sign,
                                 r.at_removable_point ? "yes" : "no");
    }
    return kOk;
}

int run_eval(const OperatorArgs& a, double xmin, double xmax, int points, int threads,
             const std::string& format, const std::string& output) {
    const auto f = catalog::parse(a.function);
    const auto r = grid_eval(a.spec(), f, linspace(xmin, xmax, points), a.config(), threads);
    std::ostringstream ss;
    if (format == "json") {
        write_json(ss, r);
    } else {
        write_csv(ss, r);
    }
    emit(output, ss.str());
    for (const auto& m : r.messages) std::cerr << "warning: " << m << '\n';
    return r.all_converged() ? kOk : kNotConverged;
}

int run_table(const OperatorArgs& a, const std::vector<double>& alphas, double x,
              const std::string& format, const std::string& output) {
    const auto f = catalog::parse(a.function);
    auto spec = a.spec();
    bool all = true;
    json rows = json::array();
    std::ostringstream csv;
    csv << "alpha,re_value,im_value,error_estimate,converged\n";
    for (double alpha : alphas) {
        spec.alpha = alpha;
        const auto r = evaluate(spec, f, x, a.config());
        all = all && r.converged;
        csv << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{}\n", alpha, r.value.real(), r.value.imag(),
                           r.error_estimate, r.converged ? 1 : 0);
        rows.push_back({{"alpha", alpha},
                        {"re", r.value.real()},
                        {"im", r.value.imag()},
                        {"err", r.error_estimate},
                        {"converged", r.converged}});
    }
    if (format == "json") {
        emit(output, json{{"operator", a.op}, {"function", f.description()}, {"x", x}, {"rows", rows}}.dump(2) + "\n");
    } else {
        emit(output, csv.str());
    }
    return all ? kOk : kNotConverged;
}

std::string show(Complex z) {
    if (z.imag() == 0.0) return fmt::format("{:.10g}", z.real());
    return fmt::format("{:.10g}{:+.10g}i", z.real(), z.imag());
}

int run_verify_cmd(const std::string& suite, int k_max, const std::string& format) {
    const auto reports = oracle::run_verify(suite, k_max);
    bool all = true;
    json out = json::array();
    for (const auto& r : reports) {
        all = all && r.overall_pass;
        if (format == "json") {
            json cases = json::array();
            for (const auto& c : r.cases) {
                cases.push_back({{"description", c.description},
                                 {"expected", {c.expected.real(), c.expected.imag()}},
                                 {"actual", {c.actual.real(), c.actual.imag()}},
                                 {"tolerance", c.tolerance},
                                 {"pass", c.pass},
                                 {"informational", c.informational}});
            }
            out.push_back({{"suite", r.suite}, {"pass", r.overall_pass}, {"metrics", r.metrics}, {"cases", cases}});
            continue;
        }
        std::cout << fmt::format("[{}] {}\n", r.suite, r.overall_pass ? "PASS" : "FAIL");
        for (const auto& c : r.cases) {
            const char* tag = c.informational ? "INFO" : (c.pass ? "ok  " : "FAIL");
            std::cout << fmt::format("  {} {}: expected {} got {} (|diff| {:.2e}", tag, c.description,
                                     show(c.expected), show(c.actual), std::abs(c.actual - c.expected));
            if (!c.informational) std::cout << fmt::format(", tol {:.2e}", c.tolerance);
            std::cout << ")\n";
        }
        for (const auto& [name, v] : r.metrics) std::cout << fmt::format("  {} = {:.6g}\n", name, v);
    }
    if (format == "json") {
        std::cout << json{{"pass", all}, {"suites", out}}.dump(2) << '\n';
    } else {
        std::cout << (all ? "verify: all suites passed\n" : "verify: FAILED\n");
    }
    return all ? kOk : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional derivatives from central-difference singular integrals"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 1 verification failure, 2 usage error, 3 non-convergence.");

    std::string format = "csv";
    std::string output;

    int coeff_k = 1;
    auto* coeffs = app.add_subcommand("coeffs", "Exact stencil coefficients a_n for offsets r..-r");
    coeffs->add_option("--k", coeff_k, "Stencil order")->required()->check(CLI::Range(1, kDefaultMaxStencilOrder));
    coeffs->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    int norm_k = 1;
    double norm_alpha = 0.5;
    std::string norm_format = "text";
    auto* norm = app.add_subcommand("norm", "Normalization prefactor for order k and alpha in (0,k)");
    norm->add_option("--k", norm_k, "Stencil order")->required()->check(CLI::Range(1, kDefaultMaxStencilOrder));
    norm->add_option("--alpha", norm_alpha, "Order alpha")->required();
    norm->add_option("--format", norm_format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    OperatorArgs eval_args;
    double xmin = -5.0, xmax = 5.0;
    int points = 101, threads = 1;
    auto* eval = app.add_subcommand("eval", "Evaluate an operator on a uniform grid");
    add_operator_options(eval, eval_args, true);
    eval->add_option("--xmin", xmin, "Grid start")->capture_default_str();
    eval->add_option("--xmax", xmax, "Grid end")->capture_default_str();
    eval->add_option("--points", points, "Number of grid points")->capture_default_str()->check(CLI::PositiveNumber);
    eval->add_option("--threads", threads, "Worker threads; results do not depend on it")->capture_default_str();
    eval->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    eval->add_option("--output", output, "Output file (default stdout)");

    std::string suite = "all";
    int k_max = 4;
    std::string verify_format = "text";
    auto* verify = app.add_subcommand("verify", "Run verification suites; exit 0 iff all pass");
    verify->add_option("--suite", suite, "all, stencil, norm, limits, equivalence, symmetry or scaling")
        ->check(CLI::IsMember(oracle::suite_names()))
        ->capture_default_str();
    verify->add_option("--k-max", k_max, "Highest stencil order exercised")->check(CLI::Range(1, 8))->capture_default_str();
    verify->add_option("--format", verify_format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    OperatorArgs table_args;
    std::vector<double> alphas;
    double table_x = 0.0;
    auto* table = app.add_subcommand("table", "One row per alpha at a single point x");
    add_operator_options(table, table_args, false);
    table->add_option("--alphas", alphas, "Comma-separated orders")->required()->delimiter(',');
    table->add_option("--x", table_x, "Evaluation point")->capture_default_str();
    table->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    table->add_option("--output", output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*coeffs) return run_coeffs(coeff_k, format);
        if (*norm) return run_norm(norm_k, norm_alpha, norm_format);
        if (*eval) return run_eval(eval_args, xmin, xmax, points, threads, format, output);
        if (*verify) return run_verify_cmd(suite, k_max, verify_format);
        if (*table) return run_table(table_args, alphas, table_x, format, output);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNotConverged;
    } catch (const TailBoundError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNotConverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
