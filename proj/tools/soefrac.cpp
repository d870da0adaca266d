// soefrac <kernel|run|convergence|compare> [flags]
//
// Exit codes: 0 success, 1 usage error, 2 numerical or module error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soefrac/soefrac.hpp"

namespace
{

namespace fs = std::filesystem;

constexpr int exit_usage  = 1;
constexpr int exit_module = 2;

struct usage_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
    {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Flat key=value file to long-form flags. Blank lines and '#' comments are skipped.
std::vector<std::string> config_args(const fs::path& file)
{
    std::ifstream in(file);
    if (!in)
    {
        throw usage_error("cannot read config file " + file.string());
    }
    std::vector<std::string> args;
    std::string line;
    int number = 0;
    while (std::getline(in, line))
    {
        ++number;
        line = trim(line);
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw usage_error(file.string() + ":" + std::to_string(number) + ": expected key=value");
        }
        std::string key   = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0)
        {
            key.erase(0, 2);
        }
        if (key.empty() || key == "config")
        {
            throw usage_error(file.string() + ":" + std::to_string(number) + ": invalid key");
        }
        if (key == "no-cache")
        {
            if (value == "true" || value == "1")
            {
                args.push_back("--no-cache");
            }
            else if (value != "false" && value != "0")
            {
                throw usage_error(file.string() + ":" + std::to_string(number) +
                                  ": no-cache must be true or false");
            }
            continue;
        }
        args.push_back("--" + key);
        // multi-valued options take whitespace-separated values
        std::istringstream words(value);
        for (std::string w; words >> w;)
        {
            args.push_back(w);
        }
    }
    return args;
}

/// Moves --config values into flags placed directly after the subcommand, so
/// later command-line flags override them.
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    std::vector<std::string> rest;
    std::vector<std::string> from_file;
    for (std::size_t i = 0; i < args.size(); ++i)
    {
        const std::string& a = args[i];
        if (a == "--config")
        {
            if (i + 1 >= args.size())
            {
                throw usage_error("--config requires a file name");
            }
            auto more = config_args(args[++i]);
            from_file.insert(from_file.end(), more.begin(), more.end());
        }
        else if (a.rfind("--config=", 0) == 0)
        {
            auto more = config_args(a.substr(9));
            from_file.insert(from_file.end(), more.begin(), more.end());
        }
        else
        {
            rest.push_back(a);
        }
    }
    if (from_file.empty())
    {
        return rest;
    }
    const auto sub = std::find_if(rest.begin(), rest.end(),
                                  [](const std::string& a) { return !a.empty() && a[0] != '-'; });
    if (sub == rest.end())
    {
        throw usage_error("--config needs a subcommand");
    }
    rest.insert(sub + 1, from_file.begin(), from_file.end());
    return rest;
}

struct CacheFlags
{
    std::optional<std::string> dir;
    bool disabled = false;
};

struct ProblemFlags
{
    std::string problem;
    double lambda = -1.0;
    int n_cells   = 1000;
    int nx        = 64;
    int ny        = 64;
    double M      = 0.05;
    double eps    = 0.03;

    soefrac::CHParams ch() const
    {
        soefrac::CHParams p;
        p.nx  = nx;
        p.ny  = ny;
        p.M   = M;
        p.eps = eps;
        return p;
    }
};

struct Options
{
    // kernel
    double alpha = 0.0;
    double h     = 0.0;
    double T     = 1.0;
    std::optional<double> tol;
    int n_samples = 100;
    std::optional<std::string> out;
    CacheFlags cache;

    // run / convergence / compare
    ProblemFlags problem;
    std::string scheme;
    std::optional<double> theta;
    int h_min_exp = 6;
    int h_max_exp = 12;
    std::vector<double> snapshot_at;
    std::string snapshot_prefix = "snapshot";
};

void add_kernel_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--tol", o.tol, "AAA relative tolerance");
    cmd->add_option("--n-samples", o.n_samples, "Logarithmic sample count on [h, T]")
        ->check(CLI::Range(20, 100000));
}

void add_cache_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--kernel-cache", o.cache.dir, "Kernel cache directory");
    cmd->add_flag("--no-cache", o.cache.disabled, "Always rebuild kernels");
}

void add_problem_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--lambda", o.problem.lambda, "Scalar problem coefficient (<= 0)");
    cmd->add_option("--n-cells", o.problem.n_cells, "Heat problem interior points");
    cmd->add_option("--nx", o.problem.nx, "Cahn-Hilliard grid width");
    cmd->add_option("--ny", o.problem.ny, "Cahn-Hilliard grid height");
    cmd->add_option("--M", o.problem.M, "Cahn-Hilliard mobility");
    cmd->add_option("--eps", o.problem.eps, "Cahn-Hilliard surface parameter");
}

CLI::Option* add_scheme_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--theta", o.theta, "Theta of the theta-scheme")->check(CLI::Range(0.0, 1.0));
    return cmd->add_option("--scheme", o.scheme, "Time stepper")
        ->check(CLI::IsMember({"theta", "ie", "mcn"}));
}

double default_tol(const std::string& problem)
{
    return problem == "ch2d" ? 1e-12 : 1e-13;
}

soefrac::KernelSettings kernel_settings(const Options& o, const std::string& problem)
{
    return {o.tol.value_or(default_tol(problem)), o.n_samples};
}

soefrac::KernelProvider kernel_provider(const Options& o)
{
    if (o.cache.disabled)
    {
        return {};
    }
    auto dir = soefrac::default_cache_dir(o.cache.dir ? std::optional<fs::path>(*o.cache.dir)
                                                      : std::nullopt);
    auto cache = std::make_shared<soefrac::KernelCache>(dir);
    auto mutex = std::make_shared<std::mutex>();
    return [cache, mutex](double alpha, double h, double T, const soefrac::KernelSettings& ks) {
        std::lock_guard lock(*mutex);
        return cache->get(alpha, h, T, ks.tol, ks.n_samples);
    };
}

void check_theta(const Options& o)
{
    if (o.scheme == "theta" && !o.theta)
    {
        throw usage_error("--theta is required with --scheme theta");
    }
    if (o.scheme != "theta" && o.theta)
    {
        throw usage_error("--theta is only valid with --scheme theta");
    }
}

void check_time(const Options& o)
{
    if (!(o.h <= o.T))
    {
        throw usage_error("--h must not exceed --T");
    }
}

/// Writes `content` to --out, or to standard output when --out is absent.
void emit(const Options& o, const std::string& content)
{
    if (o.out)
    {
        soefrac::write_file_atomic(*o.out, content);
    }
    else
    {
        std::cout << content;
    }
}

/// Summary lines go to standard output unless it carries the CSV.
std::ostream& summary_stream(const Options& o)
{
    return o.out ? std::cout : std::cerr;
}

int cmd_kernel(const Options& o)
{
    const double tol = o.tol.value_or(1e-12);
    const auto k     = soefrac::build_kernel(o.alpha, o.h, o.T, tol, o.n_samples);
    soefrac::save_kernel(*o.out, k);
    const bool exact = k.alpha == 0.0 || k.alpha == 1.0;
    const double eps_ra = soefrac::spectrum_sup_error(k);
    const double e_ra   = exact ? 0.0 : soefrac::time_domain_error(k);
    std::cout << "alpha=" << soefrac::format_real(k.alpha) << " m=" << k.modes()
              << " c_inf=" << soefrac::format_real(k.c_inf)
              << " eps_ra=" << soefrac::format_real(eps_ra)
              << " E_ra=" << soefrac::format_real(e_ra) << '\n';
    return 0;
}

std::string grid_csv(const Eigen::VectorXd& u, int nx, int ny)
{
    std::string out;
    for (int iy = 0; iy < ny; ++iy)
    {
        for (int ix = 0; ix < nx; ++ix)
        {
            out += soefrac::format_real(u(iy * nx + ix));
            out += ix + 1 < nx ? ',' : '\n';
        }
    }
    return out;
}

int cmd_run(const Options& o)
{
    check_theta(o);
    check_time(o);
    if (!o.snapshot_at.empty() && o.problem.problem != "ch2d")
    {
        throw usage_error("--snapshot-at is only valid for ch2d");
    }
    const auto scheme = soefrac::parse_scheme(o.scheme);
    const auto ks     = kernel_settings(o, o.problem.problem);
    const auto k      = soefrac::provide_kernel(kernel_provider(o), o.alpha, o.h, o.T, ks);
    const double theta = o.theta.value_or(0.5);
    auto& log = summary_stream(o);

    std::string head = "problem=" + o.problem.problem + " alpha=" + soefrac::format_real(o.alpha) +
                       " scheme=" + o.scheme + " h=" + soefrac::format_real(o.h) +
                       " T=" + soefrac::format_real(o.T) + " m=" + std::to_string(k.modes());

    if (o.problem.problem == "scalar")
    {
        const auto op = soefrac::scalar_operator({o.problem.lambda});
        soefrac::Observers<double> obs;
        const double lambda = o.problem.lambda;
        const double alpha  = o.alpha;
        obs.error = [alpha, lambda](double t, const double& u) {
            return std::abs(soefrac::scalar_analytic(alpha, lambda, t) - u);
        };
        const auto rec = soefrac::run(1.0, op, k, scheme, o.h, o.T, obs, theta);
        emit(o, soefrac::run_record_csv(rec));
        log << head << " final_norm=" << soefrac::format_real(rec.norm.back())
            << " final_err=" << soefrac::format_real(rec.err.back()) << '\n';
    }
    else if (o.problem.problem == "heat1d")
    {
        const auto op   = soefrac::heat_operator({o.problem.n_cells});
        const auto grid = op.grid();
        soefrac::Observers<Eigen::VectorXd> obs;
        const double alpha = o.alpha;
        obs.error = [&op, &grid, alpha](double t, const Eigen::VectorXd& u) {
            return op.norm(Eigen::VectorXd(soefrac::heat_analytic(alpha, t, grid) - u));
        };
        const auto rec = soefrac::run(soefrac::heat_initial(op), op, k, scheme, o.h, o.T, obs, theta);
        emit(o, soefrac::run_record_csv(rec));
        log << head << " final_norm=" << soefrac::format_real(rec.norm.back())
            << " final_err=" << soefrac::format_real(rec.err.back()) << '\n';
    }
    else
    {
        const auto op = soefrac::ch_operator(o.problem.ch());
        const auto u0 = soefrac::ch_initial(op);
        const double m0 = op.mass(u0);
        double drift = 0.0;
        std::map<long, double> wanted; // step index -> requested time
        for (double ts : o.snapshot_at)
        {
            const double steps = ts / o.h;
            const long n = std::lround(steps);
            if (!(ts >= 0.0 && ts <= o.T) || std::abs(steps - static_cast<double>(n)) > 1e-9)
            {
                throw usage_error("--snapshot-at times must be multiples of h within [0, T]");
            }
            wanted[n] = ts;
        }
        soefrac::Observers<Eigen::VectorXd> obs;
        obs.energy  = [&op](const Eigen::VectorXd& u) { return op.energy(u); };
        obs.on_step = [&](long n, double, const Eigen::VectorXd& u) {
            drift = std::max(drift, std::abs(op.mass(u) - m0));
            if (const auto it = wanted.find(n); it != wanted.end())
            {
                soefrac::write_file_atomic(o.snapshot_prefix + "_t" +
                                               soefrac::format_real(it->second) + ".csv",
                                           grid_csv(u, o.problem.nx, o.problem.ny));
            }
        };
        const auto rec = soefrac::run(u0, op, k, scheme, o.h, o.T, obs, theta);
        emit(o, soefrac::run_record_csv(rec));
        log << head << " mass=" << soefrac::format_real(m0)
            << " mass_drift=" << soefrac::format_real(drift)
            << " energy_initial=" << soefrac::format_real(rec.energy.front())
            << " energy_final=" << soefrac::format_real(rec.energy.back()) << '\n';
    }
    return 0;
}

int cmd_convergence(const Options& o)
{
    check_theta(o);
    if (o.h_max_exp - o.h_min_exp + 1 < 4)
    {
        throw usage_error("the exponent range must contain at least 4 step sizes");
    }
    const auto scheme   = soefrac::parse_scheme(o.scheme);
    const auto h_list   = soefrac::dyadic_steps(o.h_min_exp, o.h_max_exp);
    const auto ks       = kernel_settings(o, o.problem.problem);
    const auto provider = kernel_provider(o);
    const double theta  = o.theta.value_or(0.5);
    if (!(h_list.front() <= o.T))
    {
        throw usage_error("the largest step 2^-h_min_exp must not exceed --T");
    }

    soefrac::ConvergenceResult result;
    if (o.problem.problem == "scalar")
    {
        result = soefrac::scalar_convergence({o.problem.lambda}, scheme, o.alpha, h_list, o.T, ks,
                                             provider, theta);
    }
    else if (o.problem.problem == "heat1d")
    {
        result = soefrac::heat_convergence({o.problem.n_cells}, scheme, o.alpha, h_list, o.T, ks,
                                           provider, theta);
    }
    else
    {
        if (scheme == soefrac::Scheme::theta)
        {
            throw soefrac::precondition_error("ch2d: the theta-scheme is not supported");
        }
        result = soefrac::ch_convergence(o.problem.ch(), scheme, o.alpha, h_list, o.T, ks, provider);
    }
    emit(o, soefrac::convergence_csv(result));
    summary_stream(o) << "problem=" << o.problem.problem << " scheme=" << o.scheme
                      << " alpha=" << soefrac::format_real(o.alpha)
                      << " slope=" << soefrac::format_real(result.slope) << '\n';
    return 0;
}

int cmd_compare(const Options& o)
{
    check_theta(o);
    check_time(o);
    if (o.problem.problem != "scalar")
    {
        throw usage_error("compare supports --problem scalar only");
    }
    const auto scheme = soefrac::parse_scheme(o.scheme);
    const auto ks     = kernel_settings(o, "scalar");
    const auto k      = soefrac::provide_kernel(kernel_provider(o), o.alpha, o.h, o.T, ks);
    const auto op     = soefrac::scalar_operator({o.problem.lambda});

    std::vector<double> t, u_scheme, u_oracle;
    soefrac::Observers<double> s_obs;
    s_obs.on_step = [&](long, double tn, const double& u) {
        t.push_back(tn);
        u_scheme.push_back(u);
    };
    soefrac::Observers<double> o_obs;
    o_obs.on_step = [&](long, double, const double& u) { u_oracle.push_back(u); };
    soefrac::run(1.0, op, k, scheme, o.h, o.T, s_obs, o.theta.value_or(0.5));
    soefrac::volterra_reference(1.0, op, o.alpha, o.h, o.T, o_obs);

    std::string csv = "t,u_scheme,u_oracle,u_analytic,diff\n";
    double max_diff = 0.0;
    double max_err  = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        const double exact = soefrac::scalar_analytic(o.alpha, o.problem.lambda, t[i]);
        const double diff  = std::abs(u_scheme[i] - u_oracle[i]);
        max_diff = std::max(max_diff, diff);
        max_err  = std::max(max_err, std::abs(u_scheme[i] - exact));
        csv += soefrac::format_real(t[i]) + ',' + soefrac::format_real(u_scheme[i]) + ',' +
               soefrac::format_real(u_oracle[i]) + ',' + soefrac::format_real(exact) + ',' +
               soefrac::format_real(diff) + '\n';
    }
    emit(o, csv);
    summary_stream(o) << "alpha=" << soefrac::format_real(o.alpha) << " scheme=" << o.scheme
                      << " h=" << soefrac::format_real(o.h)
                      << " max_diff=" << soefrac::format_real(max_diff)
                      << " max_err_analytic=" << soefrac::format_real(max_err) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    try
    {
        args = expand_config(args);
    }
    catch (const usage_error& e)
    {
        std::cerr << "soefrac: " << e.what() << '\n';
        return exit_usage;
    }

    Options o;
    CLI::App app{"Fractional ODE solver with sum-of-exponentials kernel compression", "soefrac"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_help_all_flag("--help-all", "Show help for all subcommands");
    app.footer("Any command also accepts --config FILE with key=value lines; "
               "command-line flags override file values.");

    auto* kernel = app.add_subcommand("kernel", "Build a kernel, write its JSON file and print a summary");
    kernel->add_option("--alpha", o.alpha, "Fractional order")->required()->check(CLI::Range(0.0, 1.0));
    kernel->add_option("--h", o.h, "Finest time scale")->required()->check(CLI::PositiveNumber);
    kernel->add_option("--T", o.T, "Horizon")->check(CLI::PositiveNumber);
    kernel->add_option("--out", o.out, "Kernel JSON file")->required();
    add_kernel_flags(kernel, o);

    auto* run = app.add_subcommand("run", "Run one problem and write its time series as CSV");
    run->add_option("--problem", o.problem.problem, "Problem")->required()
        ->check(CLI::IsMember({"scalar", "heat1d", "ch2d"}));
    run->add_option("--alpha", o.alpha, "Fractional order")->required()->check(CLI::Range(0.0, 1.0));
    add_scheme_flags(run, o)->required();
    run->add_option("--h", o.h, "Time step")->required()->check(CLI::PositiveNumber);
    run->add_option("--T", o.T, "Final time")->check(CLI::PositiveNumber);
    run->add_option("--out", o.out, "CSV file (default: standard output)");
    run->add_option("--snapshot-at", o.snapshot_at, "ch2d: times of field snapshots")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    run->add_option("--snapshot-prefix", o.snapshot_prefix, "ch2d: snapshot file prefix");
    add_problem_flags(run, o);
    add_kernel_flags(run, o);
    add_cache_flags(run, o);

    auto* conv = app.add_subcommand("convergence", "Relative errors for h = 2^-e and the fitted slope");
    conv->add_option("--problem", o.problem.problem, "Problem")->required()
        ->check(CLI::IsMember({"scalar", "heat1d", "ch2d"}));
    conv->add_option("--alpha", o.alpha, "Fractional order")->required()->check(CLI::Range(0.0, 1.0));
    add_scheme_flags(conv, o)->required();
    conv->add_option("--h-min-exp", o.h_min_exp, "Smallest exponent e (largest step)");
    conv->add_option("--h-max-exp", o.h_max_exp, "Largest exponent e (smallest step)")
        ->check(CLI::Range(0, 30));
    conv->add_option("--T", o.T, "Final time")->check(CLI::PositiveNumber);
    conv->add_option("--out", o.out, "CSV file (default: standard output)");
    add_problem_flags(conv, o);
    add_kernel_flags(conv, o);
    add_cache_flags(conv, o);

    auto* cmp = app.add_subcommand("compare", "Compare a scheme with the direct quadrature solver");
    o.problem.problem = "scalar";
    o.scheme          = "ie";
    cmp->add_option("--problem", o.problem.problem, "Problem (scalar only)");
    cmp->add_option("--alpha", o.alpha, "Fractional order")->required()->check(CLI::Range(0.0, 1.0));
    add_scheme_flags(cmp, o);
    cmp->add_option("--h", o.h, "Time step")->required()->check(CLI::PositiveNumber);
    cmp->add_option("--T", o.T, "Final time")->check(CLI::PositiveNumber);
    cmp->add_option("--lambda", o.problem.lambda, "Scalar problem coefficient (<= 0)");
    cmp->add_option("--out", o.out, "CSV file (default: standard output)");
    add_kernel_flags(cmp, o);
    add_cache_flags(cmp, o);

    try
    {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try
    {
        if (*kernel)
        {
            return cmd_kernel(o);
        }
        if (*run)
        {
            return cmd_run(o);
        }
        if (*conv)
        {
            return cmd_convergence(o);
        }
        return cmd_compare(o);
    }
    catch (const usage_error& e)
    {
        std::cerr << "soefrac: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "soefrac: " << e.what() << '\n';
        return exit_module;
    }
}
