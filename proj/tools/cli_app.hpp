#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coupon_delay/coupon_delay.hpp"

namespace coupon_delay::cli
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 2,
    exit_numeric = 3,
};

inline std::string csv_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline std::vector<int> parse_orders(const std::string& text)
{
    std::vector<int> orders;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        int r = 0;
        try
        {
            r = std::stoi(item, &used);
        }
        catch (const std::exception&)
        {
            throw DomainError("--orders: '" + item + "' is not an integer");
        }
        if (used != item.size() || r < 1)
            throw DomainError("--orders: entries must be positive integers");
        orders.push_back(r);
    }
    if (orders.empty())
        throw DomainError("--orders: empty list");
    return orders;
}

inline Regime make_regime(const std::string& name, std::int64_t m, std::int64_t n,
                          std::optional<double> beta)
{
    if (name == "fixed-m")
        return regime::FixedM{m};
    if (name == "super")
        return regime::Supercritical{};
    if (name == "fixed-n")
        return regime::FixedN{n};
    if (name == "critical")
    {
        if (!beta)
            throw DomainError("--regime critical needs --beta");
        if (!(*beta > 0.0))
            throw DomainError("--beta must be > 0");
        return regime::Critical{*beta};
    }
    throw DomainError("unknown regime '" + name + "'");
}

inline nlohmann::ordered_json target_json(const TargetLaw& law)
{
    nlohmann::ordered_json j;
    j["name"] = target_name(law);
    if (auto* g = std::get_if<target::GumbelWithLogShift>(&law))
        j["shift"] = g->shift;
    else if (auto* mx = std::get_if<target::MaxOfNormals>(&law))
        j["n"] = mx->n;
    return j;
}

namespace detail
{

struct Options
{
    double beta = 0.0;
    std::optional<double> beta_opt;
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::string orders = "1";
    double rel_tol = 1e-9;
    std::string regime;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    std::string mode;
    std::string out_path;
    bool timing = false;
};

class Timer
{
  public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline int cmd_alpha(const Options& o, std::ostream& out, const Timer& timer)
{
    if (!(o.beta > 0.0))
        throw DomainError("--beta must be > 0");
    const AlphaSolution sol = solve_alpha(o.beta);
    nlohmann::ordered_json j;
    j["command"] = "alpha";
    j["parameters"] = {{"beta", o.beta}};
    j["results"] = {
        {"alpha", sol.alpha},
        {"residual", sol.residual},
        {"iterations", sol.iterations},
        {"alpha_over_beta_minus_one", sol.alpha / o.beta - 1.0},
        {"sqrt_two_over_beta", std::sqrt(2.0 / o.beta)},
    };
    if (o.timing)
        j["wall_time_s"] = timer.seconds();
    out << j.dump(2) << '\n';
    return exit_ok;
}

inline int cmd_moments(const Options& o, std::ostream& out, const Timer& timer)
{
    const ProblemSize ps(o.m, o.n);
    const auto orders = parse_orders(o.orders);
    QuadratureConfig cfg;
    cfg.rel_tol = o.rel_tol;
    cfg.validate();

    std::string regime_label = o.regime;
    if (regime_label.empty())
        regime_label = ps.n >= 2 ? "fixed-m" : "fixed-n";
    const Regime reg = make_regime(regime_label, ps.m, ps.n, o.beta_opt);

    out << "m,n,order,value,abs_err,method,regime,asymptotic,ratio\n";
    for (int r : orders)
    {
        const MomentResult res = rising_moment(ps, r, cfg);
        std::string asym;
        std::string ratio;
        try
        {
            const double a = asymptotic_moment(ps, reg, r);
            asym = csv_number(a);
            ratio = csv_number(res.value / a);
        }
        catch (const DomainError&)
        {
            // prediction undefined here (e.g. n too small); leave the cells empty
        }
        out << ps.m << ',' << ps.n << ',' << r << ',' << csv_number(res.value) << ','
            << csv_number(res.abs_err) << ',' << to_string(res.method) << ',' << regime_label << ','
            << asym << ',' << ratio << '\n';
    }
    if (o.timing)
        out << "# wall_time_s=" << csv_number(timer.seconds()) << '\n';
    return exit_ok;
}

inline void write_samples(const SampleBatch& batch, const std::string& path)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw DomainError("cannot open output file '" + path + "'");
    const bool has_d = batch.d_values.has_value();
    const bool has_delta = batch.delta_values.has_value();
    file << (has_d && has_delta ? "d,delta" : (has_d ? "d" : "delta")) << '\n';
    for (std::size_t i = 0; i < batch.size(); ++i)
    {
        if (has_d)
            file << (*batch.d_values)[i];
        if (has_d && has_delta)
            file << ',';
        if (has_delta)
            file << csv_number((*batch.delta_values)[i]);
        file << '\n';
    }
    if (!file)
        throw DomainError("failed writing '" + path + "'");
}

inline nlohmann::ordered_json summary_of(std::span<const double> xs)
{
    const Estimate mean = mean_estimate(xs);
    nlohmann::ordered_json j;
    j["mean"] = mean.value;
    j["std_error"] = mean.std_error;
    j["variance"] = xs.size() >= 2 ? sample_variance(xs) : 0.0;
    j["min"] = *std::min_element(xs.begin(), xs.end());
    j["max"] = *std::max_element(xs.begin(), xs.end());
    return j;
}

inline int cmd_simulate(const Options& o, std::ostream& out, const Timer& timer)
{
    const ProblemSize ps(o.m, o.n);
    if (o.reps < 1)
        throw DomainError("--reps must be >= 1");
    const SimConfig cfg{ps, o.reps, o.seed, parse_sim_mode(o.mode)};
    const SampleBatch batch = simulate(cfg);
    if (!o.out_path.empty())
        write_samples(batch, o.out_path);

    nlohmann::ordered_json j;
    j["command"] = "simulate";
    j["parameters"] = {{"m", ps.m}, {"n", ps.n}, {"reps", o.reps}, {"mode", o.mode}};
    if (!o.out_path.empty())
        j["parameters"]["out"] = o.out_path;
    j["seed"] = o.seed;
    nlohmann::ordered_json results;
    if (batch.d_values)
    {
        std::vector<double> d(batch.d_values->begin(), batch.d_values->end());
        results["d"] = summary_of(d);
    }
    if (batch.delta_values)
        results["delta"] = summary_of(*batch.delta_values);
    j["results"] = results;
    if (o.timing)
        j["wall_time_s"] = timer.seconds();
    out << j.dump(2) << '\n';
    return exit_ok;
}

inline int cmd_limit_check(const Options& o, std::ostream& out, const Timer& timer)
{
    const ProblemSize ps(o.m, o.n);
    if (o.reps < 2)
        throw DomainError("--reps must be >= 2");
    const Regime reg = make_regime(o.regime, ps.m, ps.n, o.beta_opt);
    const SimConfig cfg{ps, o.reps, o.seed, parse_sim_mode(o.mode)};
    const SampleBatch batch = simulate(cfg);
    const KSReport report = ks_distance(batch, reg);

    nlohmann::ordered_json j;
    j["command"] = "limit-check";
    j["parameters"] = {{"regime", o.regime}, {"m", ps.m}, {"n", ps.n}, {"reps", o.reps}, {"mode", o.mode}};
    if (o.beta_opt)
        j["parameters"]["beta"] = *o.beta_opt;
    j["seed"] = o.seed;
    j["normalization"] = {
        {"center", report.normalization.center},
        {"scale", report.normalization.scale},
        {"target", target_json(report.normalization.target)},
    };
    j["results"] = {
        {"ks_statistic", report.statistic},
        {"reps", report.reps},
        {"variable", batch.d_values ? "d" : "delta"},
        {"critical_value_p01", kolmogorov_critical_value(report.reps, 0.01)},
    };
    if (o.timing)
        j["wall_time_s"] = timer.seconds();
    out << j.dump(2) << '\n';
    return exit_ok;
}

} // namespace detail

//! Runs one command. `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Packet delay of m-fold coupon collection: moments, limit laws, simulation"};
    app.name("coupon-delay");
    app.require_subcommand(1);
    detail::Options o;

    auto* alpha = app.add_subcommand("alpha", "Solve alpha - beta ln alpha = beta - beta ln beta + 1");
    alpha->add_option("--beta", o.beta, "beta > 0")->required();

    auto* moments = app.add_subcommand("moments", "Rising moments of D by quadrature, with asymptotics");
    moments->add_option("--m", o.m, "packets per user")->required();
    moments->add_option("--n", o.n, "users")->required();
    moments->add_option("--orders", o.orders, "comma-separated orders r")->capture_default_str();
    moments->add_option("--rel-tol", o.rel_tol, "relative tolerance")->capture_default_str();
    moments->add_option("--regime", o.regime, "fixed-m|critical|super|fixed-n for the asymptotic column");
    moments->add_option("--beta", o.beta_opt, "beta for the critical regime");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo samples of D and/or Delta");
    sim->add_option("--m", o.m)->required();
    sim->add_option("--n", o.n)->required();
    sim->add_option("--reps", o.reps)->required();
    sim->add_option("--seed", o.seed)->required();
    sim->add_option("--mode", o.mode, "discrete|poissonized|coupled")->default_val("discrete");
    sim->add_option("--out", o.out_path, "CSV file for the samples");

    auto* lc = app.add_subcommand("limit-check", "KS distance of normalized samples to the limit law");
    lc->add_option("--regime", o.regime, "fixed-m|critical|super|fixed-n")->required();
    lc->add_option("--m", o.m)->required();
    lc->add_option("--n", o.n)->required();
    lc->add_option("--beta", o.beta_opt);
    lc->add_option("--reps", o.reps)->required();
    lc->add_option("--seed", o.seed)->required();
    lc->add_option("--mode", o.mode, "discrete|poissonized|coupled")->default_val("poissonized");

    for (auto* sub : {alpha, moments, sim, lc})
        sub->add_flag("--timing", o.timing, "report wall time");

    std::reverse(args.begin(), args.end());
    try
    {
        app.parse(args);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const detail::Timer timer;
    try
    {
        if (*alpha)
            return detail::cmd_alpha(o, out, timer);
        if (*moments)
            return detail::cmd_moments(o, out, timer);
        if (*sim)
            return detail::cmd_simulate(o, out, timer);
        return detail::cmd_limit_check(o, out, timer);
    }
    catch (const NumericError& e)
    {
        err << "numeric failure: " << e.what() << " (best estimate " << e.best_estimate() << ")\n";
        return exit_numeric;
    }
    catch (const DomainError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::invalid_argument& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

} // namespace coupon_delay::cli
