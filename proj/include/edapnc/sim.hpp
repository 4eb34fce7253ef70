#ifndef EDAPNC_SIM_HPP
#define EDAPNC_SIM_HPP

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "edapnc/benchmarks.hpp"
#include "edapnc/capacity.hpp"
#include "edapnc/channel.hpp"
#include "edapnc/precoding.hpp"
#include "edapnc/version.hpp"
#include "edapnc/wsr.hpp"

namespace edapnc {

enum class Scheme
{
    kCapacityUb,
    kEdaExhaustive,
    kEdaAs1,
    kEdaAs2,
    kNaiveEda,
    kDfnc,
    kAnc // plug-in slot; no built-in evaluator
};

inline const char* to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::kCapacityUb: return "capacity_ub";
    case Scheme::kEdaExhaustive: return "eda_exhaustive";
    case Scheme::kEdaAs1: return "eda_as1";
    case Scheme::kEdaAs2: return "eda_as2";
    case Scheme::kNaiveEda: return "naive_eda";
    case Scheme::kDfnc: return "dfnc";
    case Scheme::kAnc: return "anc";
    }
    return "unknown";
}

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

inline Scheme parse_scheme(const std::string& name)
{
    for (Scheme s : {Scheme::kCapacityUb, Scheme::kEdaExhaustive, Scheme::kEdaAs1,
                     Scheme::kEdaAs2, Scheme::kNaiveEda, Scheme::kDfnc, Scheme::kAnc})
        if (name == to_string(s))
            return s;
    throw ConfigError("unknown scheme '" + name + "'");
}

/// Per-realization rate evaluator of an externally supplied scheme (the
/// analog-network-coding slot; no evaluator ships with the library).
using SchemeEvaluator =
    std::function<RatePair(const ChannelSet&, const PowerConfig&, double alpha)>;

/// One simulation run: dimensions, SNR grid, trial count, seed, scheme
/// selection and solver knobs. The unit the CLI and runners operate on.
struct Scenario
{
    int n_t = 2;
    int n_r = 2;
    FieldTag field = FieldTag::kReal;
    bool reciprocal = false;
    std::vector<double> snr_grid_db{15.0};
    int trials = 1000;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes{Scheme::kCapacityUb, Scheme::kEdaAs2};
    std::vector<double> alpha_grid{0.5};
    double delta = 0.02;
    ExhaustiveGrid grid;
    std::string output_path;
    int workers = 1;
    bool strict = false;
    SchemeEvaluator anc_evaluator; // required when schemes contain "anc"
};

inline void validate_scenario(const Scenario& sc)
{
    if (sc.n_r < 1 || sc.n_t < sc.n_r)
        throw ConfigError("scenario: need n_t >= n_r >= 1");
    if (sc.trials < 1)
        throw ConfigError("scenario: trials must be >= 1");
    if (sc.snr_grid_db.empty())
        throw ConfigError("scenario: snr grid must not be empty");
    if (sc.schemes.empty())
        throw ConfigError("scenario: scheme list must not be empty");
    if (!(sc.delta > 0.0) || sc.delta > 1.0)
        throw ConfigError("scenario: delta must be in (0,1]");
    if (sc.alpha_grid.empty())
        throw ConfigError("scenario: alpha grid must not be empty");
    double prev = -1.0;
    for (double a : sc.alpha_grid)
    {
        if (a < 0.0 || a > 1.0 || a <= prev)
            throw ConfigError("scenario: alpha grid must be strictly increasing in [0,1]");
        prev = a;
    }
    const int effective_n_r = sc.field == FieldTag::kComplex ? 2 * sc.n_r : sc.n_r;
    for (Scheme s : sc.schemes)
    {
        if (s == Scheme::kEdaExhaustive && effective_n_r != 2)
            throw ConfigError("scenario: eda_exhaustive supports (effective) n_r == 2 only");
        if (s == Scheme::kAnc && !sc.anc_evaluator)
            throw ConfigError("scenario: 'anc' is a plug-in slot; install an evaluator on "
                              "Scenario::anc_evaluator");
    }
    if (sc.workers < 0)
        throw ConfigError("scenario: workers must be >= 0");
}

struct CurvePoint
{
    double snr_db = 0.0;
    Scheme scheme = Scheme::kCapacityUb;
    double alpha = 0.5;
    double mean_r_a = 0.0;
    double mean_r_b = 0.0;
    double mean_sum = 0.0;
    double stderr_sum = 0.0;
    int trials_used = 0;
};

struct RunResult
{
    std::vector<CurvePoint> points;
    std::vector<RateRegion> regions; // filled by the region runner
    int solver_warnings = 0;
};

namespace detail {

// Deterministic worker pool: trials are handed out by an atomic counter and
// every result lands in its own slot, so aggregation order never depends on
// the number of workers.
template <typename Fn>
void parallel_trials(int trials, int workers, Fn&& body)
{
    if (workers <= 0)
        workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 1 || trials == 1)
    {
        for (int t = 0; t < trials; ++t)
            body(t);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true)
        {
            int t = next.fetch_add(1);
            if (t >= trials)
                return;
            try
            {
                body(t);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(workers, trials);
    pool.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

inline double stderr_of(std::span<const double> xs, double mean)
{
    if (xs.size() < 2)
        return 0.0;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        sq[i] = (xs[i] - mean) * (xs[i] - mean);
    double var = pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

struct TrialOutcome
{
    std::vector<RatePair> rates; // indexed by scheme position in the scenario
    int warnings = 0;
};

// Rates of every selected scheme on one realization at one (power, alpha)
// operating point. The relay covariance is optimized once and shared by the
// capacity bound and every achievable scheme, whose downlink terms coincide.
inline TrialOutcome evaluate_schemes(const ChannelSet& cs, const PowerConfig& pc, double alpha,
                                     const Scenario& sc)
{
    TrialOutcome out;
    out.rates.resize(sc.schemes.size());

    RelayCovariance relay = optimize_relay_covariance(cs.h_ra, cs.h_rb, pc.p_r, alpha);
    if (!relay.converged)
        ++out.warnings;
    const RatePair downlink{mimo_rate(cs.h_rb, relay.q_r), mimo_rate(cs.h_ra, relay.q_r)};

    std::optional<WsrSolution> sweep;
    const bool need_sweep =
        std::count(sc.schemes.begin(), sc.schemes.end(), Scheme::kEdaAs1) > 0 ||
        std::count(sc.schemes.begin(), sc.schemes.end(), Scheme::kEdaAs2) > 0;
    if (need_sweep)
        sweep = wsr_gamma_sweep(cs.h_ar, cs.h_br, pc.p_t, alpha, {.delta = sc.delta});

    for (std::size_t i = 0; i < sc.schemes.size(); ++i)
    {
        switch (sc.schemes[i])
        {
        case Scheme::kCapacityUb:
            out.rates[i] = capacity_ub_pair(cs, pc, alpha, relay);
            break;
        case Scheme::kEdaAs1:
            out.rates[i] = achievable_rate_pair(cs, pc, sweep->cfg, relay.q_r);
            break;
        case Scheme::kEdaAs2:
        {
            WsrSolution refined =
                wsr_alternating_refinement(cs.h_ar, cs.h_br, pc.p_t, alpha, *sweep);
            out.rates[i] = achievable_rate_pair(cs, pc, refined.cfg, relay.q_r);
            break;
        }
        case Scheme::kEdaExhaustive:
        {
            WsrSolution ex = wsr_exhaustive_2d(cs.h_ar, cs.h_br, pc.p_t, alpha, sc.grid);
            out.rates[i] = achievable_rate_pair(cs, pc, ex.cfg, relay.q_r);
            break;
        }
        case Scheme::kNaiveEda:
        {
            WsrSolution naive = naive_eda_solution(cs, pc, alpha, sc.delta);
            out.rates[i] = achievable_rate_pair(cs, pc, naive.cfg, relay.q_r);
            break;
        }
        case Scheme::kDfnc:
        {
            bool ok = true;
            out.rates[i] = dfnc_point(cs, pc, alpha, relay, &ok);
            if (!ok)
                ++out.warnings;
            break;
        }
        case Scheme::kAnc:
            out.rates[i] = sc.anc_evaluator(cs, pc, alpha);
            break;
        }
    }
    return out;
}

inline ChannelSet trial_channel(const Scenario& sc, int trial)
{
    std::uint64_t sub = derive_subseed(sc.seed, static_cast<std::uint64_t>(trial));
    if (sc.field == FieldTag::kComplex)
        return complex_to_real(generate_complex_channel(sc.n_t, sc.n_r, sc.reciprocal, sub));
    return generate_real_channel(sc.n_t, sc.n_r, sc.reciprocal, sub);
}

inline PowerConfig power_at(double snr_db)
{
    PowerConfig pc;
    pc.p_t = snr_to_power(snr_db);
    pc.p_r = snr_to_relay_power(snr_db); // SNR_R = SNR convention
    return pc;
}

} // namespace detail

/// Monte-Carlo sum-rate curve at alpha = 1/2: one CurvePoint per (SNR,
/// scheme). Channel realizations are shared across SNR points and schemes;
/// complex scenarios are expanded to the real model and reported per complex
/// channel use (half the real-model rates). Output is bit-identical for any
/// worker count.
inline RunResult run_sum_rate_curve(const Scenario& sc)
{
    validate_scenario(sc);
    const double alpha = 0.5;
    const double rate_scale = sc.field == FieldTag::kComplex ? 0.5 : 1.0;
    const std::size_t n_snr = sc.snr_grid_db.size();
    const std::size_t n_sch = sc.schemes.size();

    // results[snr][scheme][trial]
    std::vector<std::vector<std::vector<RatePair>>> rates(
        n_snr, std::vector<std::vector<RatePair>>(n_sch, std::vector<RatePair>(sc.trials)));
    std::atomic<int> warnings{0};

    detail::parallel_trials(sc.trials, sc.workers, [&](int trial) {
        ChannelSet cs = detail::trial_channel(sc, trial);
        for (std::size_t si = 0; si < n_snr; ++si)
        {
            PowerConfig pc = detail::power_at(sc.snr_grid_db[si]);
            detail::TrialOutcome res = detail::evaluate_schemes(cs, pc, alpha, sc);
            warnings += res.warnings;
            for (std::size_t k = 0; k < n_sch; ++k)
                rates[si][k][trial] = {res.rates[k].r_a * rate_scale,
                                       res.rates[k].r_b * rate_scale};
        }
    });

    RunResult out;
    out.solver_warnings = warnings.load();
    for (std::size_t si = 0; si < n_snr; ++si)
        for (std::size_t k = 0; k < n_sch; ++k)
        {
            std::vector<double> ra(sc.trials), rb(sc.trials), sum(sc.trials);
            for (int t = 0; t < sc.trials; ++t)
            {
                ra[t] = rates[si][k][t].r_a;
                rb[t] = rates[si][k][t].r_b;
                sum[t] = ra[t] + rb[t];
            }
            CurvePoint p;
            p.snr_db = sc.snr_grid_db[si];
            p.scheme = sc.schemes[k];
            p.alpha = alpha;
            p.mean_r_a = pairwise_sum(ra) / sc.trials;
            p.mean_r_b = pairwise_sum(rb) / sc.trials;
            p.mean_sum = pairwise_sum(sum) / sc.trials;
            p.stderr_sum = detail::stderr_of(sum, p.mean_sum);
            p.trials_used = sc.trials;
            out.points.push_back(p);
        }
    return out;
}

/// Rate-region trace at one SNR: sweeps the scenario's alpha grid, averaging
/// rate pairs across trials, and emits one RateRegion per scheme (plus the
/// flat CurvePoint rows for CSV output).
inline RunResult run_rate_region(const Scenario& sc, double snr_db)
{
    validate_scenario(sc);
    const double rate_scale = sc.field == FieldTag::kComplex ? 0.5 : 1.0;
    const std::size_t n_alpha = sc.alpha_grid.size();
    const std::size_t n_sch = sc.schemes.size();
    const PowerConfig pc = detail::power_at(snr_db);

    // results[alpha][scheme][trial]
    std::vector<std::vector<std::vector<RatePair>>> rates(
        n_alpha, std::vector<std::vector<RatePair>>(n_sch, std::vector<RatePair>(sc.trials)));
    std::atomic<int> warnings{0};

    detail::parallel_trials(sc.trials, sc.workers, [&](int trial) {
        ChannelSet cs = detail::trial_channel(sc, trial);
        for (std::size_t ai = 0; ai < n_alpha; ++ai)
        {
            detail::TrialOutcome res =
                detail::evaluate_schemes(cs, pc, sc.alpha_grid[ai], sc);
            warnings += res.warnings;
            for (std::size_t k = 0; k < n_sch; ++k)
                rates[ai][k][trial] = {res.rates[k].r_a * rate_scale,
                                       res.rates[k].r_b * rate_scale};
        }
    });

    RunResult out;
    out.solver_warnings = warnings.load();
    for (std::size_t k = 0; k < n_sch; ++k)
    {
        RateRegion region;
        region.scheme = to_string(sc.schemes[k]);
        for (std::size_t ai = 0; ai < n_alpha; ++ai)
        {
            std::vector<double> ra(sc.trials), rb(sc.trials), sum(sc.trials);
            for (int t = 0; t < sc.trials; ++t)
            {
                ra[t] = rates[ai][k][t].r_a;
                rb[t] = rates[ai][k][t].r_b;
                sum[t] = ra[t] + rb[t];
            }
            CurvePoint p;
            p.snr_db = snr_db;
            p.scheme = sc.schemes[k];
            p.alpha = sc.alpha_grid[ai];
            p.mean_r_a = pairwise_sum(ra) / sc.trials;
            p.mean_r_b = pairwise_sum(rb) / sc.trials;
            p.mean_sum = pairwise_sum(sum) / sc.trials;
            p.stderr_sum = detail::stderr_of(sum, p.mean_sum);
            p.trials_used = sc.trials;
            out.points.push_back(p);
            region.points.emplace_back(p.alpha, RatePair{p.mean_r_a, p.mean_r_b});
        }
        out.regions.push_back(std::move(region));
    }
    return out;
}

struct AsymptoticRow
{
    int n_t = 0;
    double mean_gap = 0.0;         // capacity UB sum minus refined-scheme sum
    double mean_gap_uniform = 0.0; // gap of the identity-rotation uniform profile
    int trials_used = 0;
};

/// Mean sum-rate gap to the capacity bound as the user antenna count grows.
/// The second column evaluates the fixed configuration K = I with a uniform
/// amplitude profile scaled onto the power constraint.
inline std::vector<AsymptoticRow> run_asymptotic_gap(int n_r, std::span<const int> n_t_list,
                                                     double snr_db, int trials,
                                                     std::uint64_t seed, int workers = 1,
                                                     double delta = 0.02)
{
    if (n_t_list.empty())
        throw ConfigError("asymptotic: n_t list must not be empty");
    int prev = 0;
    for (int n_t : n_t_list)
    {
        if (n_t < n_r || n_t <= prev)
            throw ConfigError("asymptotic: n_t list must be ascending with n_t >= n_r");
        prev = n_t;
    }
    if (trials < 1)
        throw ConfigError("asymptotic: trials must be >= 1");

    const double alpha = 0.5;
    const PowerConfig pc = detail::power_at(snr_db);
    const std::size_t n_cfg = n_t_list.size();
    std::vector<std::vector<double>> gap(n_cfg, std::vector<double>(trials));
    std::vector<std::vector<double>> gap_uniform(n_cfg, std::vector<double>(trials));

    detail::parallel_trials(trials, workers, [&](int trial) {
        for (std::size_t ci = 0; ci < n_cfg; ++ci)
        {
            // stream id: one channel per (trial, n_t) cell
            std::uint64_t sub = derive_subseed(
                seed, static_cast<std::uint64_t>(trial) * n_cfg + ci);
            ChannelSet cs = generate_real_channel(n_t_list[ci], n_r, false, sub);

            RelayCovariance relay =
                optimize_relay_covariance(cs.h_ra, cs.h_rb, pc.p_r, alpha);
            double ub = capacity_ub_pair(cs, pc, alpha, relay).sum();

            WsrSolution sweep = wsr_gamma_sweep(cs.h_ar, cs.h_br, pc.p_t, alpha,
                                                {.delta = delta});
            WsrSolution refined =
                wsr_alternating_refinement(cs.h_ar, cs.h_br, pc.p_t, alpha, sweep);
            double achieved = achievable_rate_pair(cs, pc, refined.cfg, relay.q_r).sum();
            gap[ci][trial] = ub - achieved;

            PrecoderConfig uniform;
            uniform.rotation = Eigen::MatrixXd::Identity(n_r, n_r);
            double amp = std::sqrt(static_cast<double>(n_t_list[ci]) * (0.5 * pc.p_t) / n_r);
            uniform.amp_a = Eigen::VectorXd::Constant(n_r, amp);
            uniform.amp_b = uniform.amp_a;
            double used = transmit_power(cs.h_ar, cs.h_br, uniform);
            double rescale = std::sqrt(pc.p_t / used);
            uniform.amp_a *= rescale;
            uniform.amp_b *= rescale;
            double fixed = achievable_rate_pair(cs, pc, uniform, relay.q_r).sum();
            gap_uniform[ci][trial] = ub - fixed;
        }
    });

    std::vector<AsymptoticRow> rows;
    for (std::size_t ci = 0; ci < n_cfg; ++ci)
    {
        AsymptoticRow row;
        row.n_t = n_t_list[ci];
        row.mean_gap = pairwise_sum(gap[ci]) / trials;
        row.mean_gap_uniform = pairwise_sum(gap_uniform[ci]) / trials;
        row.trials_used = trials;
        rows.push_back(row);
    }
    return rows;
}

// ---------- configuration files ----------
//
// Flat key-value text, one `key = value` per line, '#' starts a comment.
// Lists are comma-separated. Keys mirror the Scenario fields.

namespace detail {

inline std::string trim(const std::string& s)
{
    std::size_t b = s.find_first_not_of(" \t\r\n");
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

inline bool parse_bool(const std::string& v, const std::string& key)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ConfigError("config: bad boolean for '" + key + "': " + v);
}

} // namespace detail

inline void apply_config_entry(Scenario& sc, const std::string& key, const std::string& value)
{
    try
    {
        if (key == "n_t")
            sc.n_t = std::stoi(value);
        else if (key == "n_r")
            sc.n_r = std::stoi(value);
        else if (key == "field")
        {
            if (value == "real")
                sc.field = FieldTag::kReal;
            else if (value == "complex")
                sc.field = FieldTag::kComplex;
            else
                throw ConfigError("config: field must be real or complex");
        }
        else if (key == "reciprocal")
            sc.reciprocal = detail::parse_bool(value, key);
        else if (key == "snr_grid_db")
        {
            sc.snr_grid_db.clear();
            for (const auto& v : detail::split_list(value))
                sc.snr_grid_db.push_back(std::stod(v));
        }
        else if (key == "trials")
            sc.trials = std::stoi(value);
        else if (key == "seed")
            sc.seed = std::stoull(value);
        else if (key == "schemes")
        {
            sc.schemes.clear();
            for (const auto& v : detail::split_list(value))
                sc.schemes.push_back(parse_scheme(v));
        }
        else if (key == "alpha_grid")
        {
            sc.alpha_grid.clear();
            for (const auto& v : detail::split_list(value))
                sc.alpha_grid.push_back(std::stod(v));
        }
        else if (key == "delta")
            sc.delta = std::stod(value);
        else if (key == "output")
            sc.output_path = value;
        else if (key == "workers")
            sc.workers = std::stoi(value);
        else if (key == "strict")
            sc.strict = detail::parse_bool(value, key);
        else if (key == "angle_steps")
            sc.grid.angle_steps = std::stoi(value);
        else if (key == "power_steps")
            sc.grid.power_steps = std::stoi(value);
        else if (key == "refine_factor")
            sc.grid.refine_factor = std::stoi(value);
        else if (key == "refine_passes")
            sc.grid.refine_passes = std::stoi(value);
        else if (key == "unitary_only")
            sc.grid.unitary_only = detail::parse_bool(value, key);
        else
            throw ConfigError("config: unknown key '" + key + "'");
    }
    catch (const std::invalid_argument&)
    {
        throw ConfigError("config: bad value for '" + key + "': " + value);
    }
    catch (const std::out_of_range&)
    {
        throw ConfigError("config: value out of range for '" + key + "': " + value);
    }
}

inline Scenario parse_scenario(std::istream& is)
{
    Scenario sc;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line))
    {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        apply_config_entry(sc, detail::trim(line.substr(0, eq)),
                           detail::trim(line.substr(eq + 1)));
    }
    return sc;
}

inline Scenario load_scenario_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open config file: " + path);
    return parse_scenario(is);
}

// ---------- CSV output ----------

namespace detail {

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string scheme_list(const Scenario& sc)
{
    std::string out;
    for (std::size_t i = 0; i < sc.schemes.size(); ++i)
        out += std::string(i ? "," : "") + to_string(sc.schemes[i]);
    return out;
}

inline std::string double_list(std::span<const double> xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += std::string(i ? "," : "") + format_double(xs[i]);
    return out;
}

} // namespace detail

inline void write_csv_header(std::ostream& os, const Scenario& sc)
{
    os << "# edapnc " << kVersion << "\n";
    os << "# scenario: n_t=" << sc.n_t << " n_r=" << sc.n_r << " field="
       << (sc.field == FieldTag::kComplex ? "complex" : "real")
       << " reciprocal=" << (sc.reciprocal ? 1 : 0) << " trials=" << sc.trials
       << " seed=" << sc.seed << "\n";
    os << "# schemes: " << detail::scheme_list(sc)
       << " alpha_grid: " << detail::double_list(sc.alpha_grid)
       << " snr_grid_db: " << detail::double_list(sc.snr_grid_db) << "\n";
    os << "# solver: delta=" << detail::format_double(sc.delta)
       << " pg_tol=1e-08 pg_max_iter=10000 wf_bisect_rel=1e-15"
       << " exhaustive=" << sc.grid.angle_steps << "x" << sc.grid.power_steps << "r"
       << sc.grid.refine_factor << "p" << sc.grid.refine_passes
       << (sc.grid.unitary_only ? " unitary_only" : "") << "\n";
    os << "snr_db,scheme,alpha,mean_r_a,mean_r_b,mean_sum,stderr,trials\n";
}

inline std::string csv_row(const CurvePoint& p)
{
    std::string out = detail::format_double(p.snr_db);
    out += ",";
    out += to_string(p.scheme);
    for (double v : {p.alpha, p.mean_r_a, p.mean_r_b, p.mean_sum, p.stderr_sum})
        out += "," + detail::format_double(v);
    out += "," + std::to_string(p.trials_used) + "\n";
    return out;
}

inline void write_curve_csv(std::ostream& os, const Scenario& sc, const RunResult& result)
{
    write_csv_header(os, sc);
    for (const CurvePoint& p : result.points)
        os << csv_row(p);
}

inline void write_asymptotic_csv(std::ostream& os, std::span<const AsymptoticRow> rows,
                                 double snr_db, std::uint64_t seed)
{
    os << "# edapnc " << kVersion << "\n";
    os << "# asymptotic gap at snr_db=" << detail::format_double(snr_db) << " seed=" << seed
       << "\n";
    os << "n_t,mean_gap,mean_gap_uniform,trials\n";
    for (const AsymptoticRow& r : rows)
        os << r.n_t << "," << detail::format_double(r.mean_gap) << ","
           << detail::format_double(r.mean_gap_uniform) << "," << r.trials_used << "\n";
}

/// Resolves an output path against EDAPNC_OUTPUT_DIR when the path is relative.
inline std::string resolve_output_path(const std::string& path)
{
    if (path.empty() || path.front() == '/')
        return path;
    const char* dir = std::getenv("EDAPNC_OUTPUT_DIR");
    if (dir == nullptr || *dir == '\0')
        return path;
    std::string base(dir);
    if (base.back() != '/')
        base += '/';
    return base + path;
}

} // namespace edapnc

#endif
