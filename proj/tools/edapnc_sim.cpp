// Command-line Monte-Carlo simulator for EDA-PNC over MIMO two-way relay
// channels: sum-rate curves, rate-region traces, the asymptotic-gap
// experiment and a single-realization diagnostic dump.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "edapnc/edapnc.hpp"

namespace {

using namespace edapnc;

struct CommonFlags
{
    std::string config_path;
    std::optional<int> n_t, n_r, trials, workers;
    std::optional<std::uint64_t> seed;
    std::optional<double> delta;
    std::optional<std::string> field, output, schemes, snr_list, alpha_list;
    std::optional<bool> reciprocal;
    bool strict = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--config", f.config_path, "scenario config file (key = value lines)");
    cmd->add_option("--nt", f.n_t, "user antennas n_t");
    cmd->add_option("--nr", f.n_r, "relay antennas n_r");
    cmd->add_option("--trials", f.trials, "Monte-Carlo realizations");
    cmd->add_option("--seed", f.seed, "master RNG seed");
    cmd->add_option("--field", f.field, "real|complex");
    cmd->add_option("--snr", f.snr_list, "comma-separated SNR grid in dB");
    cmd->add_option("--alpha", f.alpha_list, "comma-separated weight grid in [0,1]");
    cmd->add_option("--schemes", f.schemes, "comma-separated scheme list");
    cmd->add_option("--delta", f.delta, "gamma sweep step");
    cmd->add_option("--output", f.output, "output CSV path ('' = stdout)");
    cmd->add_option("--workers", f.workers, "worker threads (0 = hardware)");
    cmd->add_option("--reciprocal", f.reciprocal, "downlink = transpose of uplink");
    cmd->add_flag("--strict", f.strict, "exit nonzero on solver warnings");
}

Scenario build_scenario(const CommonFlags& f)
{
    Scenario sc;
    if (!f.config_path.empty())
        sc = load_scenario_file(f.config_path);
    if (f.n_t)
        sc.n_t = *f.n_t;
    if (f.n_r)
        sc.n_r = *f.n_r;
    if (f.trials)
        sc.trials = *f.trials;
    if (f.seed)
        sc.seed = *f.seed;
    if (f.delta)
        sc.delta = *f.delta;
    if (f.workers)
        sc.workers = *f.workers;
    if (f.reciprocal)
        sc.reciprocal = *f.reciprocal;
    if (f.field)
        apply_config_entry(sc, "field", *f.field);
    if (f.snr_list)
        apply_config_entry(sc, "snr_grid_db", *f.snr_list);
    if (f.alpha_list)
        apply_config_entry(sc, "alpha_grid", *f.alpha_list);
    if (f.schemes)
        apply_config_entry(sc, "schemes", *f.schemes);
    if (f.output)
        sc.output_path = *f.output;
    if (f.strict)
        sc.strict = true;
    return sc;
}

int emit(const Scenario& sc, const std::string& csv, int warnings)
{
    if (sc.output_path.empty())
    {
        std::cout << csv;
    }
    else
    {
        std::string path = resolve_output_path(sc.output_path);
        std::ofstream os(path, std::ios::binary);
        if (!os)
        {
            std::cerr << "error: cannot open output file: " << path << "\n";
            return 1;
        }
        os << csv;
        std::cerr << "wrote " << path << "\n";
    }
    if (warnings > 0)
        std::cerr << "# warnings: " << warnings
                  << " solver non-convergence event(s) across all trials\n";
    if (warnings > 0 && sc.strict)
        return 1;
    return 0;
}

int cmd_sum_rate(const CommonFlags& flags)
{
    Scenario sc = build_scenario(flags);
    validate_scenario(sc);
    RunResult result = run_sum_rate_curve(sc);
    std::ostringstream os;
    write_curve_csv(os, sc, result);
    return emit(sc, os.str(), result.solver_warnings);
}

int cmd_region(const CommonFlags& flags)
{
    Scenario sc = build_scenario(flags);
    validate_scenario(sc);
    std::ostringstream os;
    write_csv_header(os, sc);
    int warnings = 0;
    for (double snr : sc.snr_grid_db)
    {
        RunResult result = run_rate_region(sc, snr);
        warnings += result.solver_warnings;
        for (const CurvePoint& p : result.points)
            os << csv_row(p);
    }
    return emit(sc, os.str(), warnings);
}

int cmd_asymptotic(int n_r, const std::string& nt_list, double snr_db, int trials,
                   std::uint64_t seed, int workers, const std::string& output)
{
    std::vector<int> nts;
    for (const auto& tok : detail::split_list(nt_list))
    {
        try
        {
            nts.push_back(std::stoi(tok));
        }
        catch (const std::exception&)
        {
            throw ConfigError("asymptotic: bad --nt-list entry '" + tok + "'");
        }
    }
    auto rows = run_asymptotic_gap(n_r, nts, snr_db, trials, seed, workers);
    std::ostringstream os;
    write_asymptotic_csv(os, rows, snr_db, seed);
    Scenario sink;
    sink.output_path = output;
    return emit(sink, os.str(), 0);
}

int cmd_single(std::uint64_t seed, int n_t, int n_r, double snr_db, double alpha,
               const std::string& field, double delta, const std::string& scheme_name,
               const std::string& dump_channel, const std::string& channel_file)
{
    ChannelSet cs;
    std::optional<ComplexChannelSet> ccs;
    if (!channel_file.empty())
    {
        LoadedChannel loaded = load_channel_file(channel_file);
        if (std::holds_alternative<ChannelSet>(loaded))
            cs = std::get<ChannelSet>(loaded);
        else
        {
            ccs = std::get<ComplexChannelSet>(loaded);
            cs = complex_to_real(*ccs);
        }
        n_t = cs.n_t;
        n_r = cs.n_r;
    }
    else if (field == "complex")
    {
        ccs = generate_complex_channel(n_t, n_r, false, seed);
        cs = complex_to_real(*ccs);
    }
    else
    {
        cs = generate_real_channel(n_t, n_r, false, seed);
    }
    if (!dump_channel.empty())
    {
        if (ccs)
            save_channel_file(dump_channel, *ccs);
        else
            save_channel_file(dump_channel, cs);
        std::cerr << "wrote " << dump_channel << "\n";
    }

    PowerConfig pc;
    pc.p_t = snr_to_power(snr_db);
    pc.p_r = snr_to_relay_power(snr_db);

    std::printf("edapnc %s single-realization diagnostic\n", kVersion);
    std::printf("n_t=%d n_r=%d field=%s seed=%llu snr_db=%.6g alpha=%.6g\n", cs.n_t, cs.n_r,
                ccs ? "complex(expanded)" : "real", static_cast<unsigned long long>(seed),
                snr_db, alpha);
    std::printf("P_T=%.10g P_R=%.10g (linear, unit noise)\n", pc.p_t, pc.p_r);

    RelayCovariance relay = optimize_relay_covariance(cs.h_ra, cs.h_rb, pc.p_r, alpha);
    WsrSolution sol;
    if (scheme_name == "eda_as1")
        sol = wsr_gamma_sweep(cs.h_ar, cs.h_br, pc.p_t, alpha, {.delta = delta});
    else if (scheme_name == "eda_as2")
        sol = wsr_alternating_refinement(
            cs.h_ar, cs.h_br, pc.p_t, alpha,
            wsr_gamma_sweep(cs.h_ar, cs.h_br, pc.p_t, alpha, {.delta = delta}));
    else if (scheme_name == "eda_exhaustive")
        sol = wsr_exhaustive_2d(cs.h_ar, cs.h_br, pc.p_t, alpha);
    else if (scheme_name == "naive_eda")
        sol = naive_eda_solution(cs, pc, alpha, delta);
    else
        throw ConfigError("single: scheme must be one of eda_as1, eda_as2, eda_exhaustive, "
                          "naive_eda");

    std::printf("scheme %s", scheme_name.c_str());
    if (sol.cfg.gamma)
        std::printf(" (gamma=%.10g)", *sol.cfg.gamma);
    std::printf("\n");

    std::ostringstream mat;
    mat << sol.cfg.rotation.format(Eigen::IOFormat(10, 0, " ", "; ", "", "", "[", "]"));
    std::printf("rotation K = %s\n", mat.str().c_str());
    std::ostringstream pa, pb;
    pa << sol.cfg.amp_a.transpose().format(Eigen::IOFormat(10, 0, " ", " ", "", "", "[", "]"));
    pb << sol.cfg.amp_b.transpose().format(Eigen::IOFormat(10, 0, " ", " ", "", "", "[", "]"));
    std::printf("psi_a = %s  psi_b = %s\n", pa.str().c_str(), pb.str().c_str());

    PrecoderMatrices fm = build_precoders(cs.h_ar, cs.h_br, sol.cfg);
    Eigen::MatrixXd kinv = sol.cfg.rotation.inverse();
    double align = std::max((kinv * cs.h_ar * fm.f_a -
                             Eigen::MatrixXd(sol.cfg.amp_a.asDiagonal()))
                                .cwiseAbs()
                                .maxCoeff(),
                            (kinv * cs.h_br * fm.f_b -
                             Eigen::MatrixXd(sol.cfg.amp_b.asDiagonal()))
                                .cwiseAbs()
                                .maxCoeff());
    double used = transmit_power(cs.h_ar, cs.h_br, sol.cfg);

    RatePair up{sol.r_a_ul, sol.r_b_ul};
    RatePair down = downlink_rates(cs.h_ra, cs.h_rb, relay.q_r);
    RatePair pair = up.min_with(down);
    std::printf("uplink rates:   R_A=%.10g R_B=%.10g (wsr=%.10g)\n", up.r_a, up.r_b, sol.wsr);
    std::printf("downlink caps:  R_A=%.10g R_B=%.10g%s\n", down.r_a, down.r_b,
                relay.converged ? "" : "  [relay solver not converged]");
    std::printf("achievable pair: R_A=%.10g R_B=%.10g sum=%.10g\n", pair.r_a, pair.r_b,
                pair.sum());
    std::printf("transmit power: used=%.10g budget=%.10g residual=%.3g\n", used, pc.p_t,
                used - pc.p_t);
    std::printf("alignment residual max|K^-1 H F - Psi| = %.3g%s\n", align,
                align < 1e-8 ? " (< 1e-8)" : "  [EXCEEDS 1e-8]");

    RatePair ub = capacity_ub_pair(cs, pc, alpha, relay);
    std::printf("capacity_ub:    R_A=%.10g R_B=%.10g sum=%.10g\n", ub.r_a, ub.r_b, ub.sum());
    return align < 1e-8 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"EDA-PNC rate simulator for MIMO two-way relay channels"};
    app.require_subcommand(1);

    CommonFlags sum_flags, region_flags;
    CLI::App* sum_cmd = app.add_subcommand("sum-rate", "Monte-Carlo sum-rate curve (alpha=1/2)");
    add_common_flags(sum_cmd, sum_flags);
    CLI::App* region_cmd =
        app.add_subcommand("region", "rate-region trace over the alpha grid, per SNR");
    add_common_flags(region_cmd, region_flags);

    int asy_nr = 2, asy_trials = 500, asy_workers = 1;
    std::uint64_t asy_seed = 1;
    double asy_snr = 15.0;
    std::string asy_nts = "2,3,4", asy_output;
    CLI::App* asy_cmd = app.add_subcommand("asymptotic", "capacity-gap trend over n_t");
    asy_cmd->add_option("--nr", asy_nr, "relay antennas");
    asy_cmd->add_option("--nt-list", asy_nts, "ascending comma-separated n_t values");
    asy_cmd->add_option("--snr", asy_snr, "SNR in dB");
    asy_cmd->add_option("--trials", asy_trials, "realizations per n_t");
    asy_cmd->add_option("--seed", asy_seed, "master RNG seed");
    asy_cmd->add_option("--workers", asy_workers, "worker threads");
    asy_cmd->add_option("--output", asy_output, "output CSV path ('' = stdout)");

    std::uint64_t single_seed = 1;
    int single_nt = 2, single_nr = 2;
    double single_snr = 15.0, single_alpha = 0.5, single_delta = 0.02;
    std::string single_field = "real", single_scheme = "eda_as2";
    std::string dump_channel, channel_file;
    CLI::App* single_cmd =
        app.add_subcommand("single", "one realization with a full diagnostic dump");
    single_cmd->add_option("--seed", single_seed, "RNG seed of the realization");
    single_cmd->add_option("--nt", single_nt, "user antennas");
    single_cmd->add_option("--nr", single_nr, "relay antennas");
    single_cmd->add_option("--snr", single_snr, "SNR in dB");
    single_cmd->add_option("--alpha", single_alpha, "rate weight");
    single_cmd->add_option("--field", single_field, "real|complex");
    single_cmd->add_option("--delta", single_delta, "gamma sweep step");
    single_cmd->add_option("--scheme", single_scheme,
                           "eda_as1|eda_as2|eda_exhaustive|naive_eda");
    single_cmd->add_option("--dump-channel", dump_channel, "save the realization to a file");
    single_cmd->add_option("--channel-file", channel_file, "replay a saved realization");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (sum_cmd->parsed())
            return cmd_sum_rate(sum_flags);
        if (region_cmd->parsed())
            return cmd_region(region_flags);
        if (asy_cmd->parsed())
            return cmd_asymptotic(asy_nr, asy_nts, asy_snr, asy_trials, asy_seed, asy_workers,
                                  asy_output);
        if (single_cmd->parsed())
            return cmd_single(single_seed, single_nt, single_nr, single_snr, single_alpha,
                              single_field, single_delta, single_scheme, dump_channel,
                              channel_file);
    }
    catch (const ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
