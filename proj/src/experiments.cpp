#include "hclab/experiments.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "hclab/errors.hpp"
#include "hclab/parallel.hpp"

namespace hclab {

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::asymmetry: return "asymmetry";
        case ExperimentKind::voter: return "voter";
        case ExperimentKind::halves: return "halves";
    }
    return "unknown";
}

std::string to_string(HalvesSource source) {
    return source == HalvesSource::contagion ? "contagion" : "latent_trend";
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    switch (kind) {
        case ExperimentKind::asymmetry:
            cfg.n = 400;
            cfg.replications = 5000;
            break;
        case ExperimentKind::voter:
            cfg.n = 200;
            cfg.replications = 30;
            break;
        case ExperimentKind::halves:
            cfg.n = 200;
            cfg.replications = 200;
            break;
    }
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ArgumentError("invalid config: " + msg); };
    auto probability = [&](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) fail(std::string(name) + " must lie in [0,1]");
    };
    if (cfg.replications < 1) fail("replications must be >= 1");
    if (cfg.n < 2) fail("n must be >= 2");
    if (cfg.workers < 1) fail("workers must be >= 1");
    switch (cfg.kind) {
        case ExperimentKind::asymmetry:
            if (!(cfg.noise_sd > 0.0)) fail("noise_sd must be positive");
            if (cfg.nominations < 1) fail("nominations must be >= 1");
            if (!std::isfinite(cfg.trend)) fail("trend must be finite");
            break;
        case ExperimentKind::voter:
            probability(cfg.p_in, "p_in");
            probability(cfg.p_out, "p_out");
            if (cfg.p_out > cfg.p_in) fail("p_out must not exceed p_in");
            if (cfg.n % 2 != 0) fail("n must be even for the two-cluster network");
            if (!(cfg.flip_prob >= 0.0 && cfg.flip_prob < 0.5)) fail("flip_prob must lie in [0, 0.5)");
            if (cfg.checkpoint_stride < 1) fail("checkpoint_stride must be >= 1");
            break;
        case ExperimentKind::halves:
            if (cfg.periods < 2) fail("periods must be >= 2");
            if (cfg.halves_repetitions < 1) fail("halves_repetitions must be >= 1");
            if (cfg.permutations < 1) fail("permutations must be >= 1");
            if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha must lie in (0,1)");
            if (cfg.n < 8) fail("n must be >= 8 for the halves test");
            if (cfg.halves_source == HalvesSource::contagion) {
                if (!(cfg.contagion_noise_sd > 0.0)) fail("contagion_noise_sd must be positive");
                if (!(cfg.contagion_degree > 0.0 && cfg.contagion_degree < static_cast<double>(cfg.n - 1)))
                    fail("contagion_degree must lie in (0, n-1)");
            } else {
                if (!(cfg.noise_sd > 0.0)) fail("noise_sd must be positive");
                if (cfg.nominations < 1) fail("nominations must be >= 1");
            }
            break;
    }
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ArgumentError("config key '" + key + "': cannot parse '" + text + "'");
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ArgumentError("config key '" + key + "': expected true/false, got '" + text + "'");
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    using sz = std::size_t;
    if (key == "kind") {
        if (value == "asymmetry") cfg.kind = ExperimentKind::asymmetry;
        else if (value == "voter") cfg.kind = ExperimentKind::voter;
        else if (value == "halves") cfg.kind = ExperimentKind::halves;
        else throw ArgumentError("unknown experiment kind '" + value + "'");
    } else if (key == "n") cfg.n = parse_number<sz>(key, value);
    else if (key == "replications") cfg.replications = parse_number<sz>(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "workers") cfg.workers = parse_number<sz>(key, value);
    else if (key == "noise_sd") cfg.noise_sd = parse_number<double>(key, value);
    else if (key == "trend") cfg.trend = parse_number<double>(key, value);
    else if (key == "nominations") cfg.nominations = parse_number<sz>(key, value);
    else if (key == "homophilous") cfg.homophilous = parse_bool(key, value);
    else if (key == "exclude_isolates") cfg.exclude_isolates = parse_bool(key, value);
    else if (key == "own_lag0") cfg.own_lag0 = parse_bool(key, value);
    else if (key == "p_in") cfg.p_in = parse_number<double>(key, value);
    else if (key == "p_out") cfg.p_out = parse_number<double>(key, value);
    else if (key == "steps") cfg.steps = parse_number<sz>(key, value);
    else if (key == "checkpoint_stride") cfg.checkpoint_stride = parse_number<sz>(key, value);
    else if (key == "flip_prob") cfg.flip_prob = parse_number<double>(key, value);
    else if (key == "halves_source") {
        if (value == "contagion") cfg.halves_source = HalvesSource::contagion;
        else if (value == "latent_trend") cfg.halves_source = HalvesSource::latent_trend;
        else throw ArgumentError("halves_source must be contagion or latent_trend");
    } else if (key == "periods") cfg.periods = parse_number<sz>(key, value);
    else if (key == "strength") cfg.strength = parse_number<double>(key, value);
    else if (key == "halves_repetitions") cfg.halves_repetitions = parse_number<sz>(key, value);
    else if (key == "permutations") cfg.permutations = parse_number<sz>(key, value);
    else if (key == "alpha") cfg.alpha = parse_number<double>(key, value);
    else if (key == "contagion_noise_sd") cfg.contagion_noise_sd = parse_number<double>(key, value);
    else if (key == "contagion_degree") cfg.contagion_degree = parse_number<double>(key, value);
    else throw LookupError("unknown config key '" + key + "'");
}

std::map<std::string, std::string> config_entries(const ExperimentConfig& cfg) {
    std::map<std::string, std::string> e;
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    e["kind"] = to_string(cfg.kind);
    e["n"] = std::to_string(cfg.n);
    e["replications"] = std::to_string(cfg.replications);
    e["seed"] = std::to_string(cfg.seed);
    switch (cfg.kind) {
        case ExperimentKind::asymmetry:
            e["noise_sd"] = format_double(cfg.noise_sd);
            e["trend"] = format_double(cfg.trend);
            e["nominations"] = std::to_string(cfg.nominations);
            e["homophilous"] = b(cfg.homophilous);
            e["exclude_isolates"] = b(cfg.exclude_isolates);
            e["own_lag0"] = b(cfg.own_lag0);
            break;
        case ExperimentKind::voter:
            e["p_in"] = format_double(cfg.p_in);
            e["p_out"] = format_double(cfg.p_out);
            e["steps"] = std::to_string(cfg.steps);
            e["checkpoint_stride"] = std::to_string(cfg.checkpoint_stride);
            e["flip_prob"] = format_double(cfg.flip_prob);
            break;
        case ExperimentKind::halves:
            e["halves_source"] = to_string(cfg.halves_source);
            e["periods"] = std::to_string(cfg.periods);
            e["halves_repetitions"] = std::to_string(cfg.halves_repetitions);
            e["permutations"] = std::to_string(cfg.permutations);
            e["alpha"] = format_double(cfg.alpha);
            if (cfg.halves_source == HalvesSource::contagion) {
                e["strength"] = format_double(cfg.strength);
                e["contagion_noise_sd"] = format_double(cfg.contagion_noise_sd);
                e["contagion_degree"] = format_double(cfg.contagion_degree);
            } else {
                e["noise_sd"] = format_double(cfg.noise_sd);
                e["trend"] = format_double(cfg.trend);
                e["nominations"] = std::to_string(cfg.nominations);
            }
            break;
    }
    return e;
}

// ---------------------------------------------------------------- asymmetry

namespace {
// Stream tags keep the randomness of each stage independent.
constexpr std::uint64_t kTagAsymmetry = 1;
constexpr std::uint64_t kTagVoterNetwork = 2;
constexpr std::uint64_t kTagVoterHomophilous = 3;
constexpr std::uint64_t kTagVoterControl = 4;
constexpr std::uint64_t kTagHalvesData = 5;
constexpr std::uint64_t kTagHalvesTest = 6;
}  // namespace

AsymmetryReplication run_asymmetry_replication(const ExperimentConfig& cfg, std::size_t index) {
    Rng rng = derive_stream(cfg.seed, index, kTagAsymmetry);
    AsymmetryReplication rep;
    rep.index = index;

    const TraitAssignment traits = sample_latent_uniform(cfg.n, rng);
    const SocialNetwork net = cfg.homophilous ? nomination_network(traits, cfg.nominations, rng)
                                              : uniform_nomination_network(cfg.n, cfg.nominations, rng);
    for (NodeId i = 0; i < net.size(); ++i)
        if (net.out_degree(i) == 0) ++rep.empty_pool_nodes;
    const OutcomePanel panel = latent_trend_panel(traits, cfg.noise_sd, cfg.trend, rng);
    const AsymmetryDesign design = build_asymmetry_design(net, panel, {cfg.exclude_isolates, cfg.own_lag0});

    try {
        const RegressionFit fit = ols(design.X, design.y);
        rep.coefficients.assign(fit.coefficients.data(), fit.coefficients.data() + fit.coefficients.size());
        rep.standard_errors.assign(fit.standard_errors.data(), fit.standard_errors.data() + fit.standard_errors.size());
        Eigen::VectorXd c = Eigen::VectorXd::Zero(fit.coefficients.size());
        c(2) = 1.0;
        c(3) = -1.0;
        rep.normalized_difference = contrast(fit, c).statistic;
        rep.mutual_effect = fit.coefficients(2) + fit.coefficients(3);
        rep.dof = fit.dof;
    } catch (const SingularDesignError& e) {
        rep.excluded = true;
        rep.exclusion_reason = "singular_design";
    } catch (const InsufficientDataError& e) {
        rep.excluded = true;
        rep.exclusion_reason = "insufficient_data";
    }
    return rep;
}

ReplicationSummary run_asymmetry_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::asymmetry) throw ArgumentError("run_asymmetry_experiment: config kind is not asymmetry");
    validate(cfg);
    ReplicationSummary summary;
    summary.replications.resize(cfg.replications);
    parallel_for(cfg.replications, cfg.workers,
                 [&](std::size_t r) { summary.replications[r] = run_asymmetry_replication(cfg, r); });

    std::size_t negative = 0, positive_difference = 0, significant = 0;
    double sum_nominee = 0.0, sum_nominator = 0.0, sum_mutual = 0.0;
    for (const auto& rep : summary.replications) {
        if (rep.excluded) {
            ++summary.excluded;
            ++summary.exclusion_reasons[rep.exclusion_reason];
            continue;
        }
        ++summary.used;
        if (rep.coefficients[2] < 0.0) ++negative;
        if (rep.normalized_difference > 0.0) ++positive_difference;
        if (std::abs(rep.normalized_difference) > 1.96) ++significant;
        sum_nominee += rep.coefficients[2];
        sum_nominator += rep.coefficients[3];
        sum_mutual += rep.mutual_effect;
    }
    if (summary.used > 0) {
        const double used = static_cast<double>(summary.used);
        summary.fraction_nominee_negative = static_cast<double>(negative) / used;
        summary.fraction_difference_positive = static_cast<double>(positive_difference) / used;
        summary.fraction_difference_significant = static_cast<double>(significant) / used;
        summary.mean_nominee = sum_nominee / used;
        summary.mean_nominator = sum_nominator / used;
        summary.mean_mutual = sum_mutual / used;
    }
    return summary;
}

// -------------------------------------------------------------------- voter

std::vector<LogisticPoint> logistic_series(const OutcomePanel& choices, const std::vector<double>& trait,
                                           const std::vector<std::size_t>& checkpoints) {
    if (trait.size() != choices.nodes()) throw DimensionError("logistic_series: trait length != panel width");
    if (checkpoints.size() != choices.slices()) throw DimensionError("logistic_series: checkpoint count != panel slices");
    const auto n = static_cast<Eigen::Index>(trait.size());
    DesignMatrix X;
    X.values.resize(n, 2);
    X.names = {"intercept", "trait"};
    for (Eigen::Index i = 0; i < n; ++i) {
        X.values(i, 0) = 1.0;
        X.values(i, 1) = trait[static_cast<std::size_t>(i)];
    }
    std::vector<LogisticPoint> series;
    series.reserve(checkpoints.size());
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const auto slice = choices.slice(k);
        const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(slice.data(), n);
        LogisticPoint pt;
        pt.checkpoint = checkpoints[k];
        const RegressionFit fit = logistic_irls(X, y);
        pt.separated = fit.separated;
        if (!fit.separated) {
            pt.slope = fit.coefficients(1);
            pt.standard_error = fit.standard_errors(1);
            pt.z = fit.statistics(1);
            const Interval ci = wald_interval(fit, 1);
            pt.ci_lower = ci.lower;
            pt.ci_upper = ci.upper;
        }
        series.push_back(pt);
    }
    return series;
}

VoterReplication run_voter_replication(const ExperimentConfig& cfg, std::size_t index, bool keep_snapshot) {
    VoterReplication rep;
    rep.index = index;
    Rng network_rng = derive_stream(cfg.seed, index, kTagVoterNetwork);
    PlantedPartition homophilous = planted_partition_network(cfg.n, cfg.p_in, cfg.p_out, network_rng);
    rep.homophilous_mean_degree = homophilous.network.mean_degree();
    if (!(rep.homophilous_mean_degree > 0.0)) throw ArgumentError("voter experiment: homophilous network has no edges");
    SocialNetwork control = matched_control_network(cfg.n, rep.homophilous_mean_degree, network_rng);
    rep.control_mean_degree = control.mean_degree();
    // Both networks start from the same coin flips.
    const std::vector<int> y0 = voter_init(cfg.n, network_rng);

    const auto checkpoints = checkpoint_schedule(cfg.steps, cfg.checkpoint_stride);
    Rng h_rng = derive_stream(cfg.seed, index, kTagVoterHomophilous);
    Rng c_rng = derive_stream(cfg.seed, index, kTagVoterControl);
    OutcomePanel h_states = voter_run(homophilous.network, y0, cfg.steps, cfg.flip_prob, checkpoints, h_rng);
    OutcomePanel c_states = voter_run(control, y0, cfg.steps, cfg.flip_prob, checkpoints, c_rng);
    rep.homophilous = logistic_series(h_states, homophilous.traits.x, checkpoints);
    rep.control = logistic_series(c_states, homophilous.traits.x, checkpoints);
    if (keep_snapshot) {
        rep.snapshot = VoterSnapshot{std::move(homophilous), std::move(control), checkpoints, std::move(h_states),
                                     std::move(c_states)};
    }
    return rep;
}

VoterSummary run_voter_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::voter) throw ArgumentError("run_voter_experiment: config kind is not voter");
    validate(cfg);
    VoterSummary summary;
    summary.replications.resize(cfg.replications);
    parallel_for(cfg.replications, cfg.workers,
                 [&](std::size_t r) { summary.replications[r] = run_voter_replication(cfg, r, r == 0); });

    double abs_h = 0.0, abs_c = 0.0;
    std::size_t count_h = 0, count_c = 0;
    std::size_t significant_h = 0, significant_c = 0, reversal = 0;
    std::size_t t0_total = 0, t0_nonsignificant = 0;
    auto scan = [&](const std::vector<LogisticPoint>& series, double& abs_sum, std::size_t& count, bool& any_sig,
                    bool& any_pos, bool& any_neg) {
        for (const auto& pt : series) {
            if (pt.separated) {
                ++summary.separated_checkpoints;
                continue;
            }
            abs_sum += std::abs(pt.slope);
            ++count;
            if (std::abs(pt.z) >= 1.96) {
                any_sig = true;
                (pt.z > 0 ? any_pos : any_neg) = true;
            }
        }
        if (!series.empty() && series.front().checkpoint == 0) {
            ++t0_total;
            if (!series.front().separated && std::abs(series.front().z) < 1.96) ++t0_nonsignificant;
        }
    };
    for (const auto& rep : summary.replications) {
        bool sig = false, pos = false, neg = false;
        scan(rep.homophilous, abs_h, count_h, sig, pos, neg);
        if (sig) ++significant_h;
        if (pos && neg) ++reversal;
        bool csig = false, cpos = false, cneg = false;
        scan(rep.control, abs_c, count_c, csig, cpos, cneg);
        if (csig) ++significant_c;
    }
    const double reps = static_cast<double>(cfg.replications);
    summary.mean_abs_slope_homophilous = count_h ? abs_h / static_cast<double>(count_h) : 0.0;
    summary.mean_abs_slope_control = count_c ? abs_c / static_cast<double>(count_c) : 0.0;
    summary.slope_ratio = summary.mean_abs_slope_control > 0.0
                              ? summary.mean_abs_slope_homophilous / summary.mean_abs_slope_control
                              : 0.0;
    summary.fraction_homophilous_significant = static_cast<double>(significant_h) / reps;
    summary.fraction_control_significant = static_cast<double>(significant_c) / reps;
    summary.fraction_sign_reversal = static_cast<double>(reversal) / reps;
    summary.fraction_t0_nonsignificant =
        t0_total ? static_cast<double>(t0_nonsignificant) / static_cast<double>(t0_total) : 0.0;
    return summary;
}

// ----------------------------------------------------------------- formula

double spurious_coefficient(double rho_jy, double rho_xx, double rho_xy) {
    for (double r : {rho_jy, rho_xx, rho_xy})
        if (!(r >= -1.0 && r <= 1.0)) throw ArgumentError("path coefficients must lie in [-1, 1]");
    return rho_jy * rho_xx * rho_xy;
}

// ------------------------------------------------------------------- halves

HalvesRun run_halves_replication(const ExperimentConfig& cfg, std::size_t index) {
    Rng data_rng = derive_stream(cfg.seed, index, kTagHalvesData);
    HalvesRun run;
    run.index = index;
    SocialNetwork net;
    OutcomePanel panel;
    if (cfg.halves_source == HalvesSource::contagion) {
        net = matched_control_network(cfg.n, cfg.contagion_degree, data_rng);
        panel = contagion_panel(net, cfg.strength, cfg.periods, cfg.contagion_noise_sd, data_rng);
    } else {
        const TraitAssignment traits = sample_latent_uniform(cfg.n, data_rng);
        net = nomination_network(traits, cfg.nominations, data_rng);
        panel = latent_trend_panel(traits, cfg.noise_sd, cfg.trend, data_rng, cfg.periods);
    }
    Rng test_rng = derive_stream(cfg.seed, index, kTagHalvesTest);
    run.result = run_halves_test(net, panel, {cfg.halves_repetitions, cfg.permutations, cfg.alpha}, test_rng);
    return run;
}

HalvesSummary run_halves_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::halves) throw ArgumentError("run_halves_experiment: config kind is not halves");
    validate(cfg);
    HalvesSummary summary;
    summary.runs.resize(cfg.replications);
    parallel_for(cfg.replications, cfg.workers,
                 [&](std::size_t r) { summary.runs[r] = run_halves_replication(cfg, r); });
    std::size_t rejections = 0;
    double coefficient_sum = 0.0;
    for (const auto& run : summary.runs) {
        if (run.result.reject) ++rejections;
        coefficient_sum += run.result.mean_coefficient;
    }
    summary.rejection_rate = static_cast<double>(rejections) / static_cast<double>(cfg.replications);
    summary.mean_coefficient = coefficient_sum / static_cast<double>(cfg.replications);
    return summary;
}

}  // namespace hclab
