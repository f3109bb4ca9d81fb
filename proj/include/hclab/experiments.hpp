#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hclab/dynamics.hpp"
#include "hclab/inference.hpp"
#include "hclab/network.hpp"
#include "hclab/population.hpp"
#include "hclab/rng.hpp"

namespace hclab {

enum class ExperimentKind { asymmetry, voter, halves };
enum class HalvesSource { contagion, latent_trend };

std::string to_string(ExperimentKind kind);
std::string to_string(HalvesSource source);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::asymmetry;
    std::size_t n = 400;
    std::size_t replications = 5000;
    std::uint64_t seed = 1;
    std::size_t workers = 1;

    // asymmetry (and latent-trend panels for the halves test)
    double noise_sd = 0.02;
    double trend = 0.4;
    std::size_t nominations = 1;
    bool homophilous = true;
    bool exclude_isolates = false;
    bool own_lag0 = false;

    // voter
    double p_in = 0.10;
    double p_out = 0.01;
    std::size_t steps = 3000;
    std::size_t checkpoint_stride = 50;
    double flip_prob = 0.01;

    // halves
    HalvesSource halves_source = HalvesSource::contagion;
    std::size_t periods = 20;
    double strength = 0.5;
    std::size_t halves_repetitions = 10;
    std::size_t permutations = 199;
    double alpha = 0.05;
    double contagion_noise_sd = 1.0;
    double contagion_degree = 6.0;
};

/// Defaults for each experiment: asymmetry n=400 x 5000, voter n=200 x 30,
/// halves n=200 x 200.
ExperimentConfig default_config(ExperimentKind kind);

/// Throws ArgumentError describing the first invalid field.
void validate(const ExperimentConfig& cfg);

/// Sets one field from its textual key/value. Throws LookupError for
/// unknown keys and ArgumentError for unparsable values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Every field relevant to cfg.kind as key -> text, in key order.
std::map<std::string, std::string> config_entries(const ExperimentConfig& cfg);

// ---------------------------------------------------------------- asymmetry

struct AsymmetryReplication {
    std::size_t index = 0;
    bool excluded = false;
    std::string exclusion_reason;
    std::vector<double> coefficients;     // alpha, beta1..beta5 (+ own_t0)
    std::vector<double> standard_errors;
    double normalized_difference = 0.0;   // (beta2 - beta3) / SE
    double mutual_effect = 0.0;           // beta2 + beta3
    double dof = 0.0;
    std::size_t empty_pool_nodes = 0;     // nodes that nominated nobody
};

struct ReplicationSummary {
    std::vector<AsymmetryReplication> replications;
    std::size_t used = 0;
    std::size_t excluded = 0;
    std::map<std::string, std::size_t> exclusion_reasons;
    double fraction_nominee_negative = 0.0;     // beta2 < 0
    double fraction_difference_positive = 0.0;  // normalized (beta2 - beta3) > 0
    double fraction_difference_significant = 0.0;  // |normalized difference| > 1.96
    double mean_nominee = 0.0;    // beta2
    double mean_nominator = 0.0;  // beta3
    double mean_mutual = 0.0;     // beta2 + beta3
};

AsymmetryReplication run_asymmetry_replication(const ExperimentConfig& cfg, std::size_t index);
ReplicationSummary run_asymmetry_experiment(const ExperimentConfig& cfg);

// -------------------------------------------------------------------- voter

struct LogisticPoint {
    std::size_t checkpoint = 0;
    double slope = 0.0;
    double standard_error = 0.0;
    double z = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    bool separated = false;
};

struct VoterSnapshot {
    PlantedPartition homophilous;
    SocialNetwork control;
    std::vector<std::size_t> checkpoints;
    OutcomePanel homophilous_states;
    OutcomePanel control_states;
};

struct VoterReplication {
    std::size_t index = 0;
    double homophilous_mean_degree = 0.0;
    double control_mean_degree = 0.0;
    std::vector<LogisticPoint> homophilous;
    std::vector<LogisticPoint> control;
    std::optional<VoterSnapshot> snapshot;
};

struct VoterSummary {
    std::vector<VoterReplication> replications;
    double mean_abs_slope_homophilous = 0.0;
    double mean_abs_slope_control = 0.0;
    double slope_ratio = 0.0;
    double fraction_homophilous_significant = 0.0;  // seeds with |z| >= 1.96 at some checkpoint
    double fraction_control_significant = 0.0;
    double fraction_t0_nonsignificant = 0.0;        // over both networks and all seeds
    double fraction_sign_reversal = 0.0;            // homophilous seeds significant in both directions
    std::size_t separated_checkpoints = 0;
};

/// Logistic fit of choice on [1, trait] at every checkpoint of the panel.
std::vector<LogisticPoint> logistic_series(const OutcomePanel& choices, const std::vector<double>& trait,
                                           const std::vector<std::size_t>& checkpoints);

VoterReplication run_voter_replication(const ExperimentConfig& cfg, std::size_t index, bool keep_snapshot = false);
VoterSummary run_voter_experiment(const ExperimentConfig& cfg);

// ------------------------------------------------------------------- halves

struct HalvesOptions {
    std::size_t repetitions = 10;
    std::size_t permutations = 199;
    double alpha = 0.05;
};

struct HalvesDesign {
    DesignMatrix X;  // intercept, own_lag, other_half_mean_lag
    Eigen::VectorXd y;
};

/// Stacked rows (i in first half, t >= 1): Y_i(t) on [1, Y_i(t-1), s(t-1)],
/// s = mean outcome of the second half. Built from the panel alone.
HalvesDesign build_halves_design(const OutcomePanel& panel, const std::vector<bool>& in_first_half);

struct HalvesResult {
    double mean_coefficient = 0.0;  // averaged over repetitions
    double dispersion = 0.0;        // sd across repetitions
    double p_value = 1.0;
    bool reject = false;
    std::vector<double> coefficients;
    std::size_t redrawn_partitions = 0;
};

/// Each node's increments Y(t) - Y(t-1) shuffled in time independently,
/// re-accumulated from the node's Y(0).
OutcomePanel permute_increments(const OutcomePanel& panel, Rng& rng);

/// Random-halves contagion test. Each repetition draws a fair bipartition
/// and fits build_halves_design; the statistic is the cross-half coefficient
/// averaged over repetitions. Its null distribution comes from
/// `permutations` panels passed through permute_increments, scored on the
/// same partitions. The network is only checked for size.
HalvesResult run_halves_test(const SocialNetwork& net, const OutcomePanel& panel, const HalvesOptions& options, Rng& rng);

struct HalvesRun {
    std::size_t index = 0;
    HalvesResult result;
};

struct HalvesSummary {
    std::vector<HalvesRun> runs;
    double rejection_rate = 0.0;
    double mean_coefficient = 0.0;
};

HalvesRun run_halves_replication(const ExperimentConfig& cfg, std::size_t index);
HalvesSummary run_halves_experiment(const ExperimentConfig& cfg);

// ----------------------------------------------------------------- formula

/// Standardized receiver-on-sender coefficient implied by pure latent
/// homophily in a linear-Gaussian model: rho_jy * rho_xx * rho_xy.
double spurious_coefficient(double rho_jy, double rho_xx, double rho_xy);

}  // namespace hclab
