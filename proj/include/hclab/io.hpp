#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hclab/causal_dag.hpp"
#include "hclab/dynamics.hpp"
#include "hclab/experiments.hpp"
#include "hclab/inference.hpp"
#include "hclab/network.hpp"
#include "hclab/population.hpp"

namespace hclab::io {

/// Edge list: one "i j" pair per line, 0-indexed. Blank lines and '#'
/// comments are skipped.
void write_edge_list(std::ostream& out, const SocialNetwork& net);
/// n = 0 infers the node count as 1 + the largest index seen.
SocialNetwork read_edge_list(std::istream& in, std::size_t n = 0);

/// Columns node_id,x[,z].
void write_traits_csv(std::ostream& out, const TraitAssignment& traits);
TraitAssignment read_traits_csv(std::istream& in, TraitKind kind);

/// Columns t,node_id,y in time-major order.
void write_panel_csv(std::ostream& out, const OutcomePanel& panel);
OutcomePanel read_panel_csv(std::istream& in, OutcomeKind kind);

nlohmann::ordered_json fit_to_json(const RegressionFit& fit);

/// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(std::istream& in);

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
nlohmann::ordered_json summary_to_json(const ExperimentConfig& cfg, const ReplicationSummary& summary);
nlohmann::ordered_json summary_to_json(const ExperimentConfig& cfg, const VoterSummary& summary);
nlohmann::ordered_json summary_to_json(const ExperimentConfig& cfg, const HalvesSummary& summary);

/// replication,excluded,reason,alpha,beta1..beta5,se_*,normalized_difference,mutual_effect,empty_pool_nodes
void write_asymmetry_csv(std::ostream& out, const ReplicationSummary& summary);

/// bin_lower,bin_upper,count over `bins` equal-width bins spanning the data.
void write_histogram_csv(std::ostream& out, const std::vector<double>& values, std::size_t bins);

/// replication,network,checkpoint,slope,se,z,ci_lower,ci_upper,separated
void write_voter_series_csv(std::ostream& out, const VoterSummary& summary);

/// network,checkpoint,node_id,trait,choice
void write_voter_states_csv(std::ostream& out, const VoterSnapshot& snapshot);

/// run,mean_coefficient,dispersion,p_value,reject,redrawn_partitions
void write_halves_csv(std::ostream& out, const HalvesSummary& summary);

/// Deterministic JSON text (2-space indent, trailing newline).
std::string dump(const nlohmann::ordered_json& j);

}  // namespace hclab::io
