#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hclab/network.hpp"
#include "hclab/rng.hpp"

namespace hclab {

enum class TraitKind { continuous, binary };

/// Per-node latent trait x, optionally an observed proxy z.
struct TraitAssignment {
    std::vector<double> x;
    std::optional<std::vector<double>> z;
    TraitKind kind = TraitKind::continuous;

    std::size_t size() const noexcept { return x.size(); }

    /// Throws ArgumentError if values fall outside [0,1] (continuous) or
    /// {0,1} (binary), or if z has a different length than x.
    void validate() const;
};

/// n iid Uniform(0,1) latent traits.
TraitAssignment sample_latent_uniform(std::size_t n, Rng& rng);

/// Attaches z = x + N(0, noise_sd^2).
void attach_observed_proxy(TraitAssignment& traits, double noise_sd, Rng& rng);

/// Pool-edge probability logit^-1(-3 |xi - xj|).
double pool_edge_probability(double xi, double xj);

/// Nomination weight logit^-1(-|xj - 0.5|): nominees near the median are preferred.
double nomination_weight(double xj);

struct NominationDraw {
    SocialNetwork pool;     // undirected acquaintance pool, stored symmetric
    SocialNetwork network;  // declared nominations
};

/// Two-stage homophilous nomination network. Stage 1 links each unordered
/// pair independently with pool_edge_probability; stage 2 lets every node
/// nominate `nominations_per_node` pool neighbours without replacement,
/// weighted by nomination_weight. Nodes with an empty pool nominate nobody;
/// nodes with a small pool nominate all of it.
NominationDraw nomination_network_with_pool(const TraitAssignment& traits, std::size_t nominations_per_node, Rng& rng);

SocialNetwork nomination_network(const TraitAssignment& traits, std::size_t nominations_per_node, Rng& rng);

/// Trait-independent counterpart of nomination_network: each node nominates
/// `nominations_per_node` distinct other nodes uniformly at random.
SocialNetwork uniform_nomination_network(std::size_t n, std::size_t nominations_per_node, Rng& rng);

struct PlantedPartition {
    TraitAssignment traits;  // binary cluster label
    SocialNetwork network;   // symmetric
};

/// Two balanced clusters (first n/2 nodes carry trait 0). Same-trait pairs
/// link with p_in, cross pairs with p_out. Requires n even and
/// 0 <= p_out <= p_in <= 1.
PlantedPartition planted_partition_network(std::size_t n, double p_in, double p_out, Rng& rng);

/// Erdos-Renyi graph with edge probability target_avg_degree / (n - 1).
SocialNetwork matched_control_network(std::size_t n, double target_avg_degree, Rng& rng);

/// Fraction of (undirected) edges whose endpoints share a trait value.
double same_trait_edge_fraction(const SocialNetwork& net, const std::vector<double>& traits);

}  // namespace hclab
