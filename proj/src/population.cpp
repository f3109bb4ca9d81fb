#include "hclab/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hclab/errors.hpp"

namespace hclab {

void TraitAssignment::validate() const {
    for (double v : x) {
        if (kind == TraitKind::continuous) {
            if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("continuous trait outside [0,1]");
        } else if (v != 0.0 && v != 1.0) {
            throw ArgumentError("binary trait not in {0,1}");
        }
    }
    if (z && z->size() != x.size()) throw DimensionError("observed trait length differs from latent trait length");
}

TraitAssignment sample_latent_uniform(std::size_t n, Rng& rng) {
    if (n == 0) throw ArgumentError("sample_latent_uniform: n must be positive");
    TraitAssignment traits;
    traits.kind = TraitKind::continuous;
    traits.x.resize(n);
    for (double& v : traits.x) {
        // generate_canonical can return 0; the trait is meant to lie in (0,1).
        do {
            v = uniform01(rng);
        } while (v == 0.0);
    }
    return traits;
}

void attach_observed_proxy(TraitAssignment& traits, double noise_sd, Rng& rng) {
    if (!(noise_sd >= 0.0)) throw ArgumentError("observed proxy noise_sd must be non-negative");
    std::normal_distribution<double> noise(0.0, noise_sd);
    std::vector<double> z(traits.x.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = traits.x[i] + (noise_sd > 0.0 ? noise(rng) : 0.0);
    traits.z = std::move(z);
}

double pool_edge_probability(double xi, double xj) { return logistic(-3.0 * std::abs(xi - xj)); }

double nomination_weight(double xj) { return logistic(-std::abs(xj - 0.5)); }

namespace {

// Sequential weighted sampling without replacement.
std::vector<NodeId> weighted_sample(std::span<const NodeId> candidates, std::span<const double> weights,
                                    std::size_t count, Rng& rng) {
    std::vector<NodeId> pool(candidates.begin(), candidates.end());
    std::vector<double> w(weights.begin(), weights.end());
    if (count >= pool.size()) return pool;

    std::vector<NodeId> chosen;
    chosen.reserve(count);
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        double target = uniform01(rng) * total;
        std::size_t pick = pool.size() - 1;
        double running = 0.0;
        for (std::size_t m = 0; m < pool.size(); ++m) {
            running += w[m];
            if (target < running) {
                pick = m;
                break;
            }
        }
        chosen.push_back(pool[pick]);
        total -= w[pick];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return chosen;
}

}  // namespace

NominationDraw nomination_network_with_pool(const TraitAssignment& traits, std::size_t nominations_per_node, Rng& rng) {
    if (traits.kind != TraitKind::continuous) throw ArgumentError("nomination_network needs continuous traits");
    if (nominations_per_node == 0) throw ArgumentError("nominations_per_node must be at least 1");
    const std::size_t n = traits.size();
    if (n == 0) throw ArgumentError("nomination_network: empty trait vector");

    std::vector<Edge> pool_edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (uniform01(rng) < pool_edge_probability(traits.x[i], traits.x[j])) pool_edges.push_back({i, j});
        }
    }
    SocialNetwork pool = SocialNetwork::undirected_from_edges(n, pool_edges);

    std::vector<Edge> nominations;
    nominations.reserve(n * nominations_per_node);
    std::vector<double> weights;
    for (NodeId i = 0; i < n; ++i) {
        auto acquaintances = pool.out_neighbors(i);
        if (acquaintances.empty()) continue;
        weights.resize(acquaintances.size());
        for (std::size_t m = 0; m < acquaintances.size(); ++m) weights[m] = nomination_weight(traits.x[acquaintances[m]]);
        for (NodeId j : weighted_sample(acquaintances, weights, nominations_per_node, rng)) nominations.push_back({i, j});
    }
    SocialNetwork network = SocialNetwork::from_edges(n, nominations);
    return {std::move(pool), std::move(network)};
}

SocialNetwork nomination_network(const TraitAssignment& traits, std::size_t nominations_per_node, Rng& rng) {
    return nomination_network_with_pool(traits, nominations_per_node, rng).network;
}

SocialNetwork uniform_nomination_network(std::size_t n, std::size_t nominations_per_node, Rng& rng) {
    if (n < 2) throw ArgumentError("uniform_nomination_network needs n >= 2");
    if (nominations_per_node == 0) throw ArgumentError("nominations_per_node must be at least 1");
    const std::size_t k = std::min(nominations_per_node, n - 1);
    std::vector<Edge> edges;
    edges.reserve(n * k);
    std::vector<NodeId> others;
    for (NodeId i = 0; i < n; ++i) {
        others.clear();
        for (NodeId j = 0; j < n; ++j)
            if (j != i) others.push_back(j);
        // partial Fisher-Yates
        for (std::size_t m = 0; m < k; ++m) {
            std::uniform_int_distribution<std::size_t> pick(m, others.size() - 1);
            std::swap(others[m], others[pick(rng)]);
            edges.push_back({i, others[m]});
        }
    }
    return SocialNetwork::from_edges(n, edges);
}

PlantedPartition planted_partition_network(std::size_t n, double p_in, double p_out, Rng& rng) {
    if (n < 2 || n % 2 != 0) throw ArgumentError("planted_partition_network needs an even n >= 2");
    if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0))
        throw ArgumentError("edge probabilities must lie in [0,1]");
    if (p_out > p_in) throw ArgumentError("p_out > p_in would be heterophilous");

    PlantedPartition result;
    result.traits.kind = TraitKind::binary;
    result.traits.x.assign(n, 0.0);
    for (std::size_t i = n / 2; i < n; ++i) result.traits.x[i] = 1.0;

    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            const double p = result.traits.x[i] == result.traits.x[j] ? p_in : p_out;
            if (uniform01(rng) < p) edges.push_back({i, j});
        }
    }
    result.network = SocialNetwork::undirected_from_edges(n, edges);
    return result;
}

SocialNetwork matched_control_network(std::size_t n, double target_avg_degree, Rng& rng) {
    if (n < 2) throw ArgumentError("matched_control_network needs n >= 2");
    const double max_degree = static_cast<double>(n - 1);
    if (!(target_avg_degree > 0.0 && target_avg_degree < max_degree))
        throw ArgumentError("target_avg_degree must lie in (0, n-1)");
    const double p = target_avg_degree / max_degree;
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (uniform01(rng) < p) edges.push_back({i, j});
        }
    }
    return SocialNetwork::undirected_from_edges(n, edges);
}

double same_trait_edge_fraction(const SocialNetwork& net, const std::vector<double>& traits) {
    if (traits.size() != net.size()) throw DimensionError("same_trait_edge_fraction: trait length mismatch");
    std::size_t total = 0;
    std::size_t same = 0;
    for (const Edge& e : net.edges()) {
        ++total;
        if (traits[e.from] == traits[e.to]) ++same;
    }
    return total == 0 ? 0.0 : static_cast<double>(same) / static_cast<double>(total);
}

}  // namespace hclab
