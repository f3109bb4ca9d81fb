#include "hclab/network.hpp"

#include <algorithm>
#include <string>

#include "hclab/errors.hpp"

namespace hclab {

SocialNetwork SocialNetwork::from_edges(std::size_t n, std::span<const Edge> edges) {
    if (n == 0) throw ArgumentError("network must have at least one node");
    SocialNetwork net;
    net.out_.resize(n);
    net.in_.resize(n);
    for (const Edge& e : edges) {
        if (e.from >= n || e.to >= n) {
            throw ConstructionError("edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) +
                                    ") out of range for n=" + std::to_string(n));
        }
        if (e.from == e.to) throw ConstructionError("self-loop at node " + std::to_string(e.from));
        net.out_[e.from].push_back(e.to);
    }
    for (NodeId i = 0; i < n; ++i) {
        auto& nbrs = net.out_[i];
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        net.edge_count_ += nbrs.size();
        for (NodeId j : nbrs) net.in_[j].push_back(i);
    }
    // in_ lists are filled in ascending i, so already sorted.
    return net;
}

SocialNetwork SocialNetwork::undirected_from_edges(std::size_t n, std::span<const Edge> edges) {
    std::vector<Edge> both;
    both.reserve(2 * edges.size());
    for (const Edge& e : edges) {
        both.push_back(e);
        both.push_back({e.to, e.from});
    }
    return from_edges(n, both);
}

bool SocialNetwork::has_edge(NodeId i, NodeId j) const {
    const auto& nbrs = out_.at(i);
    return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

bool SocialNetwork::is_symmetric() const {
    for (NodeId i = 0; i < size(); ++i) {
        if (out_[i] != in_[i]) return false;
    }
    return true;
}

std::vector<Edge> SocialNetwork::edges() const {
    std::vector<Edge> result;
    result.reserve(edge_count_);
    for (NodeId i = 0; i < size(); ++i) {
        for (NodeId j : out_[i]) result.push_back({i, j});
    }
    return result;
}

double SocialNetwork::mean_degree() const noexcept {
    return static_cast<double>(edge_count_) / static_cast<double>(size());
}

std::vector<double> exposure(const SocialNetwork& net, Direction direction, std::span<const double> y) {
    if (y.size() != net.size()) {
        throw DimensionError("exposure: y has length " + std::to_string(y.size()) + ", network has " +
                             std::to_string(net.size()) + " nodes");
    }
    std::vector<double> result(net.size(), 0.0);
    for (NodeId i = 0; i < net.size(); ++i) {
        auto nbrs = direction == Direction::out ? net.out_neighbors(i) : net.in_neighbors(i);
        double sum = 0.0;
        for (NodeId j : nbrs) sum += y[j];
        result[i] = sum;
    }
    return result;
}

ReciprocityPartition reciprocity_partition(const SocialNetwork& net) {
    ReciprocityPartition part;
    part.namer_only.resize(net.size());
    for (NodeId i = 0; i < net.size(); ++i) {
        for (NodeId j : net.out_neighbors(i)) {
            if (net.has_edge(j, i)) {
                if (i < j) part.mutual.push_back({i, j});
            } else {
                part.named_only.push_back({i, j});
                part.namer_only[j].push_back({i, j});
            }
        }
    }
    return part;
}

}  // namespace hclab
