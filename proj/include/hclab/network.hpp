#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hclab {

using NodeId = std::uint32_t;

/// Ordered pair (i, j): i nominates j.
struct Edge {
    NodeId from = 0;
    NodeId to = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed binary network without self-loops. Undirected graphs are stored
/// as symmetric directed graphs. Immutable once built.
class SocialNetwork {
public:
    /// Builds the network with exactly the given edges; duplicates collapse.
    /// Throws ConstructionError on out-of-range indices or self-loops and
    /// ArgumentError when n is zero.
    static SocialNetwork from_edges(std::size_t n, std::span<const Edge> edges);

    /// Adds both (i, j) and (j, i) for every listed pair.
    static SocialNetwork undirected_from_edges(std::size_t n, std::span<const Edge> edges);

    std::size_t size() const noexcept { return out_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Nodes j with A(i, j) = 1, ascending.
    std::span<const NodeId> out_neighbors(NodeId i) const { return out_.at(i); }
    /// Nodes j with A(j, i) = 1, ascending.
    std::span<const NodeId> in_neighbors(NodeId i) const { return in_.at(i); }

    std::size_t out_degree(NodeId i) const { return out_.at(i).size(); }
    std::size_t in_degree(NodeId i) const { return in_.at(i).size(); }

    bool has_edge(NodeId i, NodeId j) const;
    bool is_symmetric() const;

    /// All edges in lexicographic order.
    std::vector<Edge> edges() const;

    /// Mean out-degree; for symmetric networks this is the undirected degree.
    double mean_degree() const noexcept;

private:
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
    std::size_t edge_count_ = 0;
};

enum class Direction { out, in };

/// direction=out: sum_j A(i,j) y_j (what i's nominees show).
/// direction=in:  sum_j A(j,i) y_j (what i's nominators show).
std::vector<double> exposure(const SocialNetwork& net, Direction direction, std::span<const double> y);

struct ReciprocityPartition {
    /// Reciprocated pairs, stored once as (i, j) with i < j.
    std::vector<Edge> mutual;
    /// (i, j) with A(i,j) = 1 and A(j,i) = 0.
    std::vector<Edge> named_only;
    /// namer_only[j] holds the pairs (i, j) in which j was named by i
    /// without naming i back: the named_only edges seen from j.
    std::vector<std::vector<Edge>> namer_only;
};

ReciprocityPartition reciprocity_partition(const SocialNetwork& net);

}  // namespace hclab
