#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hclab {

/// Directed acyclic graph over named variables, each observed or latent.
class CausalDag {
public:
    struct NodeSpec {
        std::string name;
        bool latent = false;
    };

    /// Nodes referenced only by edges are added as observed. Throws
    /// ConstructionError on duplicate names or cycles.
    CausalDag(std::vector<NodeSpec> nodes, const std::vector<std::pair<std::string, std::string>>& edges);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t v) const { return names_.at(v); }
    bool is_latent(std::size_t v) const { return latent_.at(v); }
    /// Throws LookupError for unknown names.
    std::size_t index(std::string_view name) const;
    bool contains(std::string_view name) const;

    const std::vector<std::size_t>& parents(std::size_t v) const { return parents_.at(v); }
    const std::vector<std::size_t>& children(std::size_t v) const { return children_.at(v); }
    bool has_edge(std::size_t from, std::size_t to) const;
    bool has_edge(std::string_view from, std::string_view to) const { return has_edge(index(from), index(to)); }

    /// Edges as (parent, child) name pairs, in insertion order.
    std::vector<std::pair<std::string, std::string>> edges() const;
    std::vector<std::string> latent_nodes() const;
    std::vector<std::string> observed_nodes() const;

    /// Copy without the given edge (no-op if absent).
    CausalDag without_edge(std::string_view from, std::string_view to) const;

private:
    std::vector<std::string> names_;
    std::vector<bool> latent_;
    std::unordered_map<std::string, std::size_t> lookup_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::pair<std::size_t, std::size_t>> edge_list_;
};

/// d-separation by reachability (Bayes ball). Index-based core.
bool d_separated(const CausalDag& dag, std::size_t a, std::size_t b, const std::vector<std::size_t>& conditioning);

/// Name-based wrapper. Requires a != b and neither in the conditioning set.
bool d_separated(const CausalDag& dag, const std::string& a, const std::string& b,
                 const std::vector<std::string>& conditioning);

/// A path rendered with arrow directions, e.g. "Yj_t1 <- Xj -> Aij <- Xi -> Yi_t".
struct DagPath {
    std::vector<std::string> nodes;
    /// forward[k] is true when the edge between nodes[k] and nodes[k+1] points forward.
    std::vector<bool> forward;

    std::string to_string() const;
};

/// Every simple path from treatment to outcome whose first edge points into
/// the treatment and which is not blocked by `conditioning`.
std::vector<DagPath> open_backdoor_paths(const CausalDag& dag, const std::string& treatment, const std::string& outcome,
                                         const std::vector<std::string>& conditioning);

/// Adjustment query that only admits observed conditioning variables.
/// Throws ArgumentError if any conditioning node is latent.
std::vector<DagPath> confounding_paths_given_observed(const CausalDag& dag, const std::string& treatment,
                                                      const std::string& outcome,
                                                      const std::vector<std::string>& conditioning);

/// All observed nodes except those listed.
std::vector<std::string> observed_except(const CausalDag& dag, const std::vector<std::string>& excluded);

/// Two-individual templates: fig1, fig3a, fig3b, fig4, fig5.
CausalDag build_template(std::string_view name);
const std::vector<std::string>& template_names();

/// Text format: one "src -> dst" per line, optional "latent: a b c" and
/// "nodes: a b c" lines, '#' comments.
CausalDag parse_dag_text(std::string_view text);
std::string to_dag_text(const CausalDag& dag);

}  // namespace hclab
