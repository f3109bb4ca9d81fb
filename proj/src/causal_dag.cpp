#include "hclab/causal_dag.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>
#include <sstream>

#include "hclab/errors.hpp"

namespace hclab {

CausalDag::CausalDag(std::vector<NodeSpec> nodes, const std::vector<std::pair<std::string, std::string>>& edges) {
    auto add_node = [this](const std::string& name, bool latent) {
        if (name.empty()) throw ConstructionError("empty node name");
        if (lookup_.count(name)) throw ConstructionError("duplicate node name '" + name + "'");
        lookup_.emplace(name, names_.size());
        names_.push_back(name);
        latent_.push_back(latent);
        parents_.emplace_back();
        children_.emplace_back();
    };
    for (const auto& spec : nodes) add_node(spec.name, spec.latent);
    for (const auto& [from, to] : edges) {
        if (!lookup_.count(from)) add_node(from, false);
        if (!lookup_.count(to)) add_node(to, false);
        const std::size_t u = lookup_.at(from);
        const std::size_t v = lookup_.at(to);
        if (u == v) throw ConstructionError("self-loop at '" + from + "'");
        if (has_edge(u, v)) continue;
        parents_[v].push_back(u);
        children_[u].push_back(v);
        edge_list_.emplace_back(u, v);
    }

    // Kahn's algorithm.
    std::vector<std::size_t> indegree(size());
    for (std::size_t v = 0; v < size(); ++v) indegree[v] = parents_[v].size();
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < size(); ++v)
        if (indegree[v] == 0) ready.push_back(v);
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::size_t v = ready.back();
        ready.pop_back();
        ++visited;
        for (std::size_t c : children_[v])
            if (--indegree[c] == 0) ready.push_back(c);
    }
    if (visited != size()) throw ConstructionError("graph contains a directed cycle");
}

std::size_t CausalDag::index(std::string_view name) const {
    auto it = lookup_.find(std::string(name));
    if (it == lookup_.end()) throw LookupError("unknown node '" + std::string(name) + "'");
    return it->second;
}

bool CausalDag::contains(std::string_view name) const { return lookup_.count(std::string(name)) > 0; }

bool CausalDag::has_edge(std::size_t from, std::size_t to) const {
    const auto& c = children_.at(from);
    return std::find(c.begin(), c.end(), to) != c.end();
}

std::vector<std::pair<std::string, std::string>> CausalDag::edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto [u, v] : edge_list_) out.emplace_back(names_[u], names_[v]);
    return out;
}

std::vector<std::string> CausalDag::latent_nodes() const {
    std::vector<std::string> out;
    for (std::size_t v = 0; v < size(); ++v)
        if (latent_[v]) out.push_back(names_[v]);
    return out;
}

std::vector<std::string> CausalDag::observed_nodes() const {
    std::vector<std::string> out;
    for (std::size_t v = 0; v < size(); ++v)
        if (!latent_[v]) out.push_back(names_[v]);
    return out;
}

CausalDag CausalDag::without_edge(std::string_view from, std::string_view to) const {
    std::vector<NodeSpec> nodes;
    for (std::size_t v = 0; v < size(); ++v) nodes.push_back({names_[v], latent_[v]});
    auto kept = edges();
    std::erase_if(kept, [&](const auto& e) { return e.first == from && e.second == to; });
    return CausalDag(std::move(nodes), kept);
}

bool d_separated(const CausalDag& dag, std::size_t a, std::size_t b, const std::vector<std::size_t>& conditioning) {
    const std::size_t n = dag.size();
    if (a >= n || b >= n) throw LookupError("d_separated: node index out of range");
    std::vector<bool> given(n, false);
    for (std::size_t z : conditioning) given.at(z) = true;

    // Nodes that are conditioned on or have a conditioned descendant.
    std::vector<bool> activates_collider(n, false);
    std::vector<std::size_t> stack(conditioning.begin(), conditioning.end());
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        if (activates_collider[v]) continue;
        activates_collider[v] = true;
        for (std::size_t p : dag.parents(v)) stack.push_back(p);
    }

    // Traverse (node, direction) states; up = arrived from a child.
    enum Dir : int { up = 0, down = 1 };
    std::vector<std::array<bool, 2>> seen(n, {false, false});
    std::vector<std::pair<std::size_t, Dir>> frontier{{a, up}};
    while (!frontier.empty()) {
        auto [v, dir] = frontier.back();
        frontier.pop_back();
        if (seen[v][dir]) continue;
        seen[v][dir] = true;
        if (v == b) return false;

        if (dir == up && !given[v]) {
            for (std::size_t p : dag.parents(v)) frontier.push_back({p, up});
            for (std::size_t c : dag.children(v)) frontier.push_back({c, down});
        } else if (dir == down) {
            if (!given[v]) {
                for (std::size_t c : dag.children(v)) frontier.push_back({c, down});
            }
            if (activates_collider[v]) {
                for (std::size_t p : dag.parents(v)) frontier.push_back({p, up});
            }
        }
    }
    return true;
}

namespace {

std::vector<std::size_t> resolve(const CausalDag& dag, const std::vector<std::string>& names) {
    std::vector<std::size_t> out;
    out.reserve(names.size());
    for (const auto& s : names) out.push_back(dag.index(s));
    return out;
}

void check_query(std::size_t a, std::size_t b, const std::vector<std::size_t>& conditioning) {
    if (a == b) throw ArgumentError("query endpoints must differ");
    for (std::size_t z : conditioning)
        if (z == a || z == b) throw ArgumentError("query endpoint appears in the conditioning set");
}

}  // namespace

bool d_separated(const CausalDag& dag, const std::string& a, const std::string& b,
                 const std::vector<std::string>& conditioning) {
    const std::size_t ia = dag.index(a);
    const std::size_t ib = dag.index(b);
    const auto z = resolve(dag, conditioning);
    check_query(ia, ib, z);
    return d_separated(dag, ia, ib, z);
}

std::string DagPath::to_string() const {
    std::string s;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k > 0) s += forward[k - 1] ? " -> " : " <- ";
        s += nodes[k];
    }
    return s;
}

std::vector<DagPath> open_backdoor_paths(const CausalDag& dag, const std::string& treatment, const std::string& outcome,
                                         const std::vector<std::string>& conditioning) {
    const std::size_t source = dag.index(treatment);
    const std::size_t target = dag.index(outcome);
    const auto z = resolve(dag, conditioning);
    check_query(source, target, z);

    const std::size_t n = dag.size();
    std::vector<bool> given(n, false);
    for (std::size_t v : z) given[v] = true;
    std::vector<bool> activates_collider(n, false);
    std::vector<std::size_t> stack(z.begin(), z.end());
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        if (activates_collider[v]) continue;
        activates_collider[v] = true;
        for (std::size_t p : dag.parents(v)) stack.push_back(p);
    }

    std::vector<DagPath> found;
    std::vector<std::size_t> path{source};
    std::vector<bool> forward;
    std::vector<bool> on_path(n, false);
    on_path[source] = true;

    // Depth-first over simple paths, pruning as soon as an interior node blocks.
    std::function<void(std::size_t)> extend = [&](std::size_t v) {
        auto step = [&](std::size_t next, bool is_forward) {
            if (on_path[next]) return;
            if (path.size() == 1 && is_forward) return;  // first edge must point into the treatment
            if (path.size() >= 2) {
                // v is interior: arrived via forward.back(), leaving via is_forward.
                const bool collider = forward.back() && !is_forward;
                if (collider ? !activates_collider[v] : given[v]) return;
            }
            path.push_back(next);
            forward.push_back(is_forward);
            on_path[next] = true;
            if (next == target) {
                DagPath p;
                for (std::size_t u : path) p.nodes.push_back(dag.name(u));
                p.forward = forward;
                found.push_back(std::move(p));
            } else {
                extend(next);
            }
            on_path[next] = false;
            forward.pop_back();
            path.pop_back();
        };
        for (std::size_t c : dag.children(v)) step(c, true);
        for (std::size_t p : dag.parents(v)) step(p, false);
    };
    extend(source);
    return found;
}

std::vector<DagPath> confounding_paths_given_observed(const CausalDag& dag, const std::string& treatment,
                                                      const std::string& outcome,
                                                      const std::vector<std::string>& conditioning) {
    for (const auto& s : conditioning)
        if (dag.is_latent(dag.index(s))) throw ArgumentError("cannot condition on latent node '" + s + "'");
    return open_backdoor_paths(dag, treatment, outcome, conditioning);
}

std::vector<std::string> observed_except(const CausalDag& dag, const std::vector<std::string>& excluded) {
    std::vector<std::string> out;
    for (const auto& name : dag.observed_nodes())
        if (std::find(excluded.begin(), excluded.end(), name) == excluded.end()) out.push_back(name);
    return out;
}

namespace {

using EdgeList = std::vector<std::pair<std::string, std::string>>;

void append_individual_history(EdgeList& e, const std::string& who, const std::vector<std::string>& times) {
    for (std::size_t k = 1; k < times.size(); ++k) e.push_back({"Y" + who + "_" + times[k - 1], "Y" + who + "_" + times[k]});
}

}  // namespace

const std::vector<std::string>& template_names() {
    static const std::vector<std::string> names{"fig1", "fig3a", "fig3b", "fig4", "fig5"};
    return names;
}

CausalDag build_template(std::string_view name) {
    using Spec = CausalDag::NodeSpec;
    const std::vector<std::string> two_steps{"t1", "t"};
    EdgeList e;

    if (name == "fig1" || name == "fig3a" || name == "fig3b") {
        const bool z_carries_outcome = name == "fig3a";
        const bool z_carries_tie = name == "fig3b";
        std::vector<Spec> nodes{{"Xi", true}, {"Xj", true}, {"Zi", false}, {"Zj", false}, {"Aij", false},
                                {"Yi_t1", false}, {"Yi_t", false}, {"Yj_t1", false}, {"Yj_t", false}};
        for (const std::string who : {"i", "j"}) {
            const std::string x = "X" + who;
            const std::string z = "Z" + who;
            e.push_back({x, z});
            if (z_carries_tie) {
                e.push_back({z, "Aij"});
            } else {
                e.push_back({x, "Aij"});
            }
            for (const auto& t : two_steps) {
                const std::string y = "Y" + who + "_" + t;
                e.push_back({z_carries_outcome ? z : x, y});
            }
            append_individual_history(e, who, two_steps);
        }
        e.push_back({"Yj_t1", "Yi_t"});  // contagion
        return CausalDag(std::move(nodes), e);
    }

    if (name == "fig4") {
        const std::vector<std::string> three_steps{"t2", "t1", "t"};
        std::vector<Spec> nodes{{"Xi", true}, {"Xj", true}, {"Aij", false}};
        for (const std::string who : {"i", "j"}) {
            for (const auto& t : three_steps) nodes.push_back({"Y" + who + "_" + t, false});
        }
        for (const std::string who : {"i", "j"}) {
            e.push_back({"X" + who, "Aij"});
            for (const auto& t : three_steps) e.push_back({"X" + who, "Y" + who + "_" + t});
            append_individual_history(e, who, three_steps);
        }
        return CausalDag(std::move(nodes), e);
    }

    if (name == "fig5") {
        // Voter model: X is the observed trait; choices move only by copying along ties.
        std::vector<Spec> nodes{{"Xi", false}, {"Xj", false}, {"Aij", false},
                                {"Yi_t1", false}, {"Yi_t", false}, {"Yj_t1", false}, {"Yj_t", false}};
        e = {{"Xi", "Aij"},    {"Xj", "Aij"},    {"Yi_t1", "Yi_t"}, {"Yj_t1", "Yj_t"},
             {"Yj_t1", "Yi_t"}, {"Yi_t1", "Yj_t"}, {"Aij", "Yi_t"},  {"Aij", "Yj_t"}};
        return CausalDag(std::move(nodes), e);
    }

    throw LookupError("unknown DAG template '" + std::string(name) + "'");
}

CausalDag parse_dag_text(std::string_view text) {
    std::vector<CausalDag::NodeSpec> nodes;
    std::set<std::string> latent;
    std::vector<std::string> declared;
    EdgeList edges;

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string::npos) return std::string();
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    };
    auto words = [](const std::string& s) {
        std::istringstream ws(s);
        std::vector<std::string> out;
        for (std::string w; ws >> w;) out.push_back(w);
        return out;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("latent:", 0) == 0) {
            for (auto& w : words(line.substr(7))) {
                latent.insert(w);
                declared.push_back(w);
            }
            continue;
        }
        if (line.rfind("nodes:", 0) == 0) {
            for (auto& w : words(line.substr(6))) declared.push_back(w);
            continue;
        }
        const auto arrow = line.find("->");
        if (arrow == std::string::npos) throw ConstructionError("line " + std::to_string(line_no) + ": expected 'src -> dst'");
        auto src = trim(line.substr(0, arrow));
        auto dst = trim(line.substr(arrow + 2));
        if (src.empty() || dst.empty() || words(src).size() != 1 || words(dst).size() != 1)
            throw ConstructionError("line " + std::to_string(line_no) + ": malformed edge");
        edges.push_back({src, dst});
    }
    std::set<std::string> seen;
    for (const auto& name : declared) {
        if (seen.insert(name).second) nodes.push_back({name, latent.count(name) > 0});
    }
    // Latent names mentioned only in edges still need the flag.
    for (const auto& [src, dst] : edges) {
        for (const auto& name : {src, dst}) {
            if (seen.insert(name).second) nodes.push_back({name, latent.count(name) > 0});
        }
    }
    return CausalDag(std::move(nodes), edges);
}

std::string to_dag_text(const CausalDag& dag) {
    std::ostringstream out;
    out << "nodes:";
    for (std::size_t v = 0; v < dag.size(); ++v) out << ' ' << dag.name(v);
    out << '\n';
    const auto latent = dag.latent_nodes();
    if (!latent.empty()) {
        out << "latent:";
        for (const auto& s : latent) out << ' ' << s;
        out << '\n';
    }
    for (const auto& [src, dst] : dag.edges()) out << src << " -> " << dst << '\n';
    return out.str();
}

}  // namespace hclab
