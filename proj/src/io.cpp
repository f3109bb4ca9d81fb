#include "hclab/io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "hclab/errors.hpp"

namespace hclab::io {
namespace {

std::string strip(std::string line) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = line.find_last_not_of(" \t\r");
    return line.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(strip(field));
    return fields;
}

double to_double(const std::string& text, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("line " + std::to_string(line_no) + ": not a number: '" + text + "'");
    }
}

std::size_t to_index(const std::string& text, std::size_t line_no) {
    const double v = to_double(text, line_no);
    if (v < 0 || v != std::floor(v)) throw ArgumentError("line " + std::to_string(line_no) + ": bad index '" + text + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

void write_edge_list(std::ostream& out, const SocialNetwork& net) {
    for (const Edge& e : net.edges()) out << e.from << ' ' << e.to << '\n';
}

SocialNetwork read_edge_list(std::istream& in, std::size_t n) {
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    std::size_t largest = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip(line);
        if (line.empty()) continue;
        std::istringstream fields(line);
        long long i = -1, j = -1;
        std::string extra;
        if (!(fields >> i >> j) || (fields >> extra) || i < 0 || j < 0)
            throw ConstructionError("edge list line " + std::to_string(line_no) + ": expected 'i j'");
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
        largest = std::max<std::size_t>(largest, static_cast<std::size_t>(std::max(i, j)));
    }
    if (n == 0) n = edges.empty() ? 1 : largest + 1;
    return SocialNetwork::from_edges(n, edges);
}

void write_traits_csv(std::ostream& out, const TraitAssignment& traits) {
    out.precision(17);
    out << (traits.z ? "node_id,x,z\n" : "node_id,x\n");
    for (std::size_t i = 0; i < traits.size(); ++i) {
        out << i << ',' << traits.x[i];
        if (traits.z) out << ',' << (*traits.z)[i];
        out << '\n';
    }
}

TraitAssignment read_traits_csv(std::istream& in, TraitKind kind) {
    std::string line;
    if (!std::getline(in, line)) throw ArgumentError("traits CSV is empty");
    const auto header = split_csv(strip(line));
    const bool has_z = header.size() == 3 && header[2] == "z";
    if (header.size() < 2 || header[0] != "node_id" || header[1] != "x" || (header.size() == 3 && !has_z))
        throw ArgumentError("traits CSV header must be node_id,x[,z]");
    std::vector<std::pair<std::size_t, std::pair<double, double>>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip(line);
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != header.size()) throw DimensionError("traits CSV line " + std::to_string(line_no) + ": wrong field count");
        rows.push_back({to_index(f[0], line_no), {to_double(f[1], line_no), has_z ? to_double(f[2], line_no) : 0.0}});
    }
    TraitAssignment traits;
    traits.kind = kind;
    traits.x.assign(rows.size(), std::numeric_limits<double>::quiet_NaN());
    if (has_z) traits.z = std::vector<double>(rows.size());
    std::vector<bool> seen(rows.size(), false);
    for (const auto& [id, v] : rows) {
        if (id >= rows.size() || seen[id]) throw ArgumentError("traits CSV node ids must be 0..n-1, each once");
        seen[id] = true;
        traits.x[id] = v.first;
        if (has_z) (*traits.z)[id] = v.second;
    }
    traits.validate();
    return traits;
}

void write_panel_csv(std::ostream& out, const OutcomePanel& panel) {
    out.precision(17);
    out << "t,node_id,y\n";
    for (std::size_t t = 0; t < panel.slices(); ++t) {
        for (std::size_t i = 0; i < panel.nodes(); ++i) out << t << ',' << i << ',' << panel.at(t, i) << '\n';
    }
}

OutcomePanel read_panel_csv(std::istream& in, OutcomeKind kind) {
    std::string line;
    if (!std::getline(in, line) || split_csv(strip(line)) != std::vector<std::string>{"t", "node_id", "y"})
        throw ArgumentError("panel CSV header must be t,node_id,y");
    std::vector<std::vector<double>> values;
    std::vector<std::vector<bool>> filled;
    std::size_t line_no = 1;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip(line);
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 3) throw DimensionError("panel CSV line " + std::to_string(line_no) + ": expected 3 fields");
        const std::size_t t = to_index(f[0], line_no);
        const std::size_t i = to_index(f[1], line_no);
        if (t >= values.size()) {
            values.resize(t + 1);
            filled.resize(t + 1);
        }
        if (i >= values[t].size()) {
            values[t].resize(i + 1, 0.0);
            filled[t].resize(i + 1, false);
        }
        if (filled[t][i]) throw ArgumentError("panel CSV: duplicate entry for t=" + f[0] + ", node " + f[1]);
        values[t][i] = to_double(f[2], line_no);
        filled[t][i] = true;
        width = std::max(width, i + 1);
    }
    for (const auto& row : filled) {
        if (row.size() != width || std::find(row.begin(), row.end(), false) != row.end())
            throw DimensionError("panel CSV is not rectangular");
    }
    return OutcomePanel(std::move(values), kind);
}

nlohmann::ordered_json fit_to_json(const RegressionFit& fit) {
    nlohmann::ordered_json j;
    j["model"] = fit.kind == FitKind::ols ? "ols" : "logistic";
    j["statistic"] = fit.kind == FitKind::ols ? "t" : "z";
    auto& coefs = j["coefficients"] = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < fit.coefficients.size(); ++k) {
        coefs.push_back({{"name", fit.names.at(static_cast<std::size_t>(k))},
                         {"estimate", fit.coefficients(k)},
                         {"standard_error", fit.standard_errors(k)},
                         {"statistic", fit.statistics(k)}});
    }
    if (fit.kind == FitKind::ols) {
        j["dof"] = fit.dof;
    } else {
        j["converged"] = fit.converged;
        j["separated"] = fit.separated;
        j["iterations"] = fit.iterations;
        j["log_likelihood"] = fit.log_likelihood;
    }
    return j;
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ArgumentError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw ArgumentError("config line " + std::to_string(line_no) + ": empty key");
        entries[key] = value;
    }
    return entries;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    for (const auto& [key, value] : config_entries(cfg)) {
        auto parsed = nlohmann::ordered_json::parse(value, nullptr, false);
        if (parsed.is_discarded() || parsed.is_structured())
            j[key] = value;
        else
            j[key] = parsed;
    }
    return j;
}

nlohmann::ordered_json summary_to_json(const ExperimentConfig& cfg, const ReplicationSummary& s) {
    nlohmann::ordered_json j;
    j["experiment"] = "asymmetry";
    j["seed"] = cfg.seed;
    j["config"] = config_to_json(cfg);
    j["replications"] = cfg.replications;
    j["used"] = s.used;
    j["excluded"] = s.excluded;
    j["exclusion_reasons"] = s.exclusion_reasons;
    j["fraction_nominee_negative"] = s.fraction_nominee_negative;
    j["fraction_difference_positive"] = s.fraction_difference_positive;
    j["fraction_difference_significant"] = s.fraction_difference_significant;
    j["mean_nominee"] = s.mean_nominee;
    j["mean_nominator"] = s.mean_nominator;
    j["mean_mutual"] = s.mean_mutual;
    return j;
}

nlohmann::ordered_json summary_to_json(const ExperimentConfig& cfg, const VoterSummary& s) {
    nlohmann::ordered_json j;
    j["experiment"] = "voter";
    j["seed"] = cfg.seed;
    j["config"] = config_to_json(cfg);
    j["replications"] = cfg.replications;
    j["mean_abs_slope_homophilous"] = s.mean_abs_slope_homophilous;
    j["mean_abs_slope_control"] = s.mean_abs_slope_control;
    j["slope_ratio"] = s.slope_ratio;
    j["fraction_homophilous_significant"] = s.fraction_homophilous_significant;
    j["fraction_control_significant"] = s.fraction_control_significant;
    j["fraction_t0_nonsignificant"] = s.fraction_t0_nonsignificant;
    j["fraction_sign_reversal"] = s.fraction_sign_reversal;
    j["separated_checkpoints"] = s.separated_checkpoints;
    return j;
}

nlohmann::ordered_json summary_to_json(const ExperimentConfig& cfg, const HalvesSummary& s) {
    nlohmann::ordered_json j;
    j["experiment"] = "halves";
    j["seed"] = cfg.seed;
    j["config"] = config_to_json(cfg);
    j["runs"] = cfg.replications;
    j["rejection_rate"] = s.rejection_rate;
    j["mean_coefficient"] = s.mean_coefficient;
    return j;
}

void write_asymmetry_csv(std::ostream& out, const ReplicationSummary& summary) {
    out.precision(17);
    const auto& names = asymmetry_column_names();
    out << "replication,excluded,reason";
    for (const auto& n : names) out << ',' << n;
    for (const auto& n : names) out << ",se_" << n;
    out << ",normalized_difference,mutual_effect,empty_pool_nodes\n";
    for (const auto& rep : summary.replications) {
        out << rep.index << ',' << (rep.excluded ? 1 : 0) << ',' << rep.exclusion_reason;
        for (std::size_t k = 0; k < names.size(); ++k) {
            out << ',';
            if (!rep.excluded) out << rep.coefficients[k];
        }
        for (std::size_t k = 0; k < names.size(); ++k) {
            out << ',';
            if (!rep.excluded) out << rep.standard_errors[k];
        }
        out << ',';
        if (!rep.excluded) out << rep.normalized_difference;
        out << ',';
        if (!rep.excluded) out << rep.mutual_effect;
        out << ',' << rep.empty_pool_nodes << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const std::vector<double>& values, std::size_t bins) {
    out.precision(17);
    out << "bin_lower,bin_upper,count\n";
    if (values.empty() || bins == 0) return;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(b, bins - 1)]++;
    }
    for (std::size_t b = 0; b < bins; ++b)
        out << lo + width * static_cast<double>(b) << ',' << lo + width * static_cast<double>(b + 1) << ',' << counts[b] << '\n';
}

void write_voter_series_csv(std::ostream& out, const VoterSummary& summary) {
    out.precision(17);
    out << "replication,network,checkpoint,slope,se,z,ci_lower,ci_upper,separated\n";
    for (const auto& rep : summary.replications) {
        for (const auto* series : {&rep.homophilous, &rep.control}) {
            const char* label = series == &rep.homophilous ? "homophilous" : "control";
            for (const auto& pt : *series) {
                out << rep.index << ',' << label << ',' << pt.checkpoint << ',' << pt.slope << ',' << pt.standard_error << ','
                    << pt.z << ',' << pt.ci_lower << ',' << pt.ci_upper << ',' << (pt.separated ? 1 : 0) << '\n';
            }
        }
    }
}

void write_voter_states_csv(std::ostream& out, const VoterSnapshot& snapshot) {
    out << "network,checkpoint,node_id,trait,choice\n";
    const auto& trait = snapshot.homophilous.traits.x;
    for (const auto* states : {&snapshot.homophilous_states, &snapshot.control_states}) {
        const char* label = states == &snapshot.homophilous_states ? "homophilous" : "control";
        for (std::size_t k = 0; k < states->slices(); ++k) {
            for (std::size_t i = 0; i < states->nodes(); ++i) {
                out << label << ',' << snapshot.checkpoints[k] << ',' << i << ',' << trait[i] << ','
                    << states->at(k, i) << '\n';
            }
        }
    }
}

void write_halves_csv(std::ostream& out, const HalvesSummary& summary) {
    out.precision(17);
    out << "run,mean_coefficient,dispersion,p_value,reject,redrawn_partitions\n";
    for (const auto& run : summary.runs) {
        const auto& r = run.result;
        out << run.index << ',' << r.mean_coefficient << ',' << r.dispersion << ',' << r.p_value << ','
            << (r.reject ? 1 : 0) << ',' << r.redrawn_partitions << '\n';
    }
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace hclab::io
