#include "hclab/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hclab/causal_dag.hpp"
#include "hclab/errors.hpp"
#include "hclab/experiments.hpp"
#include "hclab/io.hpp"

namespace hclab::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* kCsvColumns = R"(Output files (CSV column names are stable, schema version 1):
  asymmetry_summary.json      aggregates, config echo, seed
  asymmetry_replications.csv  replication,excluded,reason,intercept,own_t1,nominee_t1,
                              nominator_t1,nominee_t0,nominator_t0,se_<each>,
                              normalized_difference,mutual_effect,empty_pool_nodes
  histogram_*.csv             bin_lower,bin_upper,count (nominee, nominator,
                              mutual, normalized_difference)
  voter_summary.json          aggregates, config echo, seed
  voter_series.csv            replication,network,checkpoint,slope,se,z,ci_lower,ci_upper,separated
  voter_states.csv            network,checkpoint,node_id,trait,choice   (replication 0)
  voter_{homophilous,control}.edges   "i j" per line (replication 0)
  halves_summary.json         rejection rate, config echo, seed
  halves_runs.csv             run,mean_coefficient,dispersion,p_value,reject,redrawn_partitions
  manifest.json               config, seed, artifacts, wall-clock seconds, version
Exit codes: 0 success, 1 configuration error, 2 runtime error.)";

/// Collects flag values as text so they can be layered over file values.
class FlagSet {
public:
    void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
        auto* opt = app.add_option(flag, values_[key], help);
        options_.emplace_back(key, opt);
    }

    void apply(ExperimentConfig& cfg) const {
        for (const auto& [key, opt] : options_) {
            if (opt->count() > 0) set_config_value(cfg, key, values_.at(key));
        }
    }

    bool given(const std::string& key) const {
        for (const auto& [k, opt] : options_)
            if (k == key) return opt->count() > 0;
        return false;
    }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::pair<std::string, CLI::Option*>> options_;
};

struct CommonOptions {
    std::string config_path;
    std::string out_dir = "hclab-out";
};

void add_common(CLI::App& app, FlagSet& flags, CommonOptions& common) {
    flags.add(app, "--seed", "seed", "master seed (required)");
    flags.add(app, "--n", "n", "number of nodes");
    flags.add(app, "--reps", "replications", "number of replications");
    flags.add(app, "--workers", "workers", "worker threads (output does not depend on this)");
    app.add_option("--config", common.config_path, "flat key = value config file");
    app.add_option("--out-dir", common.out_dir, "directory for output files");
}

ExperimentConfig resolve_config(ExperimentKind kind, const FlagSet& flags, const CommonOptions& common) {
    ExperimentConfig cfg = default_config(kind);
    bool seed_given = flags.given("seed");
    try {
        if (!common.config_path.empty()) {
            std::ifstream in(common.config_path);
            if (!in) throw ConfigError("cannot read config file '" + common.config_path + "'");
            for (const auto& [key, value] : io::parse_key_values(in)) {
                if (key == "kind") {
                    if (value != to_string(kind)) throw ConfigError("config file is for '" + value + "', not " + to_string(kind));
                    continue;
                }
                set_config_value(cfg, key, value);
                if (key == "seed") seed_given = true;
            }
        }
        flags.apply(cfg);
        validate(cfg);
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    } catch (const LookupError& e) {
        throw ConfigError(e.what());
    }
    if (!seed_given) throw ConfigError("--seed is required");
    return cfg;
}

class OutputDir {
public:
    explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw OutputError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    template <class Writer>
    void write(const std::string& name, Writer&& writer) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
        writer(out);
        out.flush();
        if (!out) throw OutputError("write failed for '" + path.string() + "'");
        artifacts_.push_back(path.string());
    }

    void write_text(const std::string& name, const std::string& text) {
        write(name, [&](std::ostream& o) { o << text; });
    }

    void write_manifest(const std::string& command, const Json& config, std::uint64_t seed, double seconds) {
        Json m;
        m["tool"] = "hclab";
        m["version"] = HCLAB_VERSION;
        m["command"] = command;
        m["seed"] = seed;
        m["config"] = config;
        m["artifacts"] = artifacts_;
        m["wall_clock_seconds"] = seconds;
        write_text("manifest.json", io::dump(m));
    }

private:
    fs::path dir_;
    std::vector<std::string> artifacts_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_asymmetry(const FlagSet& flags, const CommonOptions& common, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = resolve_config(ExperimentKind::asymmetry, flags, common);
    const ReplicationSummary summary = run_asymmetry_experiment(cfg);

    OutputDir dir(common.out_dir);
    dir.write_text("asymmetry_summary.json", io::dump(io::summary_to_json(cfg, summary)));
    dir.write("asymmetry_replications.csv", [&](std::ostream& o) { io::write_asymmetry_csv(o, summary); });
    std::vector<double> nominee, nominator, mutual, difference;
    for (const auto& rep : summary.replications) {
        if (rep.excluded) continue;
        nominee.push_back(rep.coefficients[2]);
        nominator.push_back(rep.coefficients[3]);
        mutual.push_back(rep.mutual_effect);
        difference.push_back(rep.normalized_difference);
    }
    constexpr std::size_t bins = 50;
    dir.write("histogram_nominee.csv", [&](std::ostream& o) { io::write_histogram_csv(o, nominee, bins); });
    dir.write("histogram_nominator.csv", [&](std::ostream& o) { io::write_histogram_csv(o, nominator, bins); });
    dir.write("histogram_mutual.csv", [&](std::ostream& o) { io::write_histogram_csv(o, mutual, bins); });
    dir.write("histogram_normalized_difference.csv", [&](std::ostream& o) { io::write_histogram_csv(o, difference, bins); });
    dir.write_manifest("asymmetry", io::config_to_json(cfg), cfg.seed, seconds_since(start));

    out << "replications used: " << summary.used << " (excluded " << summary.excluded << ")\n";
    out << "fraction beta2 < 0: " << summary.fraction_nominee_negative << '\n';
    out << "fraction normalized (beta2 - beta3) > 0: " << summary.fraction_difference_positive << '\n';
    return kExitOk;
}

int cmd_voter(const FlagSet& flags, const CommonOptions& common, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = resolve_config(ExperimentKind::voter, flags, common);
    const VoterSummary summary = run_voter_experiment(cfg);

    OutputDir dir(common.out_dir);
    dir.write_text("voter_summary.json", io::dump(io::summary_to_json(cfg, summary)));
    dir.write("voter_series.csv", [&](std::ostream& o) { io::write_voter_series_csv(o, summary); });
    const auto& snapshot = summary.replications.front().snapshot;
    if (snapshot) {
        dir.write("voter_homophilous.edges", [&](std::ostream& o) { io::write_edge_list(o, snapshot->homophilous.network); });
        dir.write("voter_control.edges", [&](std::ostream& o) { io::write_edge_list(o, snapshot->control); });
        dir.write("voter_states.csv", [&](std::ostream& o) { io::write_voter_states_csv(o, *snapshot); });
    }
    dir.write_manifest("voter", io::config_to_json(cfg), cfg.seed, seconds_since(start));

    out << "mean |slope| homophilous: " << summary.mean_abs_slope_homophilous
        << "  control: " << summary.mean_abs_slope_control << "  ratio: " << summary.slope_ratio << '\n';
    out << "homophilous seeds with a significant checkpoint: " << summary.fraction_homophilous_significant << '\n';
    out << "t=0 non-significant: " << summary.fraction_t0_nonsignificant << '\n';
    return kExitOk;
}

int cmd_halves(const FlagSet& flags, const CommonOptions& common, const std::string& panel_path,
               const std::string& edges_path, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = resolve_config(ExperimentKind::halves, flags, common);
    OutputDir dir(common.out_dir);

    if (!panel_path.empty()) {
        std::ifstream panel_in(panel_path);
        if (!panel_in) throw ConfigError("cannot read panel file '" + panel_path + "'");
        const OutcomePanel panel = io::read_panel_csv(panel_in, OutcomeKind::continuous);
        SocialNetwork net;
        if (!edges_path.empty()) {
            std::ifstream edges_in(edges_path);
            if (!edges_in) throw ConfigError("cannot read edge list '" + edges_path + "'");
            net = io::read_edge_list(edges_in, panel.nodes());
        } else {
            net = SocialNetwork::from_edges(panel.nodes(), {});
        }
        Rng rng = derive_stream(cfg.seed, 0, 6);
        const HalvesResult r = run_halves_test(net, panel, {cfg.halves_repetitions, cfg.permutations, cfg.alpha}, rng);
        Json j;
        j["experiment"] = "halves";
        j["mode"] = "panel_file";
        j["seed"] = cfg.seed;
        j["panel"] = panel_path;
        j["mean_coefficient"] = r.mean_coefficient;
        j["dispersion"] = r.dispersion;
        j["p_value"] = r.p_value;
        j["reject"] = r.reject;
        dir.write_text("halves_summary.json", io::dump(j));
        dir.write_manifest("halves", io::config_to_json(cfg), cfg.seed, seconds_since(start));
        out << "cross-half coefficient: " << r.mean_coefficient << "  p = " << r.p_value
            << (r.reject ? "  (reject)" : "  (no rejection)") << '\n';
        return kExitOk;
    }

    const HalvesSummary summary = run_halves_experiment(cfg);
    dir.write_text("halves_summary.json", io::dump(io::summary_to_json(cfg, summary)));
    dir.write("halves_runs.csv", [&](std::ostream& o) { io::write_halves_csv(o, summary); });
    dir.write_manifest("halves", io::config_to_json(cfg), cfg.seed, seconds_since(start));
    out << "rejection rate at alpha=" << cfg.alpha << ": " << summary.rejection_rate << '\n';
    return kExitOk;
}

struct DagOptions {
    std::string template_name;
    std::string file;
    std::string treatment;
    std::string outcome;
    std::vector<std::string> condition;
    bool condition_on_observed = false;
    bool print_graph = false;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

int cmd_dag(const DagOptions& o, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    if (o.template_name.empty() == o.file.empty()) throw ConfigError("give exactly one of --template or --file");
    std::optional<CausalDag> dag;
    try {
        if (!o.template_name.empty()) {
            dag = build_template(o.template_name);
        } else {
            std::ifstream in(o.file);
            if (!in) throw ConfigError("cannot read DAG file '" + o.file + "'");
            std::stringstream buffer;
            buffer << in.rdbuf();
            dag = parse_dag_text(buffer.str());
        }
    } catch (const LookupError& e) {
        throw ConfigError(e.what());
    } catch (const ConstructionError& e) {
        throw ConfigError(e.what());
    }
    if (o.print_graph) out << to_dag_text(*dag);
    if (o.treatment.empty() && o.outcome.empty() && o.print_graph) return kExitOk;
    if (o.treatment.empty() || o.outcome.empty()) throw ConfigError("--treatment and --outcome are required");

    std::vector<std::string> conditioning = o.condition;
    if (o.condition_on_observed) {
        for (const auto& name : observed_except(*dag, {o.treatment, o.outcome}))
            if (std::find(conditioning.begin(), conditioning.end(), name) == conditioning.end()) conditioning.push_back(name);
    }
    std::vector<DagPath> paths;
    bool separated = false;
    try {
        paths = confounding_paths_given_observed(*dag, o.treatment, o.outcome, conditioning);
        separated = d_separated(*dag, o.treatment, o.outcome, conditioning);
    } catch (const LookupError& e) {
        throw ConfigError(e.what());
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }

    if (paths.empty()) {
        out << "UNCONFOUNDED\n";
    } else {
        for (const auto& p : paths) out << p.to_string() << '\n';
    }

    if (!o.out_dir.empty()) {
        OutputDir dir(o.out_dir);
        Json j;
        j["source"] = o.template_name.empty() ? o.file : o.template_name;
        j["treatment"] = o.treatment;
        j["outcome"] = o.outcome;
        j["conditioning"] = conditioning;
        j["d_separated"] = separated;
        j["unconfounded"] = paths.empty();
        std::vector<std::string> rendered;
        for (const auto& p : paths) rendered.push_back(p.to_string());
        j["open_backdoor_paths"] = rendered;
        dir.write_text("dag_summary.json", io::dump(j));
        Json config;
        config["source"] = j["source"];
        dir.write_manifest("dag", config, o.seed.value_or(0), seconds_since(start));
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"hclab: homophily and contagion simulation laboratory"};
    app.footer(kCsvColumns);
    app.require_subcommand(1);

    FlagSet asym_flags, voter_flags, halves_flags;
    CommonOptions asym_common, voter_common, halves_common;

    auto* asym = app.add_subcommand("asymmetry", "latent-homophily asymmetry regression experiment");
    add_common(*asym, asym_flags, asym_common);
    asym_flags.add(*asym, "--noise-sd", "noise_sd", "outcome noise sd (0.02)");
    asym_flags.add(*asym, "--trend", "trend", "per-step trend coefficient on X (0.4)");
    asym_flags.add(*asym, "--nominations", "nominations", "nominations per node (1)");
    asym_flags.add(*asym, "--homophilous", "homophilous", "true: homophilous nominations; false: uniform null network");
    asym_flags.add(*asym, "--exclude-isolates", "exclude_isolates", "drop nodes with no ties (false)");
    asym_flags.add(*asym, "--own-lag0", "own_lag0", "also control for own Y(0) (false)");

    auto* voter = app.add_subcommand("voter", "noisy voter model on homophilous and control networks");
    add_common(*voter, voter_flags, voter_common);
    voter_flags.add(*voter, "--p-in", "p_in", "within-cluster edge probability (0.10)");
    voter_flags.add(*voter, "--p-out", "p_out", "cross-cluster edge probability (0.01)");
    voter_flags.add(*voter, "--steps", "steps", "voter updates per run (3000)");
    voter_flags.add(*voter, "--stride", "checkpoint_stride", "steps between checkpoints (50)");
    voter_flags.add(*voter, "--flip-prob", "flip_prob", "probability of taking the opposite choice (0.01)");

    std::string panel_path, edges_path;
    auto* halves = app.add_subcommand("halves", "random-halves contagion test");
    add_common(*halves, halves_flags, halves_common);
    halves_flags.add(*halves, "--source", "halves_source", "contagion | latent_trend");
    halves_flags.add(*halves, "--periods", "periods", "time steps per panel (20)");
    halves_flags.add(*halves, "--strength", "strength", "contagion strength (0.5)");
    halves_flags.add(*halves, "--repetitions", "halves_repetitions", "random bipartitions per test (10)");
    halves_flags.add(*halves, "--permutations", "permutations", "permutation null draws (199)");
    halves_flags.add(*halves, "--alpha", "alpha", "test level (0.05)");
    halves_flags.add(*halves, "--contagion-noise-sd", "contagion_noise_sd", "contagion panel noise sd (1.0)");
    halves_flags.add(*halves, "--contagion-degree", "contagion_degree", "mean degree of the contagion network (6)");
    halves_flags.add(*halves, "--noise-sd", "noise_sd", "latent-trend noise sd (0.02)");
    halves_flags.add(*halves, "--trend", "trend", "latent-trend coefficient (0.4)");
    halves->add_option("--panel", panel_path, "test a panel CSV (t,node_id,y) instead of simulating");
    halves->add_option("--edges", edges_path, "edge list accompanying --panel");

    DagOptions dag_opts;
    auto* dag = app.add_subcommand("dag", "open backdoor paths in a causal graph");
    dag->add_option("--template", dag_opts.template_name, "fig1 | fig3a | fig3b | fig4 | fig5");
    dag->add_option("--file", dag_opts.file, "DAG text file ('src -> dst' lines, 'latent:' list)");
    dag->add_option("--treatment", dag_opts.treatment, "treatment node");
    dag->add_option("--outcome", dag_opts.outcome, "outcome node");
    dag->add_option("--condition,--condition-on", dag_opts.condition, "conditioning nodes")->delimiter(',');
    dag->add_flag("--condition-on-observed", dag_opts.condition_on_observed,
                  "condition on every observed node except treatment and outcome");
    dag->add_flag("--print-graph", dag_opts.print_graph, "print the graph in text format");
    dag->add_option("--seed", dag_opts.seed, "accepted for uniformity; the query is deterministic");
    dag->add_option("--out-dir", dag_opts.out_dir, "write dag_summary.json here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        if (asym->parsed()) return cmd_asymmetry(asym_flags, asym_common, out);
        if (voter->parsed()) return cmd_voter(voter_flags, voter_common, out);
        if (halves->parsed()) return cmd_halves(halves_flags, halves_common, panel_path, edges_path, out);
        if (dag->parsed()) return cmd_dag(dag_opts, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    return kExitConfigError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace hclab::cli
