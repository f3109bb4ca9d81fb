// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hclab/causal_dag.hpp"
#include "hclab/cli.hpp"
#include "hclab/experiments.hpp"
#include "hclab/inference.hpp"
#include "hclab/io.hpp"
#include "oracles.hpp"

using namespace hclab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    std::string id;
    std::string title;
    bool pass = false;
    std::string detail;
};

struct Settings {
    std::size_t workers = 1;
    std::string cli;
    fs::path scratch;
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

ExperimentConfig asymmetry_config(std::size_t reps, const Settings& s) {
    auto cfg = default_config(ExperimentKind::asymmetry);
    cfg.replications = reps;
    cfg.seed = 1;
    cfg.workers = s.workers;
    return cfg;
}

std::vector<Verdict> asymmetry_criteria(const Settings& s) {
    std::vector<Verdict> out;

    const auto t0 = std::chrono::steady_clock::now();
    const auto smoke = run_asymmetry_experiment(asymmetry_config(500, s));
    const double smoke_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool smoke_ok = std::abs(smoke.fraction_nominee_negative - 0.802) <= 0.06 &&
                          std::abs(smoke.fraction_difference_positive - 0.77) <= 0.06;
    out.push_back({"1-smoke", "asymmetry fractions, 500 replications (+/-0.06)", smoke_ok,
                   "beta2<0: " + fmt(smoke.fraction_nominee_negative) + " (target 0.802), diff>0: " +
                       fmt(smoke.fraction_difference_positive) + " (target 0.77), " + fmt(smoke_secs, 1) + " s"});

    const auto full = run_asymmetry_experiment(asymmetry_config(5000, s));
    const bool in_range = within(full.fraction_nominee_negative, 0.77, 0.83) &&
                          within(full.fraction_difference_positive, 0.74, 0.80);
    out.push_back({"1", "asymmetry fractions, n=400, 5000 replications", in_range,
                   "beta2<0: " + fmt(full.fraction_nominee_negative) + " in [0.77,0.83], diff>0: " +
                       fmt(full.fraction_difference_positive) + " in [0.74,0.80], excluded " +
                       std::to_string(full.excluded)});

    const double mutual = full.mean_mutual, named = full.mean_nominee, namer = full.mean_nominator;
    const bool same_sign = (mutual > 0 && named > 0 && namer > 0) || (mutual < 0 && named < 0 && namer < 0);
    const bool ordered = std::abs(mutual) > std::abs(named) && std::abs(named) > std::abs(namer);
    out.push_back({"2", "mutual > named > namer ordering", same_sign && ordered,
                   "mean(b2+b3)=" + fmt(mutual, 5) + ", mean b2=" + fmt(named, 5) + ", mean b3=" + fmt(namer, 5)});
    return out;
}

Verdict null_criterion(const Settings& s) {
    auto cfg = asymmetry_config(2000, s);
    cfg.homophilous = false;
    const auto r = run_asymmetry_experiment(cfg);
    const bool ok = std::abs(r.fraction_nominee_negative - 0.5) <= 0.03 &&
                    std::abs(r.fraction_difference_positive - 0.5) <= 0.03;
    return {"3", "trait-independent network drives both fractions to 0.5", ok,
            "beta2<0: " + fmt(r.fraction_nominee_negative) + ", diff>0: " + fmt(r.fraction_difference_positive) +
                " (0.5 +/- 0.03, 2000 replications)"};
}

Verdict voter_criterion(const Settings& s) {
    auto cfg = default_config(ExperimentKind::voter);
    cfg.seed = 1;
    cfg.workers = s.workers;
    const auto r = run_voter_experiment(cfg);
    const bool ok = r.slope_ratio >= 2.0 && r.fraction_homophilous_significant >= 0.5 &&
                    r.fraction_t0_nonsignificant >= 0.9;
    return {"4", "voter confounding (n=200, 3000 steps, 30 paired seeds)", ok,
            "|slope| ratio " + fmt(r.slope_ratio, 3) + " (>=2), homophilous seeds significant " +
                fmt(r.fraction_homophilous_significant, 3) + " (>=0.5), t=0 non-significant " +
                fmt(r.fraction_t0_nonsignificant, 3) + " (>=0.9)"};
}

std::vector<Verdict> halves_criteria(const Settings& s) {
    auto run = [&](HalvesSource source, double strength) {
        auto cfg = default_config(ExperimentKind::halves);
        cfg.seed = 1;
        cfg.workers = s.workers;
        cfg.halves_source = source;
        cfg.strength = strength;
        return run_halves_experiment(cfg).rejection_rate;
    };
    const double a = run(HalvesSource::contagion, 0.0);
    const double b = run(HalvesSource::latent_trend, 0.0);
    const double c = run(HalvesSource::contagion, 0.5);
    return {
        {"5a", "halves test size, no contagion", within(a, 0.02, 0.10), "rejection " + fmt(a, 3) + " in [0.02,0.10]"},
        {"5b", "halves test size, latent homophily only", within(b, 0.02, 0.10),
         "rejection " + fmt(b, 3) + " in [0.02,0.10]"},
        {"5c", "halves test power, contagion strength 0.5", c >= 0.8, "rejection " + fmt(c, 3) + " (>=0.8)"},
    };
}

Verdict dag_criterion() {
    Rng rng = derive_stream(1, 0);
    std::size_t queries = 0, agree = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 11;
        const double p = 0.1 + 0.3 * uniform01(rng);
        const auto g = oracle::random_dag(n, p, rng);
        std::vector<CausalDag::NodeSpec> nodes;
        for (std::size_t v = 0; v < n; ++v) nodes.push_back({"v" + std::to_string(v), false});
        std::vector<std::pair<std::string, std::string>> edges;
        for (auto [x, y] : g.edges) edges.emplace_back("v" + std::to_string(x), "v" + std::to_string(y));
        const CausalDag dag(nodes, edges);
        for (int q = 0; q < 3; ++q) {
            const std::size_t a = rng() % n;
            std::size_t b = rng() % n;
            if (a == b) b = (b + 1) % n;
            std::set<std::size_t> given;
            std::vector<std::size_t> given_vec;
            for (std::size_t v = 0; v < n; ++v)
                if (v != a && v != b && uniform01(rng) < 0.35) {
                    given.insert(v);
                    given_vec.push_back(v);
                }
            ++queries;
            agree += d_separated(dag, a, b, given_vec) == oracle::d_separated(g, a, b, given);
        }
    }

    const auto fig1 = build_template("fig1");
    const auto observed = observed_except(fig1, {"Yj_t1", "Yi_t"});
    const bool fig1_connected = !d_separated(fig1.without_edge("Yj_t1", "Yi_t"), "Yj_t1", "Yi_t", observed);
    bool fig3_clean = true;
    for (const char* name : {"fig3a", "fig3b"}) {
        const auto dag = build_template(name);
        fig3_clean = fig3_clean &&
                     confounding_paths_given_observed(dag, "Yj_t1", "Yi_t", observed_except(dag, {"Yj_t1", "Yi_t"})).empty();
    }
    return {"6", "d-separation oracle and template checks", agree == queries && fig1_connected && fig3_clean,
            std::to_string(agree) + "/" + std::to_string(queries) + " queries agree on 1000 DAGs; fig1 without contagion " +
                (fig1_connected ? "d-connected" : "SEPARATED") + "; fig3a/fig3b " +
                (fig3_clean ? "unconfounded" : "CONFOUNDED")};
}

Verdict numerics_criterion() {
    Rng rng = derive_stream(1, 7);
    std::normal_distribution<double> normal;
    double ols_err = 0.0, logit_err = 0.0, cov_err = 0.0;
    std::size_t separated = 0;

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 30 + rng() % 70, cols = 2 + rng() % 5;
        DesignMatrix X{Eigen::MatrixXd(rows, cols), {}};
        oracle::Matrix xr(rows, oracle::Vector(cols));
        Eigen::VectorXd y(rows);
        oracle::Vector yr(rows);
        for (std::size_t c = 0; c < cols; ++c) X.names.push_back("x" + std::to_string(c));
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) xr[r][c] = X.values(r, c) = c == 0 ? 1.0 : normal(rng);
            yr[r] = y(r) = normal(rng) + X.values.row(r).sum();
        }
        const auto fit = ols(X, y);
        const auto ref = oracle::normal_equations(xr, yr);
        for (std::size_t k = 0; k < cols; ++k)
            ols_err = std::max(ols_err, std::abs(fit.coefficients(k) - ref.beta[k]) / std::max(1.0, std::abs(ref.beta[k])));
    }

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 20 + rng() % 40, cols = 2 + rng() % 2;
        DesignMatrix X{Eigen::MatrixXd(rows, cols), {}};
        oracle::Matrix xr(rows, oracle::Vector(cols));
        Eigen::VectorXd y(rows);
        oracle::Vector yr(rows);
        for (std::size_t c = 0; c < cols; ++c) X.names.push_back("x" + std::to_string(c));
        for (std::size_t r = 0; r < rows; ++r) {
            double eta = 0.2;
            for (std::size_t c = 0; c < cols; ++c) {
                xr[r][c] = X.values(r, c) = c == 0 ? 1.0 : normal(rng);
                if (c > 0) eta += 0.7 * X.values(r, c);
            }
            yr[r] = y(r) = uniform01(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
        }
        const auto fit = logistic_irls(X, y);
        if (fit.separated) {
            ++separated;
            continue;
        }
        const auto ref = oracle::logistic_mle(xr, yr);
        oracle::Vector b(fit.coefficients.data(), fit.coefficients.data() + cols);
        for (std::size_t k = 0; k < cols; ++k) logit_err = std::max(logit_err, std::abs(fit.coefficients(k) - ref[k]));
        const auto fd = oracle::finite_difference_covariance(xr, yr, b);
        for (std::size_t i = 0; i < cols; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                const double scale = std::sqrt(std::abs(fd[i][i] * fd[j][j]));
                cov_err = std::max(cov_err, std::abs(fit.covariance(i, j) - fd[i][j]) / scale);
            }
    }
    const bool ok = ols_err <= 1e-10 && logit_err <= 1e-6 && cov_err <= 1e-4 && separated == 0;
    std::ostringstream d;
    d.precision(2);
    d << std::scientific << "OLS max err " << ols_err << " (<=1e-10), IRLS max err " << logit_err
      << " (<=1e-6), covariance rel err " << cov_err << " (<=1e-4), separated " << separated;
    return {"7", "numerics oracles (100 OLS, 100 logistic instances)", ok, d.str()};
}

Verdict spurious_criterion() {
    Rng rng = derive_stream(1, 8);
    std::normal_distribution<double> normal;
    const std::size_t n = 100000;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double rho_jy = 2 * uniform01(rng) - 1, rho_xx = 2 * uniform01(rng) - 1, rho_xy = 2 * uniform01(rng) - 1;
        DesignMatrix X{Eigen::MatrixXd(n, 2), {"intercept", "sender"}};
        Eigen::VectorXd y(n);
        for (std::size_t r = 0; r < n; ++r) {
            const double xj = normal(rng);
            const double xi = rho_xx * xj + std::sqrt(1 - rho_xx * rho_xx) * normal(rng);
            X.values(r, 0) = 1.0;
            X.values(r, 1) = rho_jy * xj + std::sqrt(1 - rho_jy * rho_jy) * normal(rng);
            y(r) = rho_xy * xi + std::sqrt(1 - rho_xy * rho_xy) * normal(rng);
        }
        auto standardize = [](Eigen::Ref<Eigen::VectorXd> v) {
            const double m = v.mean();
            v.array() -= m;
            v /= std::sqrt(v.squaredNorm() / (v.size() - 1));
        };
        standardize(X.values.col(1));
        standardize(y);
        const double simulated = ols(X, y).coefficients(1);
        worst = std::max(worst, std::abs(simulated - spurious_coefficient(rho_jy, rho_xx, rho_xy)));
    }
    return {"8", "spurious-coefficient product vs simulation (20 triples, n=1e5)", worst <= 0.03,
            "max |simulated - formula| " + fmt(worst) + " (<=0.03)"};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int invoke_cli(const Settings& s, const std::vector<std::string>& args) {
    if (s.cli.empty()) {
        std::ostringstream out, err;
        return cli::run(args, out, err);
    }
    std::string cmd = "\"" + s.cli + "\"";
    for (const auto& a : args) cmd += " \"" + a + "\"";
    cmd += " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return status == 0 ? 0 : 1;
}

Verdict determinism_criterion(const Settings& s) {
    struct Case {
        std::string name;
        std::vector<std::string> args;
        std::string summary;
        bool parallel;
    };
    const std::vector<Case> cases{
        {"asymmetry", {"asymmetry", "--n", "200", "--reps", "60", "--seed", "5"}, "asymmetry_summary.json", true},
        {"voter", {"voter", "--n", "100", "--reps", "6", "--steps", "1000", "--seed", "5"}, "voter_summary.json", true},
        {"halves", {"halves", "--n", "100", "--reps", "8", "--periods", "10", "--seed", "5"}, "halves_summary.json", true},
        {"dag", {"dag", "--template", "fig1", "--treatment", "Yj_t1", "--outcome", "Yi_t", "--condition-on-observed",
                 "--seed", "5"},
         "dag_summary.json", false},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        std::vector<std::string> contents;
        const std::vector<std::string> worker_counts = c.parallel ? std::vector<std::string>{"1", "4"}
                                                                  : std::vector<std::string>{""};
        bool failed_run = false;
        for (const auto& w : worker_counts) {
            for (int rep = 0; rep < 2; ++rep) {
                const fs::path dir = s.scratch / (c.name + "_w" + (w.empty() ? "na" : w) + "_" + std::to_string(rep));
                fs::remove_all(dir);
                auto args = c.args;
                if (!w.empty()) {
                    args.push_back("--workers");
                    args.push_back(w);
                }
                args.push_back("--out-dir");
                args.push_back(dir.string());
                if (invoke_cli(s, args) != 0) failed_run = true;
                contents.push_back(read_file(dir / c.summary));
            }
        }
        bool same = !failed_run && !contents.front().empty();
        for (const auto& text : contents) same = same && text == contents.front();
        ok = ok && same;
        detail += c.name + (same ? " identical" : " DIFFERS") + (c.parallel ? " (workers 1,4)" : "") + "; ";
    }
    return {"9", "CLI determinism across repeats and worker counts", ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hclab acceptance run"};
    Settings settings;
    settings.workers = std::max(1u, std::thread::hardware_concurrency());
    std::string scratch = (fs::temp_directory_path() / "hclab_acceptance").string();
    std::vector<std::string> only;
    app.add_option("--workers", settings.workers, "worker threads for the Monte Carlo criteria");
    app.add_option("--cli", settings.cli, "path to the hclab executable (default: in-process)");
    app.add_option("--scratch", scratch, "directory for CLI outputs");
    app.add_option("--only", only, "run only these criteria (1 2 3 4 5 6 7 8 9)");
    CLI11_PARSE(app, argc, argv);
    settings.scratch = scratch;
    fs::create_directories(settings.scratch);

    auto wanted = [&](const std::string& id) {
        return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
    };

    std::vector<std::pair<std::string, std::function<std::vector<Verdict>()>>> groups{
        {"1", [&] { return asymmetry_criteria(settings); }},
        {"3", [&] { return std::vector<Verdict>{null_criterion(settings)}; }},
        {"4", [&] { return std::vector<Verdict>{voter_criterion(settings)}; }},
        {"5", [&] { return halves_criteria(settings); }},
        {"6", [&] { return std::vector<Verdict>{dag_criterion()}; }},
        {"7", [&] { return std::vector<Verdict>{numerics_criterion()}; }},
        {"8", [&] { return std::vector<Verdict>{spurious_criterion()}; }},
        {"9", [&] { return std::vector<Verdict>{determinism_criterion(settings)}; }},
    };

    std::size_t failures = 0, total = 0;
    for (const auto& [id, group] : groups) {
        if (!wanted(id) && !(id == "1" && wanted("2"))) continue;
        const auto start = std::chrono::steady_clock::now();
        for (const auto& v : group()) {
            ++total;
            failures += !v.pass;
            std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << v.id << ": " << v.title << " | " << v.detail
                      << std::endl;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "      (" << fmt(secs, 1) << " s)" << std::endl;
    }
    std::cout << (total - failures) << "/" << total << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
