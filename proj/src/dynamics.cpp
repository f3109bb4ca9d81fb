#include "hclab/dynamics.hpp"

#include <string>

#include "hclab/errors.hpp"

namespace hclab {

OutcomePanel::OutcomePanel(std::vector<std::vector<double>> values, OutcomeKind kind)
    : values_(std::move(values)), kind_(kind) {
    if (values_.empty()) throw DimensionError("outcome panel needs at least one time slice");
    const std::size_t n = values_.front().size();
    for (const auto& row : values_) {
        if (row.size() != n) throw DimensionError("outcome panel is not rectangular");
        if (kind_ == OutcomeKind::binary) {
            for (double v : row)
                if (v != 0.0 && v != 1.0) throw ArgumentError("binary panel contains a value outside {0,1}");
        }
    }
}

OutcomePanel latent_trend_panel(const TraitAssignment& traits, double noise_sd, double trend, Rng& rng,
                                std::size_t periods) {
    if (!(noise_sd > 0.0)) throw ArgumentError("latent_trend_panel: noise_sd must be positive");
    if (periods == 0) throw ArgumentError("latent_trend_panel: need at least one period");
    const std::size_t n = traits.size();
    std::normal_distribution<double> noise(0.0, noise_sd);

    std::vector<std::vector<double>> y(periods + 1, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double centered = traits.x[i] - 0.5;
        y[0][i] = centered * centered * centered + noise(rng);
    }
    for (std::size_t t = 1; t <= periods; ++t) {
        for (std::size_t i = 0; i < n; ++i) y[t][i] = y[t - 1][i] + trend * traits.x[i] + noise(rng);
    }
    return OutcomePanel(std::move(y), OutcomeKind::continuous);
}

std::vector<int> voter_init(std::size_t n, Rng& rng) {
    if (n == 0) throw ArgumentError("voter_init: n must be positive");
    std::bernoulli_distribution coin(0.5);
    std::vector<int> y(n);
    for (int& v : y) v = coin(rng) ? 1 : 0;
    return y;
}

VoterProcess::VoterProcess(const SocialNetwork& net, std::vector<int> initial, double flip_prob)
    : net_(&net), state_(std::move(initial)), flip_prob_(flip_prob) {
    if (state_.empty()) throw ArgumentError("voter model: empty initial configuration");
    if (state_.size() != net.size()) throw DimensionError("voter model: initial configuration length != network size");
    if (!net.is_symmetric()) throw ArgumentError("voter model: network must be symmetric");
    if (!(flip_prob >= 0.0 && flip_prob < 0.5)) throw ArgumentError("voter model: flip_prob must lie in [0, 0.5)");
    for (int v : state_)
        if (v != 0 && v != 1) throw ArgumentError("voter model: initial configuration must be binary");
}

VoterProcess::Update VoterProcess::step(Rng& rng) {
    ++steps_;
    std::uniform_int_distribution<NodeId> pick_node(0, static_cast<NodeId>(state_.size() - 1));
    Update u;
    u.updater = pick_node(rng);
    auto nbrs = net_->out_neighbors(u.updater);
    if (nbrs.empty()) {
        u.isolated = true;
        return u;
    }
    std::uniform_int_distribution<std::size_t> pick_nbr(0, nbrs.size() - 1);
    u.neighbor = nbrs[pick_nbr(rng)];
    u.flipped = flip_prob_ > 0.0 && uniform01(rng) < flip_prob_;
    const int copied = state_[u.neighbor];
    state_[u.updater] = u.flipped ? 1 - copied : copied;
    return u;
}

OutcomePanel voter_run(const SocialNetwork& net, const std::vector<int>& y0, std::size_t steps, double flip_prob,
                       std::span<const std::size_t> checkpoints, Rng& rng) {
    if (checkpoints.empty()) throw ArgumentError("voter_run: no checkpoints requested");
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        if (checkpoints[k] > steps) throw ArgumentError("voter_run: checkpoint beyond the requested step count");
        if (k > 0 && checkpoints[k] < checkpoints[k - 1]) throw ArgumentError("voter_run: checkpoints must be ascending");
    }
    VoterProcess process(net, y0, flip_prob);
    std::vector<std::vector<double>> slices;
    slices.reserve(checkpoints.size());
    auto record = [&] { slices.emplace_back(process.state().begin(), process.state().end()); };

    std::size_t next = 0;
    while (next < checkpoints.size() && checkpoints[next] == 0) {
        record();
        ++next;
    }
    for (std::size_t s = 1; s <= steps; ++s) {
        process.step(rng);
        while (next < checkpoints.size() && checkpoints[next] == s) {
            record();
            ++next;
        }
    }
    return OutcomePanel(std::move(slices), OutcomeKind::binary);
}

std::vector<std::size_t> checkpoint_schedule(std::size_t horizon, std::size_t stride) {
    if (stride == 0) throw ArgumentError("checkpoint stride must be positive");
    std::vector<std::size_t> cps;
    for (std::size_t s = 0; s <= horizon; s += stride) cps.push_back(s);
    if (cps.back() != horizon) cps.push_back(horizon);
    return cps;
}

OutcomePanel contagion_panel(const SocialNetwork& net, double strength, std::size_t periods, double noise_sd, Rng& rng) {
    std::normal_distribution<double> standard(0.0, 1.0);
    std::vector<double> y0(net.size());
    for (double& v : y0) v = standard(rng);
    return contagion_panel(net, std::move(y0), strength, periods, noise_sd, rng);
}

OutcomePanel contagion_panel(const SocialNetwork& net, std::vector<double> y0, double strength, std::size_t periods,
                             double noise_sd, Rng& rng) {
    if (periods == 0) throw ArgumentError("contagion_panel: need at least one period");
    if (!(noise_sd > 0.0)) throw ArgumentError("contagion_panel: noise_sd must be positive");
    if (y0.size() != net.size()) throw DimensionError("contagion_panel: initial vector length != network size");
    const std::size_t n = net.size();
    std::normal_distribution<double> noise(0.0, noise_sd);

    std::vector<std::vector<double>> y;
    y.reserve(periods + 1);
    y.push_back(std::move(y0));
    for (std::size_t t = 1; t <= periods; ++t) {
        const auto& prev = y.back();
        std::vector<double> next(n);
        for (NodeId i = 0; i < n; ++i) {
            auto nbrs = net.out_neighbors(i);
            double influence = 0.0;
            if (!nbrs.empty()) {
                for (NodeId j : nbrs) influence += prev[j];
                influence /= static_cast<double>(nbrs.size());
            }
            next[i] = prev[i] + strength * influence + noise(rng);
        }
        y.push_back(std::move(next));
    }
    return OutcomePanel(std::move(y), OutcomeKind::continuous);
}

}  // namespace hclab
