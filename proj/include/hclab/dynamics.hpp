#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hclab/network.hpp"
#include "hclab/population.hpp"
#include "hclab/rng.hpp"

namespace hclab {

enum class OutcomeKind { continuous, binary };

/// Time-major outcome table: slice(t)[i] is Y_i(t).
class OutcomePanel {
public:
    OutcomePanel() = default;
    /// Throws DimensionError for ragged input and ArgumentError for
    /// non-binary values in a binary panel.
    OutcomePanel(std::vector<std::vector<double>> values, OutcomeKind kind);

    std::size_t slices() const noexcept { return values_.size(); }
    std::size_t nodes() const noexcept { return values_.empty() ? 0 : values_.front().size(); }
    OutcomeKind kind() const noexcept { return kind_; }

    std::span<const double> slice(std::size_t t) const { return values_.at(t); }
    double at(std::size_t t, std::size_t i) const { return values_.at(t).at(i); }
    const std::vector<std::vector<double>>& values() const noexcept { return values_; }

private:
    std::vector<std::vector<double>> values_;
    OutcomeKind kind_ = OutcomeKind::continuous;
};

/// Latent-trend outcomes with no interaction between nodes:
///   Y(0) = (x - 0.5)^3 + e,  Y(t) = Y(t-1) + trend * x + e  for t = 1..periods,
/// e ~ N(0, noise_sd^2) independent. periods defaults to the two steps of the
/// asymmetry experiment.
OutcomePanel latent_trend_panel(const TraitAssignment& traits, double noise_sd, double trend, Rng& rng,
                                std::size_t periods = 2);

/// Fair-coin initial choices.
std::vector<int> voter_init(std::size_t n, Rng& rng);

/// Noisy voter model on a symmetric network. Each step picks an updater
/// uniformly; an updater with neighbours copies a uniform neighbour's choice
/// with probability 1 - flip_prob and takes the opposite choice otherwise.
/// Isolated updaters keep their choice.
class VoterProcess {
public:
    struct Update {
        NodeId updater = 0;
        bool isolated = false;
        NodeId neighbor = 0;
        bool flipped = false;
    };

    VoterProcess(const SocialNetwork& net, std::vector<int> initial, double flip_prob);

    Update step(Rng& rng);
    const std::vector<int>& state() const noexcept { return state_; }
    std::size_t steps_taken() const noexcept { return steps_; }

private:
    const SocialNetwork* net_;
    std::vector<int> state_;
    double flip_prob_;
    std::size_t steps_ = 0;
};

/// Runs `steps` voter updates from y0 and records the configuration at every
/// step count listed in `checkpoints` (ascending, each <= steps). Slice k of
/// the returned panel is the state after checkpoints[k] steps.
OutcomePanel voter_run(const SocialNetwork& net, const std::vector<int>& y0, std::size_t steps, double flip_prob,
                       std::span<const std::size_t> checkpoints, Rng& rng);

/// Checkpoints 0, stride, 2*stride, ... up to and including horizon.
std::vector<std::size_t> checkpoint_schedule(std::size_t horizon, std::size_t stride);

/// Linear contagion panel used as a positive control:
///   Y(t) = Y(t-1) + strength * mean_{j in out(i)} Y_j(t-1) + N(0, noise_sd^2),
/// with the mean taken as 0 for nodes without out-neighbours. Y(0) ~ N(0,1).
OutcomePanel contagion_panel(const SocialNetwork& net, double strength, std::size_t periods, double noise_sd, Rng& rng);

/// Same process from a caller-supplied Y(0).
OutcomePanel contagion_panel(const SocialNetwork& net, std::vector<double> y0, double strength, std::size_t periods,
                             double noise_sd, Rng& rng);

}  // namespace hclab
