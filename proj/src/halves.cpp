#include <algorithm>
#include <cmath>
#include <numeric>

#include "hclab/errors.hpp"
#include "hclab/experiments.hpp"

namespace hclab {
namespace {

std::vector<double> other_half_means(const OutcomePanel& panel, const std::vector<bool>& in_first_half) {
    std::vector<double> s(panel.slices(), 0.0);
    std::size_t count = 0;
    for (bool first : in_first_half)
        if (!first) ++count;
    for (std::size_t t = 0; t < panel.slices(); ++t) {
        const auto y = panel.slice(t);
        double sum = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (!in_first_half[i]) sum += y[i];
        s[t] = sum / static_cast<double>(count);
    }
    return s;
}

// Sufficient statistics of the first half for the cross-half coefficient.
// With M = [1, own lag] and the other-half summary constant within each t,
// the coefficient on s is (Frisch-Waugh) s'y~ / (s's - s'M (M'M)^-1 M's),
// and every term reduces to sums over t.
struct FirstHalfStats {
    double rows_per_t = 0.0;           // |J1|
    std::vector<double> lag_sum;       // L_t = sum_i Y_i(t-1), t = 1..T
    std::vector<double> residual_sum;  // sum_i y~_{i,t}
    double gram[2][2] = {{0, 0}, {0, 0}};
    double gram_inv[2][2] = {{0, 0}, {0, 0}};

    FirstHalfStats(const OutcomePanel& panel, const std::vector<bool>& in_first_half) {
        const std::size_t T = panel.slices() - 1;
        for (bool first : in_first_half)
            if (first) rows_per_t += 1.0;
        lag_sum.assign(T, 0.0);
        std::vector<double> response_sum(T, 0.0);
        double lag_sq = 0.0, lag_response = 0.0;
        for (std::size_t t = 1; t <= T; ++t) {
            const auto prev = panel.slice(t - 1);
            const auto cur = panel.slice(t);
            for (std::size_t i = 0; i < prev.size(); ++i) {
                if (!in_first_half[i]) continue;
                lag_sum[t - 1] += prev[i];
                response_sum[t - 1] += cur[i];
                lag_sq += prev[i] * prev[i];
                lag_response += prev[i] * cur[i];
            }
        }
        const double rows = rows_per_t * static_cast<double>(T);
        const double lag_total = std::accumulate(lag_sum.begin(), lag_sum.end(), 0.0);
        const double response_total = std::accumulate(response_sum.begin(), response_sum.end(), 0.0);
        gram[0][0] = rows;
        gram[0][1] = gram[1][0] = lag_total;
        gram[1][1] = lag_sq;
        const double det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
        if (!(std::abs(det) > 1e-12 * gram[0][0] * std::max(gram[1][1], 1e-300)))
            throw SingularDesignError(1, "own_lag");
        gram_inv[0][0] = gram[1][1] / det;
        gram_inv[1][1] = gram[0][0] / det;
        gram_inv[0][1] = gram_inv[1][0] = -gram[0][1] / det;
        const double d0 = gram_inv[0][0] * response_total + gram_inv[0][1] * lag_response;
        const double d1 = gram_inv[1][0] * response_total + gram_inv[1][1] * lag_response;
        residual_sum.resize(T);
        for (std::size_t t = 0; t < T; ++t) residual_sum[t] = response_sum[t] - rows_per_t * d0 - d1 * lag_sum[t];
    }

    // lagged[t] is the other-half summary at time t, t = 0..T-1.
    double coefficient(std::span<const double> lagged) const {
        double v0 = 0.0, v1 = 0.0, ss = 0.0, sy = 0.0;
        for (std::size_t t = 0; t < lag_sum.size(); ++t) {
            const double s = lagged[t];
            v0 += rows_per_t * s;
            v1 += lag_sum[t] * s;
            ss += rows_per_t * s * s;
            sy += s * residual_sum[t];
        }
        const double explained = v0 * (gram_inv[0][0] * v0 + gram_inv[0][1] * v1) +
                                 v1 * (gram_inv[1][0] * v0 + gram_inv[1][1] * v1);
        const double denom = ss - explained;
        if (!(denom > kRankTolerance * std::max(ss, 1e-300))) throw SingularDesignError(2, "other_half_mean_lag");
        return sy / denom;
    }
};

std::vector<bool> draw_partition(std::size_t n, Rng& rng, std::size_t& redraws) {
    std::bernoulli_distribution coin(0.5);
    std::vector<bool> first(n);
    while (true) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            first[i] = coin(rng);
            if (first[i]) ++count;
        }
        if (count >= 3 && count < n) return first;
        ++redraws;
    }
}

}  // namespace

HalvesDesign build_halves_design(const OutcomePanel& panel, const std::vector<bool>& in_first_half) {
    if (panel.slices() < 3) throw ArgumentError("halves design needs at least three time slices");
    if (in_first_half.size() != panel.nodes()) throw DimensionError("halves design: membership length != panel width");
    const auto s = other_half_means(panel, in_first_half);
    const std::size_t T = panel.slices() - 1;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < in_first_half.size(); ++i)
        if (in_first_half[i]) members.push_back(i);
    if (members.empty() || members.size() == in_first_half.size())
        throw ArgumentError("halves design: both halves must be non-empty");

    HalvesDesign d;
    const auto rows = static_cast<Eigen::Index>(members.size() * T);
    d.X.values.resize(rows, 3);
    d.X.names = {"intercept", "own_lag", "other_half_mean_lag"};
    d.y.resize(rows);
    Eigen::Index r = 0;
    for (std::size_t t = 1; t <= T; ++t) {
        for (std::size_t i : members) {
            d.X.values(r, 0) = 1.0;
            d.X.values(r, 1) = panel.at(t - 1, i);
            d.X.values(r, 2) = s[t - 1];
            d.y(r) = panel.at(t, i);
            ++r;
        }
    }
    return d;
}

OutcomePanel permute_increments(const OutcomePanel& panel, Rng& rng) {
    const std::size_t T = panel.slices() - 1;
    const std::size_t n = panel.nodes();
    std::vector<std::vector<double>> values(panel.slices(), std::vector<double>(n));
    std::vector<double> increments(T);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < T; ++t) increments[t] = panel.at(t + 1, i) - panel.at(t, i);
        std::shuffle(increments.begin(), increments.end(), rng);
        values[0][i] = panel.at(0, i);
        for (std::size_t t = 1; t <= T; ++t) values[t][i] = values[t - 1][i] + increments[t - 1];
    }
    return OutcomePanel(std::move(values), panel.kind());
}

HalvesResult run_halves_test(const SocialNetwork& net, const OutcomePanel& panel, const HalvesOptions& options,
                             Rng& rng) {
    if (panel.slices() < 3) throw ArgumentError("halves test needs at least three time slices");
    if (panel.nodes() != net.size()) throw DimensionError("halves test: panel and network sizes differ");
    if (panel.nodes() < 4) throw ArgumentError("halves test needs at least four nodes");
    if (options.repetitions < 1) throw ArgumentError("halves test needs at least one repetition");
    if (options.permutations < 1) throw ArgumentError("halves test needs at least one permutation");

    HalvesResult result;
    std::vector<std::vector<bool>> partitions;
    partitions.reserve(options.repetitions);
    for (std::size_t rep = 0; rep < options.repetitions; ++rep)
        partitions.push_back(draw_partition(panel.nodes(), rng, result.redrawn_partitions));

    auto mean_over_partitions = [&](const OutcomePanel& data, std::vector<double>* per_partition) {
        const std::size_t T = data.slices() - 1;
        double sum = 0.0;
        for (const auto& first : partitions) {
            const FirstHalfStats stats(data, first);
            const auto s = other_half_means(data, first);
            const double c = stats.coefficient(std::span<const double>(s.data(), T));
            if (per_partition) per_partition->push_back(c);
            sum += c;
        }
        return sum / static_cast<double>(partitions.size());
    };

    result.mean_coefficient = mean_over_partitions(panel, &result.coefficients);
    const double reps = static_cast<double>(options.repetitions);
    if (options.repetitions > 1) {
        double ss = 0.0;
        for (double c : result.coefficients) ss += (c - result.mean_coefficient) * (c - result.mean_coefficient);
        result.dispersion = std::sqrt(ss / (reps - 1.0));
    }

    // Null: each node's increments shuffled in time independently, same partitions.
    std::size_t as_extreme = 0;
    for (std::size_t k = 0; k < options.permutations; ++k) {
        const double null_stat = mean_over_partitions(permute_increments(panel, rng), nullptr);
        if (std::abs(null_stat) >= std::abs(result.mean_coefficient)) ++as_extreme;
    }
    result.p_value = static_cast<double>(1 + as_extreme) / static_cast<double>(options.permutations + 1);
    result.reject = result.p_value <= options.alpha;
    return result;
}

}  // namespace hclab
