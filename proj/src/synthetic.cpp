#include "seqbench/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "seqbench/errors.hpp"
#include "seqbench/random.hpp"

namespace seqbench {

namespace {

void check_stochastic(const std::vector<double>& row, const char* what) {
    double sum = 0.0;
    for (double p : row) {
        if (!(p >= 0.0)) throw std::invalid_argument(std::string(what) + " has a negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument(std::string(what) + " does not sum to 1");
}

std::size_t draw(const std::vector<double>& probs, RandomStream& rng) {
    const double u = rng.next_unit();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_positive = i;
        if (u < acc) return i;
    }
    return last_positive;
}

// Every state reachable from state 0 and state 0 reachable from every state.
bool irreducible(const std::vector<std::vector<double>>& p) {
    const std::size_t n = p.size();
    auto reaches_all = [&](bool forward) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                const double w = forward ? p[i][j] : p[j][i];
                if (w > 0.0 && !seen[j]) {
                    seen[j] = true;
                    stack.push_back(j);
                }
            }
        }
        return std::find(seen.begin(), seen.end(), false) == seen.end();
    };
    return reaches_all(true) && reaches_all(false);
}

}  // namespace

void PlantedChain::validate() const {
    const std::size_t n = states.size();
    if (n == 0) throw std::invalid_argument("chain has no states");
    if (transition_matrix.size() != n || initial_distribution.size() != n) {
        throw std::invalid_argument("chain shape mismatch");
    }
    for (const auto& row : transition_matrix) {
        if (row.size() != n) throw std::invalid_argument("transition matrix is not square");
        check_stochastic(row, "transition row");
    }
    check_stochastic(initial_distribution, "initial distribution");
}

PlantedChain PlantedChain::uniform(std::size_t num_states) {
    PlantedChain c;
    for (std::size_t i = 0; i < num_states; ++i) c.states.push_back("s" + std::to_string(i));
    const double p = 1.0 / static_cast<double>(num_states);
    c.transition_matrix.assign(num_states, std::vector<double>(num_states, p));
    c.initial_distribution.assign(num_states, p);
    return c;
}

PlantedChain PlantedChain::identity(std::size_t num_states) {
    PlantedChain c = uniform(num_states);
    for (std::size_t i = 0; i < num_states; ++i) {
        for (std::size_t j = 0; j < num_states; ++j) c.transition_matrix[i][j] = i == j ? 1.0 : 0.0;
    }
    return c;
}

StationaryResult stationary_and_entropy(const PlantedChain& chain) {
    chain.validate();
    const auto& p = chain.transition_matrix;
    const std::size_t n = p.size();
    if (!irreducible(p)) throw NoConvergence("chain is reducible: the stationary distribution is not unique");

    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    bool converged = false;
    for (std::size_t iter = 0; iter < kPowerIterationBudget; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] += 0.5 * pi[i];
            for (std::size_t j = 0; j < n; ++j) next[j] += 0.5 * pi[i] * p[i][j];
        }
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= total;
            residual += std::abs(next[i] - pi[i]);
        }
        pi.swap(next);
        if (residual < kStationaryTolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NoConvergence("power iteration did not converge within the iteration budget");

    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (double pij : p[i]) {
            if (pij > 0.0) row -= pij * std::log2(pij);
        }
        h += pi[i] * row;
    }
    return {std::move(pi), h};
}

std::vector<SampledSequence> sample_sequences(const PlantedChain& chain, std::size_t num_users,
                                              std::size_t seq_per_user, std::size_t seq_len,
                                              std::uint64_t seed) {
    chain.validate();
    RandomStream rng(seed);
    std::vector<SampledSequence> out;
    out.reserve(num_users * seq_per_user);
    char name[32];
    for (std::size_t u = 0; u < num_users; ++u) {
        std::snprintf(name, sizeof name, "u%04zu", u);
        for (std::size_t s = 0; s < seq_per_user; ++s) {
            SampledSequence seq{name, {}};
            std::size_t state = draw(chain.initial_distribution, rng);
            seq.items.push_back(chain.states[state]);
            for (std::size_t t = 1; t < seq_len; ++t) {
                state = draw(chain.transition_matrix[state], rng);
                seq.items.push_back(chain.states[state]);
            }
            out.push_back(std::move(seq));
        }
    }
    return out;
}

RatingLog sample_log(const PlantedChain& chain, std::size_t num_users, std::size_t seq_per_user,
                     std::size_t seq_len, const GapPattern& gaps, std::uint64_t seed) {
    if (gaps.step_gap < 0 || gaps.session_gap <= gaps.step_gap) {
        throw std::invalid_argument("session gap must exceed the step gap");
    }
    RatingLog log;
    std::int64_t clock = gaps.origin;
    std::string previous_user;
    for (auto& seq : sample_sequences(chain, num_users, seq_per_user, seq_len, seed)) {
        if (seq.user != previous_user) {
            clock = gaps.origin;
            previous_user = seq.user;
        }
        for (auto& item : seq.items) {
            log.ratings.push_back({seq.user, std::move(item), 1.0, clock});
            clock += gaps.step_gap;
        }
        // The step after the last one already advanced by step_gap.
        clock += gaps.session_gap - gaps.step_gap;
    }
    return log;
}

}  // namespace seqbench
