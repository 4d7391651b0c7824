#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqbench/ingest.hpp"

namespace seqbench {

// First-order Markov chain with a known transition matrix, used to plant
// ground truth for the bigram model and perplexity.
struct PlantedChain {
    std::vector<std::string> states;
    std::vector<std::vector<double>> transition_matrix;  // row-stochastic
    std::vector<double> initial_distribution;

    // Throws std::invalid_argument on shape mismatch or rows not summing to 1.
    void validate() const;

    static PlantedChain uniform(std::size_t num_states);
    static PlantedChain identity(std::size_t num_states);
};

struct StationaryResult {
    std::vector<double> stationary;
    double entropy_rate = 0.0;  // bits per transition
};

inline constexpr std::size_t kPowerIterationBudget = 100000;
inline constexpr double kStationaryTolerance = 1e-12;

// Power iteration on the lazy chain (P + I) / 2, which shares the stationary
// vector and is aperiodic. Throws NoConvergence for reducible chains (several
// stationary vectors) or when the iteration budget runs out.
StationaryResult stationary_and_entropy(const PlantedChain& chain);

// Timestamp layout of sampled logs: consecutive steps of a sequence are
// step_gap apart and consecutive sequences of a user session_gap apart. Any
// builder threshold in (step_gap, session_gap] recovers the sequences.
struct GapPattern {
    std::int64_t step_gap = 60;
    std::int64_t session_gap = 3600;
    std::int64_t origin = 1000000;

    std::int64_t matching_delta() const noexcept { return session_gap; }
};

struct SampledSequence {
    std::string user;
    std::vector<std::string> items;
};

// The planted sequences, per user in order.
std::vector<SampledSequence> sample_sequences(const PlantedChain& chain, std::size_t num_users,
                                              std::size_t seq_per_user, std::size_t seq_len,
                                              std::uint64_t seed);

// Same draws as sample_sequences, laid out as a UIRT log per the gap pattern.
// Users are named u0000, u0001, ...; every rating has value 1.
RatingLog sample_log(const PlantedChain& chain, std::size_t num_users, std::size_t seq_per_user,
                     std::size_t seq_len, const GapPattern& gaps, std::uint64_t seed);

}  // namespace seqbench
