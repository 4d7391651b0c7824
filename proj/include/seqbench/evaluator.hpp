#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqbench/profiler.hpp"
#include "seqbench/random.hpp"
#include "seqbench/recommenders.hpp"
#include "seqbench/similarity.hpp"
#include "seqbench/splitter.hpp"

namespace seqbench {

struct GeneratedSequence {
    std::string user;
    std::string seed;
    std::vector<std::string> items;   // k recommendations, seed excluded
    std::vector<double> chosen_probs;  // probability of each pick before masking
};

// Grows a sequence of k items from seed_item. Sampling models draw from rng;
// argmax_masked models take the most probable item not yet recommended in this
// sequence (the mask resets once the whole catalog has been used).
GeneratedSequence generate(const Recommender& model, std::string_view user, std::string_view seed_item,
                           std::size_t k, RandomStream& rng);

// Floor applied to every probability entering the perplexity.
inline constexpr double kProbabilityFloor = 1e-10;

// Each metric takes generated[i] as the answer to test.sequences[i]. The
// reference continuation of a test sequence is everything after its seed.

// Distinct recommended items over the catalog size.
double coverage(std::span<const GeneratedSequence> generated, const Catalog& catalog);
// Per recommended slot: is the item anywhere in the reference continuation.
double precision(std::span<const GeneratedSequence> generated, const SequenceSet& test);
// Pairwise order disagreement over distinct reference items; a pair with an
// unrecommended item scores 1/2. Cases with fewer than two distinct
// reference items are skipped; 0 when every case is skipped.
double ndpm(std::span<const GeneratedSequence> generated, const SequenceSet& test);
// Mean pairwise (1 - cosine) within each generated sequence; sequences
// shorter than 2 are skipped.
double diversity(std::span<const GeneratedSequence> generated, const std::map<std::string, ItemVector>& vectors);
// Mean self-information -log2 pop(i) of the recommended items.
double novelty(std::span<const GeneratedSequence> generated, const ItemCounts& counts);
// Precision where the k most popular training items never count as relevant.
double serendipity(std::span<const GeneratedSequence> generated, const SequenceSet& test,
                   const ItemCounts& counts, std::size_t k);
// Mean probability of the picked items.
double confidence(std::span<const GeneratedSequence> generated);
// Teacher-forced: 2 ^ (mean -log2 p(next | user, previous)) over every test
// transition. Throws NoTransitions.
double perplexity(const Recommender& model, const SequenceSet& test, std::size_t threads = 1);

// nDPM of one case; nullopt when the reference has fewer than two distinct items.
std::optional<double> ndpm_single(const std::vector<std::string>& recommended,
                                  std::span<const std::string> reference);

struct Metrics {
    double coverage = 0.0;
    double precision = 0.0;
    double ndpm = 0.0;
    double diversity = 0.0;
    double novelty = 0.0;
    double serendipity = 0.0;
    double confidence = 0.0;
    double perplexity = 0.0;

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct EvaluationReport {
    std::string recommender;
    std::size_t k = 0;
    Metrics metrics;
    std::size_t test_sequences = 0;
    std::size_t test_transitions = 0;
    Profile profile;

    friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

// Training-derived tables shared by every recommender evaluated on a split.
struct TrainingTables {
    ItemCounts counts;
    std::map<std::string, ItemVector> vectors;

    static TrainingTables from(const SequenceSet& train);
};

struct EvaluationOptions {
    std::size_t k = 5;
    std::uint64_t master_seed = 0;
    std::size_t threads = 1;
};

// One generated sequence per test sequence; test case i draws from the stream
// derive_seed(master_seed, i), so the result does not depend on threads.
std::vector<GeneratedSequence> generate_all(const Recommender& model, const SequenceSet& test,
                                            const EvaluationOptions& options);

EvaluationReport evaluate(const Recommender& model, const Split& split, const TrainingTables& tables,
                          const EvaluationOptions& options);
EvaluationReport evaluate(const Recommender& model, const Split& split, const EvaluationOptions& options);

}  // namespace seqbench
