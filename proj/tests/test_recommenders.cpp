#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "seqbench/errors.hpp"
#include "seqbench/recommenders.hpp"
#include "seqbench/synthetic.hpp"

using namespace seqbench;
using seqbench::testing::planted_five_state;
using seqbench::testing::set_of;

TEST(Fit, CountsItemsAndTransitions) {
    const auto train = set_of({{"a", "b"}, {"a", "c"}});
    auto bigram = fit(RecommenderKind::Bigram, train);
    EXPECT_EQ(bigram->item_counts(), (std::map<std::string, std::uint64_t>{{"a", 2}, {"b", 1}, {"c", 1}}));
    const auto& model = dynamic_cast<const BigramRecommender&>(*bigram);
    using Key = std::pair<std::string, std::string>;
    EXPECT_EQ(model.transition_counts(), (std::map<Key, std::uint64_t>{{{"a", "b"}, 1}, {{"a", "c"}, 1}}));
}

TEST(Fit, SelfTransitionAndNoCrossSequencePairs) {
    auto model = fit(RecommenderKind::Bigram, set_of({{"a", "a"}, {"b", "c"}}));
    using Key = std::pair<std::string, std::string>;
    EXPECT_EQ(dynamic_cast<const BigramRecommender&>(*model).transition_counts(),
              (std::map<Key, std::uint64_t>{{{"a", "a"}, 1}, {{"b", "c"}, 1}}));
}

TEST(Fit, SelectionPolicies) {
    const auto train = set_of({{"a", "b"}});
    EXPECT_EQ(fit(RecommenderKind::MostPopular, train)->selection_policy(), SelectionPolicy::ArgmaxMasked);
    EXPECT_EQ(fit(RecommenderKind::Random, train)->selection_policy(), SelectionPolicy::Sample);
    EXPECT_EQ(fit(RecommenderKind::Unigram, train)->selection_policy(), SelectionPolicy::Sample);
    EXPECT_EQ(fit(RecommenderKind::Bigram, train)->selection_policy(), SelectionPolicy::Sample);
}

TEST(Fit, EmptyTrainRejected) {
    EXPECT_THROW(fit(RecommenderKind::Unigram, SequenceSet{}), std::invalid_argument);
    EXPECT_THROW(make_recommender(RecommenderKind::Bigram, {-1.0, true}), std::invalid_argument);
}

TEST(Fit, QueryBeforeFitIsLogicError) {
    UnigramRecommender model;
    EXPECT_THROW(model.next_distribution("u", "a"), std::logic_error);
}

// Row-normalized bigram counts on 10k planted transitions approach the chain.
TEST(Fit, BigramRecoversPlantedChain) {
    PlantedChain chain = planted_five_state();
    const auto log = sample_log(chain, 100, 10, 11, GapPattern{}, 2024);
    const auto train = build_sequences(log, GapPattern{}.matching_delta());
    ASSERT_EQ(train.total_steps() - train.size(), 10000u);
    auto model = fit(RecommenderKind::Bigram, train, {0.0, true});
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        const auto dist = model->next_distribution("anyone", chain.states[i]);
        std::vector<double> row;
        for (const auto& s : chain.states) row.push_back(dist.probability(s));
        EXPECT_LT(oracle::l1(row, chain.transition_matrix[i]), 0.05) << "row " << i;
    }
}

TEST(NextDistribution, RandomIsUniform) {
    auto model = fit(RecommenderKind::Random, set_of({{"a", "b"}, {"c", "d"}, {"a", "a"}}));
    const auto d = model->next_distribution("u", "a");
    ASSERT_EQ(d.size(), 4u);
    for (double p : d.probabilities) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(NextDistribution, UnigramProportional) {
    auto model = fit(RecommenderKind::Unigram, set_of({{"a", "a"}, {"a", "b"}}));
    const auto d = model->next_distribution("u", "b");
    EXPECT_DOUBLE_EQ(d.probability("a"), 0.75);
    EXPECT_DOUBLE_EQ(d.probability("b"), 0.25);
    EXPECT_DOUBLE_EQ(d.probability("zzz"), 0.0);
    const auto mp = fit(RecommenderKind::MostPopular, set_of({{"a", "a"}, {"a", "b"}}))->next_distribution("u", "b");
    EXPECT_EQ(mp.probabilities, d.probabilities);
}

// Counts a->b 2, a->c 1 on a catalog {a, b, c}:
//   alpha 0:   p(b|a) = 2/3, p(c|a) = 1/3, p(a|a) = 0
//   alpha 0.1: p(b|a) = 2.1/3.3, p(c|a) = 1.1/3.3, p(a|a) = 0.1/3.3
TEST(NextDistribution, BigramSmoothingFormula) {
    const auto train = set_of({{"a", "b"}, {"a", "b"}, {"a", "c"}});
    auto plain = fit(RecommenderKind::Bigram, train, {0.0, true});
    auto d0 = plain->next_distribution("u", "a");
    EXPECT_DOUBLE_EQ(d0.probability("b"), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(d0.probability("c"), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(d0.probability("a"), 0.0);

    auto smooth = fit(RecommenderKind::Bigram, train, {0.1, true});
    auto d1 = smooth->next_distribution("u", "a");
    EXPECT_NEAR(d1.probability("b"), 2.1 / 3.3, 1e-15);
    EXPECT_NEAR(d1.probability("c"), 1.1 / 3.3, 1e-15);
    EXPECT_NEAR(d1.probability("a"), 0.1 / 3.3, 1e-15);
}

TEST(NextDistribution, BigramFallsBackToUnigram) {
    const auto train = set_of({{"a", "b"}, {"a", "c"}});
    auto model = fit(RecommenderKind::Bigram, train, {0.1, true});
    auto unigram = fit(RecommenderKind::Unigram, train);
    // b is only ever a target; "zz" is outside the catalog.
    EXPECT_EQ(model->next_distribution("u", "b").probabilities, unigram->next_distribution("u", "b").probabilities);
    EXPECT_EQ(model->next_distribution("u", "zz").probabilities, unigram->next_distribution("u", "zz").probabilities);

    auto strict = fit(RecommenderKind::Bigram, train, {0.1, false});
    EXPECT_THROW(strict->next_distribution("u", "zz"), UnknownItem);
    EXPECT_NO_THROW(strict->next_distribution("u", "b"));
}

// Distributions are normalized, non-negative, user-independent, and the
// smoothed bigram is strictly positive everywhere.
TEST(NextDistribution, InvariantsOnRandomTrainSets) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> item(0, 11), len(2, 6), count(1, 15);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<std::vector<std::string>> lists;
        for (int s = count(rng); s > 0; --s) {
            std::vector<std::string> l;
            for (int t = len(rng); t > 0; --t) l.push_back("i" + std::to_string(item(rng)));
            lists.push_back(l);
        }
        const auto train = set_of(lists);
        for (auto kind : kAllRecommenders) {
            auto model = fit(kind, train, {0.3, true});
            for (const auto& current : train.catalog) {
                const auto d = model->next_distribution("alice", current);
                EXPECT_NEAR(d.sum(), 1.0, 1e-9);
                for (double p : d.probabilities) {
                    EXPECT_GE(p, 0.0);
                    if (kind == RecommenderKind::Bigram) EXPECT_GT(p, 0.0);
                }
                EXPECT_EQ(d.probabilities, model->next_distribution("bob", current).probabilities);
            }
        }
    }
}

TEST(ItemCounts, TopBreaksTiesById) {
    const auto counts = ItemCounts::from(set_of({{"c", "b"}, {"a", "d"}, {"d", "b"}}));
    // b:2, d:2, a:1, c:1
    const auto top = counts.top(3);
    ASSERT_EQ(top.size(), 3u);
    EXPECT_EQ(counts.catalog->item(top[0]), "b");
    EXPECT_EQ(counts.catalog->item(top[1]), "d");
    EXPECT_EQ(counts.catalog->item(top[2]), "a");
    EXPECT_EQ(counts.top(10).size(), 4u);
}

TEST(RecommenderKindNames, RoundTrip) {
    for (auto kind : kAllRecommenders) EXPECT_EQ(parse_recommender_kind(recommender_kind_name(kind)), kind);
    EXPECT_FALSE(parse_recommender_kind("trigram"));
}
