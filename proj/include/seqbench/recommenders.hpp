#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqbench/sequencer.hpp"

namespace seqbench {

// Items of the training set in lexicographic order; index order doubles as
// the tie-break order for every argmax in the toolkit.
class Catalog {
public:
    explicit Catalog(const std::set<std::string>& items);
    // The index holds views into items_.
    Catalog(const Catalog&) = delete;
    Catalog& operator=(const Catalog&) = delete;

    std::size_t size() const noexcept { return items_.size(); }
    const std::string& item(std::size_t index) const { return items_.at(index); }
    const std::vector<std::string>& items() const noexcept { return items_; }
    std::optional<std::size_t> index_of(std::string_view item) const;
    bool contains(std::string_view item) const { return index_of(item).has_value(); }

private:
    std::vector<std::string> items_;
    std::unordered_map<std::string_view, std::size_t> index_;
};

// Probability of each catalog item being the next one, indexed like the catalog.
struct Distribution {
    std::shared_ptr<const Catalog> catalog;
    std::vector<double> probabilities;

    std::size_t size() const noexcept { return probabilities.size(); }
    double operator[](std::size_t index) const { return probabilities[index]; }
    // 0 for items outside the catalog.
    double probability(std::string_view item) const;
    double sum() const;
};

enum class RecommenderKind { MostPopular, Random, Unigram, Bigram };

std::optional<RecommenderKind> parse_recommender_kind(std::string_view name);
std::string_view recommender_kind_name(RecommenderKind kind);
inline constexpr RecommenderKind kAllRecommenders[] = {
    RecommenderKind::MostPopular, RecommenderKind::Random, RecommenderKind::Unigram, RecommenderKind::Bigram};

// How the generation loop turns a distribution into the next item.
enum class SelectionPolicy {
    ArgmaxMasked,  // most probable item not yet recommended in this sequence
    Sample,        // draw from the distribution
};

// Occurrences of every catalog item across all steps of the training sequences.
struct ItemCounts {
    std::shared_ptr<const Catalog> catalog;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    static ItemCounts from(const SequenceSet& train);

    std::uint64_t count(std::string_view item) const;
    double popularity(std::size_t index) const {
        return static_cast<double>(counts[index]) / static_cast<double>(total);
    }
    // The k most frequent items; ties go to the lexicographically smaller id.
    std::vector<std::size_t> top(std::size_t k) const;
};

// Any sequence recommender plugs into the evaluator through this interface.
// A fitted recommender must be safe to query concurrently.
class Recommender {
public:
    virtual ~Recommender() = default;

    virtual std::string name() const = 0;
    virtual void fit(const SequenceSet& train) = 0;
    virtual Distribution next_distribution(std::string_view user, std::string_view current_item) const = 0;
    virtual SelectionPolicy selection_policy() const = 0;
    virtual std::shared_ptr<const Catalog> catalog() const = 0;
};

// Shared state of the four non-personalized baselines.
class BaselineRecommender : public Recommender {
public:
    RecommenderKind kind() const noexcept { return kind_; }
    std::string name() const override { return std::string(recommender_kind_name(kind_)); }
    void fit(const SequenceSet& train) override;
    std::shared_ptr<const Catalog> catalog() const override { return counts_.catalog; }

    const ItemCounts& counts() const noexcept { return counts_; }
    std::map<std::string, std::uint64_t> item_counts() const;

protected:
    explicit BaselineRecommender(RecommenderKind kind) : kind_(kind) {}
    virtual void fit_extra(const SequenceSet&) {}
    void require_fitted() const;
    Distribution popularity_distribution() const { return popularity_; }

private:
    RecommenderKind kind_;
    ItemCounts counts_;
    Distribution popularity_;
};

class MostPopularRecommender final : public BaselineRecommender {
public:
    MostPopularRecommender() : BaselineRecommender(RecommenderKind::MostPopular) {}
    Distribution next_distribution(std::string_view user, std::string_view current_item) const override;
    SelectionPolicy selection_policy() const override { return SelectionPolicy::ArgmaxMasked; }
};

class RandomRecommender final : public BaselineRecommender {
public:
    RandomRecommender() : BaselineRecommender(RecommenderKind::Random) {}
    Distribution next_distribution(std::string_view user, std::string_view current_item) const override;
    SelectionPolicy selection_policy() const override { return SelectionPolicy::Sample; }
};

class UnigramRecommender final : public BaselineRecommender {
public:
    UnigramRecommender() : BaselineRecommender(RecommenderKind::Unigram) {}
    Distribution next_distribution(std::string_view user, std::string_view current_item) const override;
    SelectionPolicy selection_policy() const override { return SelectionPolicy::Sample; }
};

// First-order transitions with additive smoothing:
//   p(j | i) = (count(i -> j) + alpha) / (count(i -> .) + alpha * |catalog|)
// Items never seen as a transition source get the unigram distribution.
// Items outside the catalog do too, unless fallback is disabled, in which
// case they raise UnknownItem.
class BigramRecommender final : public BaselineRecommender {
public:
    explicit BigramRecommender(double smoothing_alpha = 0.1, bool fallback_to_unigram = true);

    Distribution next_distribution(std::string_view user, std::string_view current_item) const override;
    SelectionPolicy selection_policy() const override { return SelectionPolicy::Sample; }

    double smoothing_alpha() const noexcept { return alpha_; }
    std::map<std::pair<std::string, std::string>, std::uint64_t> transition_counts() const;

private:
    void fit_extra(const SequenceSet& train) override;

    double alpha_;
    bool fallback_;
    std::vector<std::map<std::size_t, std::uint64_t>> transitions_;
    std::vector<std::uint64_t> row_totals_;
};

struct FitOptions {
    double smoothing_alpha = 0.1;
    bool fallback_to_unigram = true;
};

std::unique_ptr<BaselineRecommender> make_recommender(RecommenderKind kind, const FitOptions& options = {});
// Constructs and fits in one step. Throws std::invalid_argument on an empty train set.
std::unique_ptr<BaselineRecommender> fit(RecommenderKind kind, const SequenceSet& train,
                                         const FitOptions& options = {});

}  // namespace seqbench
