#include "seqbench/recommenders.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "seqbench/errors.hpp"

namespace seqbench {

Catalog::Catalog(const std::set<std::string>& items) : items_(items.begin(), items.end()) {
    index_.reserve(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) index_.emplace(items_[i], i);
}

std::optional<std::size_t> Catalog::index_of(std::string_view item) const {
    auto it = index_.find(item);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double Distribution::probability(std::string_view item) const {
    auto idx = catalog->index_of(item);
    return idx ? probabilities[*idx] : 0.0;
}

double Distribution::sum() const {
    return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

std::optional<RecommenderKind> parse_recommender_kind(std::string_view name) {
    if (name == "most_popular") return RecommenderKind::MostPopular;
    if (name == "random") return RecommenderKind::Random;
    if (name == "unigram") return RecommenderKind::Unigram;
    if (name == "bigram") return RecommenderKind::Bigram;
    return std::nullopt;
}

std::string_view recommender_kind_name(RecommenderKind kind) {
    switch (kind) {
        case RecommenderKind::MostPopular: return "most_popular";
        case RecommenderKind::Random: return "random";
        case RecommenderKind::Unigram: return "unigram";
        case RecommenderKind::Bigram: return "bigram";
    }
    return "unknown";
}

ItemCounts ItemCounts::from(const SequenceSet& train) {
    ItemCounts c;
    c.catalog = std::make_shared<const Catalog>(train.catalog);
    c.counts.assign(c.catalog->size(), 0);
    for (const auto& seq : train.sequences) {
        for (const auto& step : seq.steps) {
            ++c.counts[*c.catalog->index_of(step.item)];
            ++c.total;
        }
    }
    return c;
}

std::uint64_t ItemCounts::count(std::string_view item) const {
    auto idx = catalog->index_of(item);
    return idx ? counts[*idx] : 0;
}

std::vector<std::size_t> ItemCounts::top(std::size_t k) const {
    std::vector<std::size_t> order(counts.size());
    std::iota(order.begin(), order.end(), 0);
    // Stable sort over lexicographic catalog order breaks ties by item id.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
    order.resize(std::min(k, order.size()));
    return order;
}

void BaselineRecommender::fit(const SequenceSet& train) {
    if (train.empty()) throw std::invalid_argument("cannot fit a recommender on an empty training set");
    counts_ = ItemCounts::from(train);
    popularity_.catalog = counts_.catalog;
    popularity_.probabilities.resize(counts_.counts.size());
    for (std::size_t i = 0; i < counts_.counts.size(); ++i) popularity_.probabilities[i] = counts_.popularity(i);
    fit_extra(train);
}

std::map<std::string, std::uint64_t> BaselineRecommender::item_counts() const {
    std::map<std::string, std::uint64_t> out;
    for (std::size_t i = 0; i < counts_.counts.size(); ++i) out.emplace(counts_.catalog->item(i), counts_.counts[i]);
    return out;
}

void BaselineRecommender::require_fitted() const {
    if (!counts_.catalog) throw std::logic_error("recommender queried before fit");
}

Distribution MostPopularRecommender::next_distribution(std::string_view, std::string_view) const {
    require_fitted();
    return popularity_distribution();
}

Distribution RandomRecommender::next_distribution(std::string_view, std::string_view) const {
    require_fitted();
    const std::size_t n = catalog()->size();
    return Distribution{catalog(), std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

Distribution UnigramRecommender::next_distribution(std::string_view, std::string_view) const {
    require_fitted();
    return popularity_distribution();
}

BigramRecommender::BigramRecommender(double smoothing_alpha, bool fallback_to_unigram)
    : BaselineRecommender(RecommenderKind::Bigram), alpha_(smoothing_alpha), fallback_(fallback_to_unigram) {
    if (!(smoothing_alpha >= 0.0)) throw std::invalid_argument("smoothing alpha must be non-negative");
}

void BigramRecommender::fit_extra(const SequenceSet& train) {
    const Catalog& cat = *catalog();
    transitions_.assign(cat.size(), {});
    row_totals_.assign(cat.size(), 0);
    for (const auto& seq : train.sequences) {
        for (std::size_t t = 0; t + 1 < seq.steps.size(); ++t) {
            const std::size_t from = *cat.index_of(seq.steps[t].item);
            const std::size_t to = *cat.index_of(seq.steps[t + 1].item);
            ++transitions_[from][to];
            ++row_totals_[from];
        }
    }
}

Distribution BigramRecommender::next_distribution(std::string_view, std::string_view current_item) const {
    require_fitted();
    auto from = catalog()->index_of(current_item);
    if (!from) {
        if (!fallback_) throw UnknownItem(std::string(current_item));
        return popularity_distribution();
    }
    const std::uint64_t row_total = row_totals_[*from];
    if (row_total == 0) return popularity_distribution();

    const std::size_t n = catalog()->size();
    const double denom = static_cast<double>(row_total) + alpha_ * static_cast<double>(n);
    Distribution d{catalog(), std::vector<double>(n, alpha_ / denom)};
    for (const auto& [to, count] : transitions_[*from]) {
        d.probabilities[to] = (static_cast<double>(count) + alpha_) / denom;
    }
    return d;
}

std::map<std::pair<std::string, std::string>, std::uint64_t> BigramRecommender::transition_counts() const {
    std::map<std::pair<std::string, std::string>, std::uint64_t> out;
    for (std::size_t from = 0; from < transitions_.size(); ++from) {
        for (const auto& [to, count] : transitions_[from]) {
            out.emplace(std::make_pair(catalog()->item(from), catalog()->item(to)), count);
        }
    }
    return out;
}

std::unique_ptr<BaselineRecommender> make_recommender(RecommenderKind kind, const FitOptions& options) {
    switch (kind) {
        case RecommenderKind::MostPopular: return std::make_unique<MostPopularRecommender>();
        case RecommenderKind::Random: return std::make_unique<RandomRecommender>();
        case RecommenderKind::Unigram: return std::make_unique<UnigramRecommender>();
        case RecommenderKind::Bigram:
            return std::make_unique<BigramRecommender>(options.smoothing_alpha, options.fallback_to_unigram);
    }
    throw std::invalid_argument("unknown recommender kind");
}

std::unique_ptr<BaselineRecommender> fit(RecommenderKind kind, const SequenceSet& train, const FitOptions& options) {
    auto model = make_recommender(kind, options);
    model->fit(train);
    return model;
}

}  // namespace seqbench
