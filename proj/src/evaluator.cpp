#include "seqbench/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "parallel.hpp"
#include "seqbench/errors.hpp"

namespace seqbench {

using detail::Mean;

namespace {

void require_paired(std::span<const GeneratedSequence> generated, const SequenceSet& test) {
    if (generated.size() != test.size()) {
        throw std::invalid_argument("generated sequences and test sequences differ in number");
    }
}

std::span<const Step> continuation(const Sequence& seq) {
    return std::span<const Step>(seq.steps).subspan(1);
}

std::unordered_set<std::string_view> item_set(std::span<const Step> steps) {
    std::unordered_set<std::string_view> out;
    for (const auto& s : steps) out.insert(s.item);
    return out;
}

std::size_t pick(const Distribution& dist, SelectionPolicy policy, const std::vector<bool>& used,
                 RandomStream& rng) {
    const std::size_t n = dist.size();
    if (policy == SelectionPolicy::ArgmaxMasked) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            if (best == n || dist[i] > dist[best]) best = i;
        }
        return best;
    }
    const double u = rng.next_unit();
    double acc = 0.0;
    std::size_t last_positive = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] <= 0.0) continue;
        acc += dist[i];
        last_positive = i;
        if (u < acc) return i;
    }
    // u landed in the rounding slack above the accumulated mass.
    return last_positive;
}

}  // namespace

GeneratedSequence generate(const Recommender& model, std::string_view user, std::string_view seed_item,
                           std::size_t k, RandomStream& rng) {
    if (k == 0) throw std::invalid_argument("sequence length k must be at least 1");
    const auto cat = model.catalog();
    if (!cat || cat->size() == 0) throw std::logic_error("recommender has an empty catalog");

    GeneratedSequence out{std::string(user), std::string(seed_item), {}, {}};
    out.items.reserve(k);
    out.chosen_probs.reserve(k);
    std::vector<bool> used(cat->size(), false);
    std::size_t used_count = 0;
    std::string current(seed_item);
    for (std::size_t step = 0; step < k; ++step) {
        const Distribution dist = model.next_distribution(user, current);
        if (dist.size() != cat->size()) throw std::logic_error("distribution does not cover the catalog");
        if (used_count == used.size()) {
            std::fill(used.begin(), used.end(), false);
            used_count = 0;
        }
        const std::size_t chosen = pick(dist, model.selection_policy(), used, rng);
        if (chosen >= cat->size()) throw std::logic_error("distribution has no positive mass");
        if (!used[chosen]) {
            used[chosen] = true;
            ++used_count;
        }
        out.items.push_back(cat->item(chosen));
        out.chosen_probs.push_back(dist[chosen]);
        current = cat->item(chosen);
    }
    return out;
}

double coverage(std::span<const GeneratedSequence> generated, const Catalog& catalog) {
    std::unordered_set<std::string_view> seen;
    for (const auto& g : generated) {
        for (const auto& item : g.items) {
            if (catalog.contains(item)) seen.insert(item);
        }
    }
    return catalog.size() == 0 ? 0.0 : static_cast<double>(seen.size()) / static_cast<double>(catalog.size());
}

double precision(std::span<const GeneratedSequence> generated, const SequenceSet& test) {
    require_paired(generated, test);
    Mean mean;
    for (std::size_t i = 0; i < generated.size(); ++i) {
        const auto& rec = generated[i].items;
        if (rec.empty()) continue;
        const auto reference = item_set(continuation(test.sequences[i]));
        std::size_t hits = 0;
        for (const auto& item : rec) hits += reference.count(item);
        mean.add(static_cast<double>(hits) / static_cast<double>(rec.size()));
    }
    return mean.value();
}

std::optional<double> ndpm_single(const std::vector<std::string>& recommended,
                                  std::span<const std::string> reference) {
    // Distinct reference items in order of first occurrence.
    std::vector<std::string_view> ref_items;
    std::unordered_set<std::string_view> seen;
    for (const auto& item : reference) {
        if (seen.insert(item).second) ref_items.push_back(item);
    }
    const std::size_t d = ref_items.size();
    if (d < 2) return std::nullopt;

    std::unordered_map<std::string_view, std::size_t> rec_pos;
    for (std::size_t i = 0; i < recommended.size(); ++i) rec_pos.try_emplace(recommended[i], i);

    std::size_t contradicted = 0;
    std::size_t unordered = 0;
    for (std::size_t a = 0; a < d; ++a) {
        auto pa = rec_pos.find(ref_items[a]);
        for (std::size_t b = a + 1; b < d; ++b) {
            auto pb = rec_pos.find(ref_items[b]);
            if (pa == rec_pos.end() || pb == rec_pos.end()) {
                ++unordered;
            } else if (pa->second > pb->second) {
                ++contradicted;
            }
        }
    }
    const double pairs = static_cast<double>(d * (d - 1) / 2);
    return (static_cast<double>(contradicted) + 0.5 * static_cast<double>(unordered)) / pairs;
}

double ndpm(std::span<const GeneratedSequence> generated, const SequenceSet& test) {
    require_paired(generated, test);
    Mean mean;
    for (std::size_t i = 0; i < generated.size(); ++i) {
        const auto reference = test.sequences[i].items();
        const auto value = ndpm_single(generated[i].items, std::span<const std::string>(reference).subspan(1));
        if (value) mean.add(*value);
    }
    return mean.value();
}

double diversity(std::span<const GeneratedSequence> generated, const std::map<std::string, ItemVector>& vectors) {
    Mean mean;
    for (const auto& g : generated) {
        const std::size_t k = g.items.size();
        if (k < 2) continue;
        std::vector<const ItemVector*> v;
        v.reserve(k);
        for (const auto& item : g.items) v.push_back(&vectors.at(item));
        Mean pairs;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) pairs.add(1.0 - cosine(*v[a], *v[b]));
        }
        mean.add(pairs.value());
    }
    return mean.value();
}

double novelty(std::span<const GeneratedSequence> generated, const ItemCounts& counts) {
    Mean mean;
    for (const auto& g : generated) {
        for (const auto& item : g.items) {
            const auto idx = counts.catalog->index_of(item);
            if (!idx) throw UnknownItem(item);
            mean.add(-std::log2(counts.popularity(*idx)));
        }
    }
    return mean.value();
}

double serendipity(std::span<const GeneratedSequence> generated, const SequenceSet& test,
                   const ItemCounts& counts, std::size_t k) {
    require_paired(generated, test);
    std::unordered_set<std::string_view> popular;
    for (std::size_t idx : counts.top(k)) popular.insert(counts.catalog->item(idx));
    Mean mean;
    for (std::size_t i = 0; i < generated.size(); ++i) {
        const auto& rec = generated[i].items;
        if (rec.empty()) continue;
        const auto reference = item_set(continuation(test.sequences[i]));
        std::size_t hits = 0;
        for (const auto& item : rec) {
            if (reference.count(item) && !popular.count(item)) ++hits;
        }
        mean.add(static_cast<double>(hits) / static_cast<double>(rec.size()));
    }
    return mean.value();
}

double confidence(std::span<const GeneratedSequence> generated) {
    Mean mean;
    for (const auto& g : generated) {
        for (double p : g.chosen_probs) mean.add(p);
    }
    return mean.value();
}

double perplexity(const Recommender& model, const SequenceSet& test, std::size_t threads) {
    std::vector<std::vector<double>> logs(test.size());
    detail::parallel_for(test.size(), threads, [&](std::size_t i) {
        const auto& seq = test.sequences[i];
        auto& out = logs[i];
        out.reserve(seq.steps.size());
        for (std::size_t t = 0; t + 1 < seq.steps.size(); ++t) {
            const Distribution dist = model.next_distribution(seq.user, seq.steps[t].item);
            const double p = dist.probability(seq.steps[t + 1].item);
            out.push_back(std::log2(std::max(p, kProbabilityFloor)));
        }
    });
    Mean mean;
    for (const auto& per_sequence : logs) {
        for (double lp : per_sequence) mean.add(lp);
    }
    if (mean.count() == 0) throw NoTransitions();
    return std::exp2(-mean.value());
}

TrainingTables TrainingTables::from(const SequenceSet& train) {
    return TrainingTables{ItemCounts::from(train), build_item_vectors(train)};
}

std::vector<GeneratedSequence> generate_all(const Recommender& model, const SequenceSet& test,
                                            const EvaluationOptions& options) {
    std::vector<GeneratedSequence> out(test.size());
    detail::parallel_for(test.size(), options.threads, [&](std::size_t i) {
        const auto& seq = test.sequences[i];
        RandomStream rng(derive_seed(options.master_seed, i));
        out[i] = generate(model, seq.user, seq.steps.front().item, options.k, rng);
    });
    return out;
}

EvaluationReport evaluate(const Recommender& model, const Split& split, const TrainingTables& tables,
                          const EvaluationOptions& options) {
    if (options.k == 0) throw std::invalid_argument("sequence length k must be at least 1");
    const auto generated = generate_all(model, split.test, options);

    EvaluationReport report;
    report.recommender = model.name();
    report.k = options.k;
    report.test_sequences = split.test.size();
    report.test_transitions = split.test.total_steps() - split.test.size();
    Metrics& m = report.metrics;
    m.coverage = coverage(generated, *tables.counts.catalog);
    m.precision = precision(generated, split.test);
    m.ndpm = ndpm(generated, split.test);
    m.diversity = diversity(generated, tables.vectors);
    m.novelty = novelty(generated, tables.counts);
    m.serendipity = serendipity(generated, split.test, tables.counts, options.k);
    m.confidence = confidence(generated);
    m.perplexity = perplexity(model, split.test, options.threads);
    return report;
}

EvaluationReport evaluate(const Recommender& model, const Split& split, const EvaluationOptions& options) {
    return evaluate(model, split, TrainingTables::from(split.train), options);
}

}  // namespace seqbench
