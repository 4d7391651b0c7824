#include "seqbench/sequencer.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "seqbench/errors.hpp"

namespace seqbench {

std::vector<std::string> Sequence::items() const {
    std::vector<std::string> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.item);
    return out;
}

SequenceSet::SequenceSet(std::vector<Sequence> seqs) : sequences(std::move(seqs)) {
    for (const auto& s : sequences) {
        users.insert(s.user);
        for (const auto& step : s.steps) catalog.insert(step.item);
    }
}

std::size_t SequenceSet::total_steps() const noexcept {
    std::size_t n = 0;
    for (const auto& s : sequences) n += s.steps.size();
    return n;
}

SequenceSet build_sequences(const RatingLog& log, std::int64_t delta_seconds) {
    if (delta_seconds <= 0) throw std::invalid_argument("time-gap threshold must be positive");

    // std::map keeps users in id order, which fixes the output order.
    std::map<std::string, std::vector<const Rating*>> by_user;
    for (const auto& r : log.ratings) by_user[r.user].push_back(&r);

    std::vector<Sequence> sequences;
    for (auto& [user, ratings] : by_user) {
        std::stable_sort(ratings.begin(), ratings.end(),
                         [](const Rating* a, const Rating* b) { return a->timestamp < b->timestamp; });

        Sequence current{user, {}};
        auto flush = [&] {
            if (current.steps.size() >= 2) sequences.push_back(std::move(current));
            current = Sequence{user, {}};
        };
        for (const Rating* r : ratings) {
            if (!current.steps.empty() && r->timestamp - current.steps.back().timestamp >= delta_seconds) {
                flush();
            }
            current.steps.push_back({r->item, r->timestamp});
        }
        flush();
    }
    if (sequences.empty()) throw NoSequences();
    return SequenceSet(std::move(sequences));
}

}  // namespace seqbench
