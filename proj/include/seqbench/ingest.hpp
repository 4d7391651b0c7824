#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seqbench {

struct Rating {
    std::string user;
    std::string item;
    double value = 0.0;
    std::int64_t timestamp = 0;

    friend bool operator==(const Rating&, const Rating&) = default;
};

// Ratings in input order.
struct RatingLog {
    std::vector<Rating> ratings;

    std::size_t size() const noexcept { return ratings.size(); }
    bool empty() const noexcept { return ratings.empty(); }
};

enum class Delimiter {
    Tab,
    Comma,
    Spaces,  // one or more ASCII spaces
};

std::optional<Delimiter> parse_delimiter(std::string_view name);
std::string_view delimiter_name(Delimiter d);

// Parses a UIRT file: user, item, rating, timestamp per line. Blank lines and
// lines starting with '#' are skipped; a trailing '\r' is tolerated.
// Throws MalformedLine (1-based line number) or EmptyInput.
RatingLog parse_ratings(std::istream& source, Delimiter delimiter = Delimiter::Tab);
RatingLog parse_ratings_file(const std::string& path, Delimiter delimiter = Delimiter::Tab);

void write_ratings(std::ostream& out, const RatingLog& log, Delimiter delimiter = Delimiter::Tab);

// Drops users with fewer than min_user_ratings ratings, then items with fewer
// than min_item_ratings ratings in what is left. One pass each, no fixpoint.
// Throws EmptyAfterFilter.
RatingLog apply_support_filters(const RatingLog& log,
                                std::size_t min_user_ratings,
                                std::size_t min_item_ratings);

}  // namespace seqbench
