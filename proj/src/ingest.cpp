#include "seqbench/ingest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "seqbench/errors.hpp"

namespace seqbench {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, Delimiter delimiter) {
    std::vector<std::string_view> fields;
    if (delimiter == Delimiter::Spaces) {
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && line[pos] == ' ') ++pos;
            if (pos == line.size()) break;
            std::size_t end = line.find(' ', pos);
            if (end == std::string_view::npos) end = line.size();
            fields.push_back(line.substr(pos, end - pos));
            pos = end;
        }
        return fields;
    }
    const char sep = delimiter == Delimiter::Tab ? '\t' : ',';
    std::size_t pos = 0;
    while (true) {
        std::size_t end = line.find(sep, pos);
        if (end == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, end - pos));
        pos = end + 1;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace

std::optional<Delimiter> parse_delimiter(std::string_view name) {
    if (name == "tab" || name == "\t") return Delimiter::Tab;
    if (name == "comma" || name == ",") return Delimiter::Comma;
    if (name == "space" || name == "spaces" || name == " ") return Delimiter::Spaces;
    return std::nullopt;
}

std::string_view delimiter_name(Delimiter d) {
    switch (d) {
        case Delimiter::Tab: return "tab";
        case Delimiter::Comma: return "comma";
        case Delimiter::Spaces: return "space";
    }
    return "tab";
}

RatingLog parse_ratings(std::istream& source, Delimiter delimiter) {
    RatingLog log;
    std::string buffer;
    std::size_t line_no = 0;
    while (std::getline(source, buffer)) {
        ++line_no;
        std::string_view line = buffer;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (is_blank(line) || line.front() == '#') continue;

        auto fields = split_fields(line, delimiter);
        if (fields.size() != 4) {
            throw MalformedLine(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        }
        Rating r;
        r.user = std::string(fields[0]);
        r.item = std::string(fields[1]);
        if (r.user.empty() || r.item.empty()) throw MalformedLine(line_no, "empty user or item id");
        if (!parse_number(fields[2], r.value)) throw MalformedLine(line_no, "rating is not a number");
        if (!parse_number(fields[3], r.timestamp)) throw MalformedLine(line_no, "timestamp is not an integer");
        if (r.timestamp < 0) throw MalformedLine(line_no, "negative timestamp");
        log.ratings.push_back(std::move(r));
    }
    if (log.empty()) throw EmptyInput();
    return log;
}

RatingLog parse_ratings_file(const std::string& path, Delimiter delimiter) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file '" + path + "'");
    return parse_ratings(in, delimiter);
}

void write_ratings(std::ostream& out, const RatingLog& log, Delimiter delimiter) {
    const char sep = delimiter == Delimiter::Tab ? '\t' : (delimiter == Delimiter::Comma ? ',' : ' ');
    char buf[64];
    for (const auto& r : log.ratings) {
        auto res = std::to_chars(buf, buf + sizeof buf, r.value);
        out << r.user << sep << r.item << sep << std::string_view(buf, res.ptr - buf) << sep
            << r.timestamp << '\n';
    }
}

RatingLog apply_support_filters(const RatingLog& log,
                                std::size_t min_user_ratings,
                                std::size_t min_item_ratings) {
    std::unordered_map<std::string_view, std::size_t> per_user;
    for (const auto& r : log.ratings) ++per_user[r.user];

    std::vector<const Rating*> kept;
    kept.reserve(log.size());
    for (const auto& r : log.ratings) {
        if (per_user[r.user] >= min_user_ratings) kept.push_back(&r);
    }

    std::unordered_map<std::string_view, std::size_t> per_item;
    for (const Rating* r : kept) ++per_item[r->item];

    RatingLog out;
    for (const Rating* r : kept) {
        if (per_item[r->item] >= min_item_ratings) out.ratings.push_back(*r);
    }
    if (out.empty()) throw EmptyAfterFilter();
    return out;
}

}  // namespace seqbench
