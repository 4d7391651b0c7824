#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "seqbench/errors.hpp"
#include "seqbench/ingest.hpp"

using namespace seqbench;
using seqbench::testing::parse;

TEST(ParseRatings, TabSeparated) {
    const auto log = parse("u1\ti1\t5\t100\nu1\ti2\t4\t200");
    ASSERT_EQ(log.size(), 2u);
    EXPECT_EQ(log.ratings[0], (Rating{"u1", "i1", 5.0, 100}));
    EXPECT_EQ(log.ratings[1], (Rating{"u1", "i2", 4.0, 200}));
}

TEST(ParseRatings, OtherDelimiters) {
    const auto comma = parse("u1,i1,3.5,7\n", Delimiter::Comma);
    EXPECT_EQ(comma.ratings[0], (Rating{"u1", "i1", 3.5, 7}));
    const auto spaces = parse("u1   i1 2  9\n", Delimiter::Spaces);
    EXPECT_EQ(spaces.ratings[0], (Rating{"u1", "i1", 2.0, 9}));
}

TEST(ParseRatings, SkipsCommentsBlankLinesAndCarriageReturns) {
    const auto log = parse("# header\n\nu1\ti1\t5\t100\r\n   \nu2\ti1\t1\t5\n");
    ASSERT_EQ(log.size(), 2u);
    EXPECT_EQ(log.ratings[0].timestamp, 100);
    EXPECT_EQ(log.ratings[1].user, "u2");
}

TEST(ParseRatings, ArityViolationReportsLine) {
    try {
        parse("u1\ti1\t5");
        FAIL() << "expected MalformedLine";
    } catch (const MalformedLine& e) {
        EXPECT_EQ(e.line_no(), 1u);
    }
    try {
        parse("# c\nu1\ti1\t5\t1\nu1\ti2\t5\t2\t9\n");
        FAIL() << "expected MalformedLine";
    } catch (const MalformedLine& e) {
        EXPECT_EQ(e.line_no(), 3u);
    }
}

TEST(ParseRatings, NonNumericFields) {
    EXPECT_THROW(parse("u1\ti1\tfive\t100"), MalformedLine);
    EXPECT_THROW(parse("u1\ti1\t5\t10.5"), MalformedLine);
    EXPECT_THROW(parse("u1\ti1\t5\t-3"), MalformedLine);
    EXPECT_THROW(parse("\ti1\t5\t3"), MalformedLine);
}

TEST(ParseRatings, EmptyInput) {
    EXPECT_THROW(parse(""), EmptyInput);
    EXPECT_THROW(parse("# only a comment\n\n"), EmptyInput);
}

// Property: serializing and re-parsing reproduces every field.
TEST(ParseRatings, RoundTripProperty) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> len(1, 6), ch('a', 'z'), n(1, 40);
    std::uniform_real_distribution<double> value(-10, 10);
    std::uniform_int_distribution<std::int64_t> ts(0, 4'000'000'000LL);
    for (Delimiter d : {Delimiter::Tab, Delimiter::Comma, Delimiter::Spaces}) {
        for (int trial = 0; trial < 50; ++trial) {
            RatingLog log;
            const int count = n(rng);
            for (int i = 0; i < count; ++i) {
                auto id = [&] {
                    std::string s;
                    for (int c = len(rng); c > 0; --c) s += static_cast<char>(ch(rng));
                    return s;
                };
                log.ratings.push_back({id(), id(), value(rng), ts(rng)});
            }
            std::ostringstream out;
            write_ratings(out, log, d);
            std::istringstream in(out.str());
            EXPECT_EQ(parse_ratings(in, d).ratings, log.ratings);
        }
    }
}

TEST(SupportFilters, DropsSparseUsers) {
    const auto log = parse("u1\ta\t1\t1\nu1\tb\t1\t2\nu2\ta\t1\t3\nu1\tc\t1\t4\n");
    const auto out = apply_support_filters(log, 2, 0);
    ASSERT_EQ(out.size(), 3u);
    for (const auto& r : out.ratings) EXPECT_EQ(r.user, "u1");
    EXPECT_EQ(out.ratings[2].item, "c");
}

TEST(SupportFilters, ZeroAndOneAreIdentity) {
    const auto log = parse("u1\ta\t1\t1\nu2\tb\t1\t2\nu2\ta\t1\t3\n");
    EXPECT_EQ(apply_support_filters(log, 0, 0).ratings, log.ratings);
    EXPECT_EQ(apply_support_filters(log, 1, 1).ratings, log.ratings);
}

// Item j is rated twice, once by u3 who has a single rating.
//   user pass (min 2): drop u3            -> u1:a u1:a u1:j u2:a u2:b
//   item pass (min 2): a=3, b=1, j=1      -> u1:a u1:a u2:a
TEST(SupportFilters, TwoPassEnumeration) {
    const auto log = parse(
        "u1\ta\t1\t1\n"
        "u1\ta\t1\t2\n"
        "u1\tj\t1\t3\n"
        "u3\tj\t1\t4\n"
        "u2\ta\t1\t5\n"
        "u2\tb\t1\t6\n");
    const auto out = apply_support_filters(log, 2, 2);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out.ratings[0], (Rating{"u1", "a", 1, 1}));
    EXPECT_EQ(out.ratings[1], (Rating{"u1", "a", 1, 2}));
    EXPECT_EQ(out.ratings[2], (Rating{"u2", "a", 1, 5}));
}

TEST(SupportFilters, EmptyAfterFilter) {
    const auto log = parse("u1\ta\t1\t1\nu2\tb\t1\t2\n");
    EXPECT_THROW(apply_support_filters(log, 5, 0), EmptyAfterFilter);
}

TEST(SupportFilters, SubsequenceAndUserPassIdempotentProperty) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> user(0, 7), item(0, 9), thr(0, 4);
    for (int trial = 0; trial < 200; ++trial) {
        RatingLog log;
        for (int i = 0; i < 30; ++i) {
            log.ratings.push_back({"u" + std::to_string(user(rng)), "i" + std::to_string(item(rng)), 1.0, i});
        }
        const std::size_t mu = static_cast<std::size_t>(thr(rng));
        const std::size_t mi = static_cast<std::size_t>(thr(rng));
        RatingLog out;
        try {
            out = apply_support_filters(log, mu, mi);
        } catch (const EmptyAfterFilter&) {
            continue;
        }
        // Subsequence: timestamps are unique and increasing in the input.
        for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LT(out.ratings[i - 1].timestamp, out.ratings[i].timestamp);

        const auto once = apply_support_filters(log, mu, 0);
        EXPECT_EQ(apply_support_filters(once, mu, 0).ratings, once.ratings);
    }
}
