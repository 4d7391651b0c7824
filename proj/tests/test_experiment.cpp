#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "seqbench/errors.hpp"
#include "seqbench/experiment.hpp"

using namespace seqbench;
namespace fs = std::filesystem;

namespace {

const std::string kSample = std::string(SEQBENCH_SOURCE_DIR) + "/data/sample.uirt";

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct CliRun {
    int status;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / ("seqbench_cli_" + std::to_string(::getpid()) + "_" +
                                                      std::to_string(counter++));
    fs::create_directories(dir);
    const std::string cmd = "cd " + std::string(SEQBENCH_SOURCE_DIR) + " && " + env + " " + SEQBENCH_CLI_PATH + " " +
                            args + " >" + (dir / "out").string() + " 2>" + (dir / "err").string();
    const int raw = std::system(cmd.c_str());
    CliRun r{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(dir / "out"), read_file(dir / "err")};
    fs::remove_all(dir);
    return r;
}

ExperimentConfig sample_config() {
    ExperimentConfig c;
    c.input_path = kSample;
    c.k = 3;
    c.seed = 7;
    return c;
}

}  // namespace

TEST(FormatDecimal, SixPlacesTiesToEven) {
    EXPECT_EQ(format_decimal(1.0), "1.000000");
    EXPECT_EQ(format_decimal(1.0 / 3.0), "0.333333");
    EXPECT_EQ(format_decimal(2.0 / 3.0), "0.666667");
    // 2^-7 = 0.0078125 and 3 * 2^-7 = 0.0234375 are exact binary ties.
    EXPECT_EQ(format_decimal(0.0078125), "0.007812");
    EXPECT_EQ(format_decimal(0.0234375), "0.023438");
    EXPECT_EQ(format_decimal(-0.0), "0.000000");
    EXPECT_EQ(format_decimal(-1e-9), "0.000000");
    EXPECT_EQ(format_decimal(12345.5), "12345.500000");
}

TEST(DumpFixed, FloatsFixedIntegersVerbatim) {
    nlohmann::ordered_json j;
    j["b"] = 0.5;
    j["a"] = 3;
    j["s"] = "x\"y";
    j["list"] = {1.25, 2};
    j["empty"] = nlohmann::ordered_json::object();
    EXPECT_EQ(dump_fixed(j, -1), R"({"b":0.500000,"a":3,"s":"x\"y","list":[1.250000,2],"empty":{}})");
}

TEST(Validate, ReportsEveryInvalidField) {
    ExperimentConfig c;
    c.test_ratio = 1.5;
    c.k = 0;
    c.delta_seconds = 0;
    c.min_user_ratings = -1;
    c.smoothing_alpha = -0.1;
    c.recommenders.clear();
    std::vector<std::string> fields;
    for (const auto& e : validate(c)) fields.push_back(e.field);
    EXPECT_EQ(fields, (std::vector<std::string>{"input_path", "min_user_ratings", "delta_seconds", "test_ratio", "k",
                                                "recommenders", "smoothing_alpha"}));
    EXPECT_TRUE(validate(sample_config()).empty());
}

TEST(ConfigJson, RoundTripAndTypeErrors) {
    ExperimentConfig c = sample_config();
    c.recommenders = {RecommenderKind::Bigram, RecommenderKind::Random};
    c.split_strategy = SplitStrategy::Random;
    c.delimiter = Delimiter::Comma;
    std::vector<FieldError> errors;
    const auto back = config_from_json(nlohmann::json::parse(config_to_json(c).dump()), errors);
    EXPECT_TRUE(errors.empty());
    EXPECT_EQ(config_to_json(back), config_to_json(c));

    errors.clear();
    config_from_json(nlohmann::json{{"k", "three"}, {"split_strategy", "weekly"}, {"recommenders", {"bigram", "lstm"}},
                                    {"seed", -4}},
                     errors);
    std::vector<std::string> fields;
    for (const auto& e : errors) fields.push_back(e.field);
    EXPECT_EQ(fields, (std::vector<std::string>{"split_strategy", "k", "recommenders", "seed"}));
}

TEST(RecommenderList, ParsesDedupesAndReports) {
    std::vector<FieldError> errors;
    EXPECT_EQ(parse_recommender_list("bigram, random,bigram", errors),
              (std::vector<RecommenderKind>{RecommenderKind::Bigram, RecommenderKind::Random}));
    EXPECT_TRUE(errors.empty());
    parse_recommender_list("unigram,markov", errors);
    ASSERT_EQ(errors.size(), 1u);
    EXPECT_EQ(errors[0].field, "recommenders");
}

TEST(RunExperiment, OnePipelinePassFourReports) {
    const auto result = run_experiment(sample_config());
    ASSERT_EQ(result.reports.size(), 4u);
    EXPECT_EQ(result.reports[0].recommender, "most_popular");
    EXPECT_EQ(result.reports[3].recommender, "bigram");
    for (const auto& r : result.reports) {
        EXPECT_EQ(r.profile, result.profile);
        EXPECT_EQ(r.test_sequences, result.reports[0].test_sequences);
    }
    EXPECT_EQ(result.profile.num_ratings, 28u);
    EXPECT_EQ(result.profile.num_sequences, 10u);
}

TEST(RunExperiment, ErrorClasses) {
    ExperimentConfig c = sample_config();
    c.k = 0;
    EXPECT_THROW(run_experiment(c), ConfigError);
    c = sample_config();
    c.input_path = "/nonexistent/file";
    EXPECT_THROW(run_experiment(c), DataError);
    c = sample_config();
    c.min_user_ratings = 100;
    EXPECT_THROW(run_experiment(c), EmptyAfterFilter);
    c = sample_config();
    c.delta_seconds = 1;
    EXPECT_THROW(run_experiment(c), NoSequences);
    c = sample_config();
    c.test_ratio = 0.95;
    EXPECT_THROW(run_experiment(c), DegenerateSplit);
}

TEST(Render, CsvAndMarkdownCarryTheSameNumbers) {
    const auto result = run_experiment(sample_config());
    const std::string csv = render(result, OutputFormat::Csv);
    std::istringstream lines(csv);
    std::string header, row;
    std::getline(lines, header);
    EXPECT_EQ(header, "recommender,k,coverage,precision,ndpm,diversity,novelty,serendipity,confidence,perplexity");
    std::getline(lines, row);
    EXPECT_EQ(row.rfind("most_popular,3,", 0), 0u);
    EXPECT_NE(row.find(format_decimal(result.reports[0].metrics.perplexity)), std::string::npos);

    const std::string md = render(result, OutputFormat::Markdown);
    EXPECT_NE(md.find("| bigram |"), std::string::npos);
    EXPECT_NE(md.find(format_decimal(result.reports[3].metrics.novelty)), std::string::npos);
}

TEST(Cli, JsonMatchesGoldenFile) {
    const auto r = run_cli("--input data/sample.uirt --k 3 --seed 7");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, read_file(fs::path(SEQBENCH_SOURCE_DIR) / "tests/golden/sample_report.json"));
}

TEST(Cli, OutputFileAndFormats) {
    const fs::path out = fs::temp_directory_path() / "seqbench_cli_output.csv";
    const auto r = run_cli("--input data/sample.uirt --k 3 --seed 7 --format csv --output " + out.string());
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(read_file(out), render(run_experiment(sample_config()), OutputFormat::Csv));
    fs::remove(out);
    EXPECT_EQ(run_cli("--input data/sample.uirt --format markdown").status, 0);
}

TEST(Cli, ConfigErrorsExitTwoBeforeReadingInput) {
    const auto r = run_cli("--input /does/not/exist --test-ratio 1.5");
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("test_ratio"), std::string::npos);
    EXPECT_EQ(r.err.find("cannot open"), std::string::npos);
    EXPECT_EQ(run_cli("--input data/sample.uirt --recommenders bigram,lstm").status, 2);
    EXPECT_EQ(run_cli("--input data/sample.uirt --k abc").status, 2);
    EXPECT_EQ(run_cli("--input data/sample.uirt --split weekly").status, 2);
    EXPECT_EQ(run_cli("").status, 2);
}

TEST(Cli, DataErrorsExitThreeWithClassMessage) {
    auto r = run_cli("--input /does/not/exist");
    EXPECT_EQ(r.status, 3);
    r = run_cli("--input data/sample.uirt --min-user-ratings 100");
    EXPECT_EQ(r.status, 3);
    EXPECT_NE(r.err.find("filter error"), std::string::npos);
    r = run_cli("--input data/sample.uirt --delta 1");
    EXPECT_EQ(r.status, 3);
    EXPECT_NE(r.err.find("sequence error"), std::string::npos);
    r = run_cli("--input data/sample.uirt --test-ratio 0.95");
    EXPECT_EQ(r.status, 3);
    EXPECT_NE(r.err.find("split error"), std::string::npos);
    r = run_cli("--input data/sample.uirt --delimiter comma");
    EXPECT_EQ(r.status, 3);
    EXPECT_NE(r.err.find("parse error"), std::string::npos);
}
