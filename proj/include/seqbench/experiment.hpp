#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "seqbench/evaluator.hpp"
#include "seqbench/ingest.hpp"
#include "seqbench/profiler.hpp"
#include "seqbench/recommenders.hpp"
#include "seqbench/splitter.hpp"

namespace seqbench {

enum class OutputFormat { Json, Csv, Markdown };

std::optional<OutputFormat> parse_output_format(std::string_view name);
std::string_view output_format_name(OutputFormat f);

struct ExperimentConfig {
    std::string input_path;
    Delimiter delimiter = Delimiter::Tab;
    std::int64_t min_user_ratings = 0;
    std::int64_t min_item_ratings = 0;
    std::int64_t delta_seconds = 3600;
    SplitStrategy split_strategy = SplitStrategy::Timestamp;
    double test_ratio = 0.2;
    std::int64_t k = 5;
    std::vector<RecommenderKind> recommenders{std::begin(kAllRecommenders), std::end(kAllRecommenders)};
    double smoothing_alpha = 0.1;
    std::uint64_t seed = 42;
    OutputFormat output_format = OutputFormat::Json;
};

struct FieldError {
    std::string field;
    std::string message;

    friend bool operator==(const FieldError&, const FieldError&) = default;
};

// Every violated range constraint, one entry per field. Empty means valid.
std::vector<FieldError> validate(const ExperimentConfig& config);

// Reads a config from its JSON shape; absent keys keep their defaults. Type
// and enumeration errors are appended to `errors`, range checks are not run.
ExperimentConfig config_from_json(const nlohmann::json& body, std::vector<FieldError>& errors);
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

// Comma-separated recommender names; unknown names are reported in `errors`
// under field "recommenders". Duplicates keep their first position.
std::vector<RecommenderKind> parse_recommender_list(std::string_view list, std::vector<FieldError>& errors);

struct ExperimentResult {
    ExperimentConfig config;
    Profile profile;
    std::vector<EvaluationReport> reports;
};

// Ingest, filter, sequence, profile and split once, then fit and evaluate
// every selected recommender on the same split with the same master seed.
// Throws ConfigError for an invalid config and DataError subclasses for
// pipeline failures.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads = 1);

// SEQBENCH_THREADS when set to a positive integer, else the hardware
// concurrency.
std::size_t evaluation_threads_from_env();

// Fixed six-decimal rendering, ties to even; -0 prints as 0.
std::string format_decimal(double value);

nlohmann::ordered_json profile_to_json(const Profile& p);
nlohmann::ordered_json report_to_json(const EvaluationReport& r);
nlohmann::ordered_json result_to_json(const ExperimentResult& result);

// Serializes JSON with floating-point numbers in format_decimal form.
std::string dump_fixed(const nlohmann::ordered_json& j, int indent = 2);

std::string render(const ExperimentResult& result, OutputFormat format);

}  // namespace seqbench
