#include "seqbench/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "seqbench/errors.hpp"
#include "seqbench/sequencer.hpp"

namespace seqbench {

using nlohmann::json;
using nlohmann::ordered_json;

std::optional<OutputFormat> parse_output_format(std::string_view name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "markdown" || name == "md") return OutputFormat::Markdown;
    return std::nullopt;
}

std::string_view output_format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::Json: return "json";
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Markdown: return "markdown";
    }
    return "json";
}

std::vector<FieldError> validate(const ExperimentConfig& c) {
    std::vector<FieldError> errors;
    if (c.input_path.empty()) errors.push_back({"input_path", "an input file is required"});
    if (c.min_user_ratings < 0) errors.push_back({"min_user_ratings", "must be >= 0"});
    if (c.min_item_ratings < 0) errors.push_back({"min_item_ratings", "must be >= 0"});
    if (c.delta_seconds <= 0) errors.push_back({"delta_seconds", "must be a positive number of seconds"});
    if (!(c.test_ratio > 0.0 && c.test_ratio < 1.0)) errors.push_back({"test_ratio", "must be strictly between 0 and 1"});
    if (c.k < 1) errors.push_back({"k", "must be >= 1"});
    if (c.recommenders.empty()) errors.push_back({"recommenders", "select at least one recommender"});
    if (!(c.smoothing_alpha >= 0.0) || !std::isfinite(c.smoothing_alpha)) {
        errors.push_back({"smoothing_alpha", "must be a finite number >= 0"});
    }
    return errors;
}

std::vector<RecommenderKind> parse_recommender_list(std::string_view list, std::vector<FieldError>& errors) {
    std::vector<RecommenderKind> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        std::size_t end = list.find(',', pos);
        if (end == std::string_view::npos) end = list.size();
        std::string_view name = list.substr(pos, end - pos);
        while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
        while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
        if (!name.empty()) {
            if (auto kind = parse_recommender_kind(name)) {
                if (std::find(out.begin(), out.end(), *kind) == out.end()) out.push_back(*kind);
            } else {
                errors.push_back({"recommenders", "unknown recommender '" + std::string(name) + "'"});
            }
        }
        pos = end + 1;
    }
    return out;
}

namespace {

template <typename T>
void read_integer(const json& body, const char* key, T& out, std::vector<FieldError>& errors) {
    if (!body.contains(key)) return;
    const auto& v = body[key];
    if (!v.is_number_integer()) {
        errors.push_back({key, "must be an integer"});
        return;
    }
    if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) {
            out = v.get<T>();
        } else {
            const auto signed_value = v.get<std::int64_t>();
            if (signed_value < 0) {
                errors.push_back({key, "must be >= 0"});
                return;
            }
            out = static_cast<T>(signed_value);
        }
    } else {
        out = v.get<T>();
    }
}

void read_number(const json& body, const char* key, double& out, std::vector<FieldError>& errors) {
    if (!body.contains(key)) return;
    const auto& v = body[key];
    if (!v.is_number()) {
        errors.push_back({key, "must be a number"});
        return;
    }
    out = v.get<double>();
}

template <typename Enum, typename Parse>
void read_enum(const json& body, const char* key, Enum& out, Parse parse, std::vector<FieldError>& errors) {
    if (!body.contains(key)) return;
    const auto& v = body[key];
    if (!v.is_string()) {
        errors.push_back({key, "must be a string"});
        return;
    }
    if (auto parsed = parse(v.get<std::string>())) {
        out = *parsed;
    } else {
        errors.push_back({key, "unsupported value '" + v.get<std::string>() + "'"});
    }
}

}  // namespace

ExperimentConfig config_from_json(const json& body, std::vector<FieldError>& errors) {
    ExperimentConfig c;
    if (!body.is_object()) {
        errors.push_back({"", "request body must be a JSON object"});
        return c;
    }
    if (body.contains("input_path")) {
        if (body["input_path"].is_string()) {
            c.input_path = body["input_path"].get<std::string>();
        } else {
            errors.push_back({"input_path", "must be a string"});
        }
    }
    read_enum(body, "delimiter", c.delimiter, parse_delimiter, errors);
    read_integer(body, "min_user_ratings", c.min_user_ratings, errors);
    read_integer(body, "min_item_ratings", c.min_item_ratings, errors);
    read_integer(body, "delta_seconds", c.delta_seconds, errors);
    read_enum(body, "split_strategy", c.split_strategy, parse_split_strategy, errors);
    read_number(body, "test_ratio", c.test_ratio, errors);
    read_integer(body, "k", c.k, errors);
    if (body.contains("recommenders")) {
        const auto& v = body["recommenders"];
        if (!v.is_array()) {
            errors.push_back({"recommenders", "must be an array of recommender names"});
        } else {
            c.recommenders.clear();
            for (const auto& name : v) {
                if (!name.is_string()) {
                    errors.push_back({"recommenders", "names must be strings"});
                    continue;
                }
                auto kind = parse_recommender_kind(name.get<std::string>());
                if (!kind) {
                    errors.push_back({"recommenders", "unknown recommender '" + name.get<std::string>() + "'"});
                } else if (std::find(c.recommenders.begin(), c.recommenders.end(), *kind) == c.recommenders.end()) {
                    c.recommenders.push_back(*kind);
                }
            }
        }
    }
    read_number(body, "smoothing_alpha", c.smoothing_alpha, errors);
    read_integer(body, "seed", c.seed, errors);
    read_enum(body, "output_format", c.output_format, parse_output_format, errors);
    return c;
}

ordered_json config_to_json(const ExperimentConfig& c) {
    ordered_json j;
    j["input_path"] = c.input_path;
    j["delimiter"] = delimiter_name(c.delimiter);
    j["min_user_ratings"] = c.min_user_ratings;
    j["min_item_ratings"] = c.min_item_ratings;
    j["delta_seconds"] = c.delta_seconds;
    j["split_strategy"] = split_strategy_name(c.split_strategy);
    j["test_ratio"] = c.test_ratio;
    j["k"] = c.k;
    auto& recs = j["recommenders"] = ordered_json::array();
    for (auto kind : c.recommenders) recs.push_back(recommender_kind_name(kind));
    j["smoothing_alpha"] = c.smoothing_alpha;
    j["seed"] = c.seed;
    return j;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads) {
    if (auto errors = validate(config); !errors.empty()) {
        std::string message = "invalid configuration:";
        for (const auto& e : errors) message += " " + e.field + " (" + e.message + ");";
        throw ConfigError(message);
    }
    const RatingLog raw = parse_ratings_file(config.input_path, config.delimiter);
    const RatingLog filtered = apply_support_filters(raw, static_cast<std::size_t>(config.min_user_ratings),
                                                     static_cast<std::size_t>(config.min_item_ratings));
    const SequenceSet sequences = build_sequences(filtered, config.delta_seconds);

    ExperimentResult result;
    result.config = config;
    result.profile = profile(sequences, sequences.total_steps());

    const Split parts = split(sequences, config.split_strategy, config.test_ratio, config.seed);
    const TrainingTables tables = TrainingTables::from(parts.train);
    const EvaluationOptions options{static_cast<std::size_t>(config.k), config.seed, threads};
    for (auto kind : config.recommenders) {
        const auto model = fit(kind, parts.train, FitOptions{config.smoothing_alpha, true});
        EvaluationReport report = evaluate(*model, parts, tables, options);
        report.profile = result.profile;
        result.reports.push_back(std::move(report));
    }
    return result;
}

std::size_t evaluation_threads_from_env() {
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SEQBENCH_THREADS")) {
        std::size_t cap = 0;
        std::string_view text(env);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
        if (ec == std::errc{} && ptr == text.data() + text.size() && cap > 0) threads = cap;
    }
    return threads;
}

std::string format_decimal(double value) {
    if (value == 0.0) value = 0.0;
    char buf[128];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
    std::string out(buf, res.ptr);
    if (out == "-0.000000") out = "0.000000";
    return out;
}

ordered_json profile_to_json(const Profile& p) {
    ordered_json j;
    j["num_users"] = p.num_users;
    j["num_items"] = p.num_items;
    j["num_ratings"] = p.num_ratings;
    j["num_sequences"] = p.num_sequences;
    j["avg_sequence_length"] = p.avg_sequence_length;
    j["sparsity"] = p.sparsity;
    return j;
}

ordered_json report_to_json(const EvaluationReport& r) {
    ordered_json j;
    j["recommender"] = r.recommender;
    j["k"] = r.k;
    j["test_sequences"] = r.test_sequences;
    j["test_transitions"] = r.test_transitions;
    auto& m = j["metrics"];
    m["coverage"] = r.metrics.coverage;
    m["precision"] = r.metrics.precision;
    m["ndpm"] = r.metrics.ndpm;
    m["diversity"] = r.metrics.diversity;
    m["novelty"] = r.metrics.novelty;
    m["serendipity"] = r.metrics.serendipity;
    m["confidence"] = r.metrics.confidence;
    m["perplexity"] = r.metrics.perplexity;
    return j;
}

ordered_json result_to_json(const ExperimentResult& result) {
    ordered_json j;
    j["config"] = config_to_json(result.config);
    j["profile"] = profile_to_json(result.profile);
    auto& reports = j["reports"] = ordered_json::array();
    for (const auto& r : result.reports) reports.push_back(report_to_json(r));
    return j;
}

namespace {

void dump_fixed_into(std::string& out, const ordered_json& j, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += ordered_json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                dump_fixed_into(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                dump_fixed_into(out, v, indent, depth + 1);
            }
            newline(depth);
            out += ']';
            return;
        }
        case ordered_json::value_t::number_float:
            out += format_decimal(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

const char* const kMetricNames[] = {"coverage", "precision", "ndpm", "diversity",
                                    "novelty", "serendipity", "confidence", "perplexity"};

std::vector<double> metric_values(const Metrics& m) {
    return {m.coverage, m.precision, m.ndpm, m.diversity, m.novelty, m.serendipity, m.confidence, m.perplexity};
}

std::string render_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "recommender,k";
    for (const char* name : kMetricNames) out << ',' << name;
    out << '\n';
    for (const auto& r : result.reports) {
        out << r.recommender << ',' << r.k;
        for (double v : metric_values(r.metrics)) out << ',' << format_decimal(v);
        out << '\n';
    }
    return out.str();
}

std::string render_markdown(const ExperimentResult& result) {
    const Profile& p = result.profile;
    std::ostringstream out;
    out << "## Profile\n\n"
        << "| users | items | ratings | sequences | avg sequence length | sparsity |\n"
        << "|---:|---:|---:|---:|---:|---:|\n"
        << "| " << p.num_users << " | " << p.num_items << " | " << p.num_ratings << " | " << p.num_sequences
        << " | " << format_decimal(p.avg_sequence_length) << " | " << format_decimal(p.sparsity) << " |\n\n"
        << "## Metrics (k = " << result.config.k << ")\n\n"
        << "| recommender |";
    for (const char* name : kMetricNames) out << ' ' << name << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < std::size(kMetricNames); ++i) out << "---:|";
    out << '\n';
    for (const auto& r : result.reports) {
        out << "| " << r.recommender << " |";
        for (double v : metric_values(r.metrics)) out << ' ' << format_decimal(v) << " |";
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::string dump_fixed(const ordered_json& j, int indent) {
    std::string out;
    dump_fixed_into(out, j, indent, 0);
    return out;
}

std::string render(const ExperimentResult& result, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: return dump_fixed(result_to_json(result)) + "\n";
        case OutputFormat::Csv: return render_csv(result);
        case OutputFormat::Markdown: return render_markdown(result);
    }
    return {};
}

}  // namespace seqbench
