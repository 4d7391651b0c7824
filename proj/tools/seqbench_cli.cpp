// Runs one offline evaluation experiment over a UIRT rating file and prints
// the report for every selected recommender.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "seqbench/errors.hpp"
#include "seqbench/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

}  // namespace

int main(int argc, char** argv) {
    using namespace seqbench;

    ExperimentConfig config;
    std::string delimiter = "tab";
    std::string split = "timestamp";
    std::string recommenders = "most_popular,random,unigram,bigram";
    std::string format = "json";
    std::string output;

    CLI::App app{"Offline evaluation of sequence-based recommenders"};
    app.add_option("--input", config.input_path, "UIRT rating file (user, item, rating, timestamp)")->required();
    app.add_option("--delimiter", delimiter, "field delimiter: tab, comma or space")->capture_default_str();
    app.add_option("--min-user-ratings", config.min_user_ratings, "drop users with fewer ratings")
        ->capture_default_str();
    app.add_option("--min-item-ratings", config.min_item_ratings, "drop items with fewer ratings")
        ->capture_default_str();
    app.add_option("--delta", config.delta_seconds, "time-gap threshold in seconds")->capture_default_str();
    app.add_option("--split", split, "split strategy: random or timestamp")->capture_default_str();
    app.add_option("--test-ratio", config.test_ratio, "fraction of sequences in the test set")
        ->capture_default_str();
    app.add_option("--k", config.k, "length of the generated sequences")->capture_default_str();
    app.add_option("--recommenders", recommenders, "comma list of most_popular, random, unigram, bigram")
        ->capture_default_str();
    app.add_option("--alpha", config.smoothing_alpha, "additive smoothing of the bigram")->capture_default_str();
    app.add_option("--seed", config.seed, "master seed of the split and the generation streams")
        ->capture_default_str();
    app.add_option("--format", format, "json, csv or markdown")->capture_default_str();
    app.add_option("--output", output, "write the report here instead of standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    std::vector<FieldError> errors;
    if (auto d = parse_delimiter(delimiter)) {
        config.delimiter = *d;
    } else {
        errors.push_back({"delimiter", "unsupported delimiter '" + delimiter + "'"});
    }
    if (auto s = parse_split_strategy(split)) {
        config.split_strategy = *s;
    } else {
        errors.push_back({"split_strategy", "unsupported split strategy '" + split + "'"});
    }
    if (auto f = parse_output_format(format)) {
        config.output_format = *f;
    } else {
        errors.push_back({"output_format", "unsupported format '" + format + "'"});
    }
    config.recommenders = parse_recommender_list(recommenders, errors);
    for (auto& e : validate(config)) errors.push_back(std::move(e));
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "seqbench: config error: " << e.field << ": " << e.message << '\n';
        return kExitConfig;
    }

    try {
        const ExperimentResult result = run_experiment(config, evaluation_threads_from_env());
        const std::string text = render(result, config.output_format);
        if (output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(output, std::ios::binary);
            if (!out || !(out << text)) {
                std::cerr << "seqbench: cannot write '" << output << "'\n";
                return kExitData;
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "seqbench: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const MalformedLine& e) {
        std::cerr << "seqbench: parse error: " << e.what() << '\n';
        return kExitData;
    } catch (const EmptyInput& e) {
        std::cerr << "seqbench: parse error: " << e.what() << '\n';
        return kExitData;
    } catch (const EmptyAfterFilter& e) {
        std::cerr << "seqbench: filter error: " << e.what() << '\n';
        return kExitData;
    } catch (const NoSequences& e) {
        std::cerr << "seqbench: sequence error: " << e.what() << '\n';
        return kExitData;
    } catch (const DegenerateSplit& e) {
        std::cerr << "seqbench: split error: " << e.what() << '\n';
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "seqbench: data error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
