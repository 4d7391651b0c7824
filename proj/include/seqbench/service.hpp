#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "seqbench/experiment.hpp"

namespace seqbench {

enum class ExperimentStatus { Pending, Running, Done, Failed };
std::string_view experiment_status_name(ExperimentStatus s);

struct ExperimentRecord {
    std::string id;
    ExperimentConfig config;
    ExperimentStatus status = ExperimentStatus::Pending;
    std::optional<ExperimentResult> result;  // present iff Done
    std::optional<std::string> error;        // present iff Failed
    std::int64_t created_at = 0;             // epoch seconds
    std::uint64_t sequence_no = 0;           // submission order
};

nlohmann::ordered_json record_to_json(const ExperimentRecord& record);

class ValidationFailed : public std::runtime_error {
public:
    explicit ValidationFailed(std::vector<FieldError> errors)
        : std::runtime_error("invalid experiment configuration"), errors_(std::move(errors)) {}
    const std::vector<FieldError>& errors() const noexcept { return errors_; }

private:
    std::vector<FieldError> errors_;
};

struct DatasetEntry {
    std::string name;
    std::filesystem::path path;
};

// Pipeline knobs that shape a dataset profile.
struct ProfileQuery {
    Delimiter delimiter = Delimiter::Tab;
    std::int64_t min_user_ratings = 0;
    std::int64_t min_item_ratings = 0;
    std::int64_t delta_seconds = 3600;
};

// In-memory experiment store with a single FIFO worker. Configs name their
// input by dataset file name inside the data directory.
class ExperimentService {
public:
    struct Options {
        std::filesystem::path data_dir;
        std::size_t evaluation_threads = 1;
    };

    explicit ExperimentService(Options options);
    ~ExperimentService();
    ExperimentService(const ExperimentService&) = delete;
    ExperimentService& operator=(const ExperimentService&) = delete;

    // Throws ValidationFailed listing every invalid field.
    std::string create_experiment(const nlohmann::json& body);
    std::optional<ExperimentRecord> get_experiment(const std::string& id) const;
    // Newest first.
    std::vector<ExperimentRecord> list_experiments() const;

    std::vector<DatasetEntry> list_datasets() const;
    // nullopt for an unknown dataset; DataError for an unusable one.
    std::optional<Profile> dataset_profile(const std::string& name, const ProfileQuery& query) const;

    // Blocks until the queue is empty and nothing runs, or the timeout passes.
    bool wait_idle(std::chrono::milliseconds timeout) const;

private:
    std::optional<std::filesystem::path> resolve_dataset(const std::string& name) const;
    std::string next_id();
    void worker_loop(std::stop_token stop);

    Options options_;
    mutable std::shared_mutex store_mutex_;
    std::map<std::string, ExperimentRecord> store_;
    std::uint64_t submitted_ = 0;
    std::uint64_t id_state_;

    std::mutex queue_mutex_;
    std::condition_variable_any queue_cv_;
    std::deque<std::string> queue_;
    mutable std::mutex idle_mutex_;
    mutable std::condition_variable idle_cv_;
    std::size_t outstanding_ = 0;

    std::jthread worker_;
};

// HTTP/JSON front end:
//   POST /api/experiments            -> 201 {"id"} | 400 | 422 {"errors"}
//   GET  /api/experiments            -> records, newest first
//   GET  /api/experiments/{id}       -> record | 404
//   GET  /api/datasets               -> [{"name", "path", "profile"}]
//   GET  /api/datasets/{name}/profile[?delimiter&min_user_ratings&min_item_ratings&delta_seconds]
class HttpFrontend {
public:
    explicit HttpFrontend(ExperimentService& service);
    ~HttpFrontend();
    HttpFrontend(const HttpFrontend&) = delete;
    HttpFrontend& operator=(const HttpFrontend&) = delete;

    // Binds to a free port and returns it, or -1.
    int bind_any_port(const std::string& host);
    bool bind(const std::string& host, int port);
    // Blocks serving requests until stop().
    bool listen_after_bind();
    void stop();
    bool is_running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace seqbench
