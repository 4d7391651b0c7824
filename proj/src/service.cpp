#include "seqbench/service.hpp"

#include <algorithm>
#include <charconv>
#include <random>

#include <httplib.h>

#include "seqbench/errors.hpp"
#include "seqbench/random.hpp"

namespace seqbench {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view experiment_status_name(ExperimentStatus s) {
    switch (s) {
        case ExperimentStatus::Pending: return "pending";
        case ExperimentStatus::Running: return "running";
        case ExperimentStatus::Done: return "done";
        case ExperimentStatus::Failed: return "failed";
    }
    return "pending";
}

ordered_json record_to_json(const ExperimentRecord& record) {
    ordered_json j;
    j["id"] = record.id;
    j["status"] = experiment_status_name(record.status);
    j["created_at"] = record.created_at;
    j["config"] = config_to_json(record.config);
    if (record.result) {
        j["profile"] = profile_to_json(record.result->profile);
        auto& reports = j["reports"] = ordered_json::array();
        for (const auto& r : record.result->reports) reports.push_back(report_to_json(r));
    }
    if (record.error) j["error"] = *record.error;
    return j;
}

ExperimentService::ExperimentService(Options options)
    : options_(std::move(options)),
      id_state_(std::random_device{}() ^ (static_cast<std::uint64_t>(std::random_device{}()) << 32)),
      worker_([this](std::stop_token stop) { worker_loop(stop); }) {}

ExperimentService::~ExperimentService() {
    worker_.request_stop();
    queue_cv_.notify_all();
}

std::string ExperimentService::next_id() {
    id_state_ = splitmix64(id_state_);
    char buf[17];
    auto res = std::to_chars(buf, buf + 16, id_state_, 16);
    std::string hex(buf, res.ptr);
    return std::string(16 - hex.size(), '0') + hex;
}

std::optional<std::filesystem::path> ExperimentService::resolve_dataset(const std::string& name) const {
    for (const auto& entry : list_datasets()) {
        if (entry.name == name) return entry.path;
    }
    return std::nullopt;
}

std::string ExperimentService::create_experiment(const json& body) {
    std::vector<FieldError> errors;
    ExperimentConfig config = config_from_json(body, errors);
    for (auto& e : validate(config)) {
        const bool already = std::any_of(errors.begin(), errors.end(),
                                         [&](const FieldError& prior) { return prior.field == e.field; });
        if (!already) errors.push_back(std::move(e));
    }
    if (!config.input_path.empty() && !resolve_dataset(config.input_path)) {
        errors.push_back({"input_path", "unknown dataset '" + config.input_path + "'"});
    }
    if (!errors.empty()) throw ValidationFailed(std::move(errors));

    ExperimentRecord record;
    record.config = std::move(config);
    record.created_at =
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
    std::string id;
    {
        std::unique_lock lock(store_mutex_);
        do {
            id = next_id();
        } while (store_.count(id));
        record.id = id;
        record.sequence_no = submitted_++;
        store_.emplace(id, std::move(record));
    }
    {
        std::lock_guard lock(idle_mutex_);
        ++outstanding_;
    }
    {
        std::lock_guard lock(queue_mutex_);
        queue_.push_back(id);
    }
    queue_cv_.notify_one();
    return id;
}

std::optional<ExperimentRecord> ExperimentService::get_experiment(const std::string& id) const {
    std::shared_lock lock(store_mutex_);
    auto it = store_.find(id);
    if (it == store_.end()) return std::nullopt;
    return it->second;
}

std::vector<ExperimentRecord> ExperimentService::list_experiments() const {
    std::vector<ExperimentRecord> out;
    {
        std::shared_lock lock(store_mutex_);
        for (const auto& [id, record] : store_) out.push_back(record);
    }
    std::sort(out.begin(), out.end(),
              [](const ExperimentRecord& a, const ExperimentRecord& b) { return a.sequence_no > b.sequence_no; });
    return out;
}

std::vector<DatasetEntry> ExperimentService::list_datasets() const {
    std::vector<DatasetEntry> out;
    std::error_code ec;
    if (!std::filesystem::is_directory(options_.data_dir, ec)) return out;
    for (const auto& entry : std::filesystem::directory_iterator(options_.data_dir, ec)) {
        if (!entry.is_regular_file(ec)) continue;
        const std::string name = entry.path().filename().string();
        if (name.empty() || name.front() == '.') continue;
        out.push_back({name, entry.path()});
    }
    std::sort(out.begin(), out.end(), [](const DatasetEntry& a, const DatasetEntry& b) { return a.name < b.name; });
    return out;
}

std::optional<Profile> ExperimentService::dataset_profile(const std::string& name, const ProfileQuery& query) const {
    const auto path = resolve_dataset(name);
    if (!path) return std::nullopt;
    if (query.min_user_ratings < 0 || query.min_item_ratings < 0 || query.delta_seconds <= 0) {
        throw ConfigError("profile thresholds out of range");
    }
    const RatingLog raw = parse_ratings_file(path->string(), query.delimiter);
    const RatingLog filtered = apply_support_filters(raw, static_cast<std::size_t>(query.min_user_ratings),
                                                     static_cast<std::size_t>(query.min_item_ratings));
    const SequenceSet sequences = build_sequences(filtered, query.delta_seconds);
    return profile(sequences, sequences.total_steps());
}

bool ExperimentService::wait_idle(std::chrono::milliseconds timeout) const {
    std::unique_lock lock(idle_mutex_);
    return idle_cv_.wait_for(lock, timeout, [&] { return outstanding_ == 0; });
}

void ExperimentService::worker_loop(std::stop_token stop) {
    while (true) {
        std::string id;
        {
            std::unique_lock lock(queue_mutex_);
            if (!queue_cv_.wait(lock, stop, [&] { return !queue_.empty(); })) return;
            id = std::move(queue_.front());
            queue_.pop_front();
        }

        ExperimentConfig config;
        {
            std::unique_lock lock(store_mutex_);
            auto& record = store_.at(id);
            record.status = ExperimentStatus::Running;
            config = record.config;
        }

        std::optional<ExperimentResult> result;
        std::optional<std::string> error;
        try {
            const auto path = resolve_dataset(config.input_path);
            if (!path) throw DataError("dataset '" + config.input_path + "' disappeared");
            ExperimentConfig resolved = config;
            resolved.input_path = path->string();
            result = run_experiment(resolved, options_.evaluation_threads);
            result->config = config;
        } catch (const std::exception& e) {
            error = e.what();
        }

        {
            std::unique_lock lock(store_mutex_);
            auto& record = store_.at(id);
            if (result) {
                record.result = std::move(result);
                record.status = ExperimentStatus::Done;
            } else {
                record.error = std::move(error);
                record.status = ExperimentStatus::Failed;
            }
        }
        {
            std::lock_guard lock(idle_mutex_);
            --outstanding_;
        }
        idle_cv_.notify_all();
    }
}

// HTTP front end.

struct HttpFrontend::Impl {
    ExperimentService& service;
    httplib::Server server;

    explicit Impl(ExperimentService& s) : service(s) { install_routes(); }

    static void send_json(httplib::Response& res, int status, const ordered_json& body) {
        res.status = status;
        res.set_content(dump_fixed(body, 2) + "\n", "application/json");
    }

    static ordered_json errors_json(const std::vector<FieldError>& errors) {
        ordered_json j;
        auto& list = j["errors"] = ordered_json::array();
        for (const auto& e : errors) list.push_back(ordered_json{{"field", e.field}, {"message", e.message}});
        return j;
    }

    static bool read_int_param(const httplib::Request& req, const char* key, std::int64_t& out,
                               std::vector<FieldError>& errors) {
        if (!req.has_param(key)) return true;
        const std::string value = req.get_param_value(key);
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            errors.push_back({key, "must be an integer"});
            return false;
        }
        return true;
    }

    void install_routes() {
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Headers", "Content-Type"},
                                    {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
        server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server.Post("/api/experiments", [this](const httplib::Request& req, httplib::Response& res) {
            json body;
            try {
                body = json::parse(req.body);
            } catch (const json::parse_error& e) {
                send_json(res, 400, ordered_json{{"error", std::string("malformed JSON: ") + e.what()}});
                return;
            }
            try {
                const std::string id = service.create_experiment(body);
                send_json(res, 201, ordered_json{{"id", id}});
            } catch (const ValidationFailed& e) {
                send_json(res, 422, errors_json(e.errors()));
            }
        });

        server.Get("/api/experiments", [this](const httplib::Request&, httplib::Response& res) {
            ordered_json list = ordered_json::array();
            for (const auto& record : service.list_experiments()) list.push_back(record_to_json(record));
            send_json(res, 200, list);
        });

        server.Get(R"(/api/experiments/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            const auto record = service.get_experiment(req.matches[1]);
            if (!record) {
                send_json(res, 404, ordered_json{{"error", "experiment not found"}});
                return;
            }
            send_json(res, 200, record_to_json(*record));
        });

        server.Get("/api/datasets", [this](const httplib::Request&, httplib::Response& res) {
            ordered_json list = ordered_json::array();
            for (const auto& d : service.list_datasets()) {
                list.push_back(ordered_json{{"name", d.name},
                                            {"path", d.path.string()},
                                            {"profile", "/api/datasets/" + d.name + "/profile"}});
            }
            send_json(res, 200, list);
        });

        server.Get(R"(/api/datasets/([^/]+)/profile)", [this](const httplib::Request& req, httplib::Response& res) {
            ProfileQuery query;
            std::vector<FieldError> errors;
            if (req.has_param("delimiter")) {
                if (auto d = parse_delimiter(req.get_param_value("delimiter"))) {
                    query.delimiter = *d;
                } else {
                    errors.push_back({"delimiter", "unsupported delimiter"});
                }
            }
            read_int_param(req, "min_user_ratings", query.min_user_ratings, errors);
            read_int_param(req, "min_item_ratings", query.min_item_ratings, errors);
            read_int_param(req, "delta_seconds", query.delta_seconds, errors);
            if (query.min_user_ratings < 0) errors.push_back({"min_user_ratings", "must be >= 0"});
            if (query.min_item_ratings < 0) errors.push_back({"min_item_ratings", "must be >= 0"});
            if (query.delta_seconds <= 0) errors.push_back({"delta_seconds", "must be a positive number of seconds"});
            if (!errors.empty()) {
                send_json(res, 422, errors_json(errors));
                return;
            }
            try {
                const auto p = service.dataset_profile(req.matches[1], query);
                if (!p) {
                    send_json(res, 404, ordered_json{{"error", "dataset not found"}});
                    return;
                }
                send_json(res, 200, profile_to_json(*p));
            } catch (const Error& e) {
                send_json(res, 422, ordered_json{{"error", e.what()}});
            }
        });
    }
};

HttpFrontend::HttpFrontend(ExperimentService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpFrontend::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }
bool HttpFrontend::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpFrontend::stop() { impl_->server.stop(); }
bool HttpFrontend::is_running() const { return impl_->server.is_running(); }

}  // namespace seqbench
