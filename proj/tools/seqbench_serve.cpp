// Experiment service: accepts experiment configs over HTTP, runs them one at a
// time and serves the reports as JSON.

#include <csignal>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "seqbench/service.hpp"

namespace {
seqbench::HttpFrontend* g_frontend = nullptr;
void handle_signal(int) {
    if (g_frontend) g_frontend->stop();
}
}  // namespace

int main(int argc, char** argv) {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir = "data";

    CLI::App app{"seqbench experiment service"};
    app.add_option("--host", host, "address to bind")->capture_default_str();
    app.add_option("--port", port, "port to listen on (0 picks a free one)")->capture_default_str();
    app.add_option("--data-dir", data_dir, "directory of UIRT datasets")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    seqbench::ExperimentService service({data_dir, seqbench::evaluation_threads_from_env()});
    seqbench::HttpFrontend frontend(service);

    if (port == 0) {
        port = frontend.bind_any_port(host);
        if (port < 0) {
            std::cerr << "seqbench-serve: cannot bind " << host << '\n';
            return 1;
        }
    } else if (!frontend.bind(host, port)) {
        std::cerr << "seqbench-serve: cannot bind " << host << ':' << port << '\n';
        return 1;
    }
    g_frontend = &frontend;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::cout << "seqbench-serve listening on http://" << host << ':' << port << " (data: " << data_dir << ")"
              << std::endl;
    return frontend.listen_after_bind() ? 0 : 1;
}
