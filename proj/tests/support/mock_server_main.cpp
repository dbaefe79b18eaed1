// Standalone model-server stand-in for manual runs of the remote backend.
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "mock_server.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
}

int main(int argc, char** argv) {
    CLI::App app{"Mock /v1/classify server"};
    std::string fixture;
    int port = 0;
    app.add_option("--fixture", fixture, "Fixture JSON")->required();
    app.add_option("--port", port, "Port (0 = any)");
    CLI11_PARSE(app, argc, argv);

    auto server = empeval::testing::MockServer::from_file(fixture);
    server.start(port);
    std::cout << server.url() << std::endl;
    std::signal(SIGINT, [](int) { g_stop = 1; });
    std::signal(SIGTERM, [](int) { g_stop = 1; });
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return 0;
}
