#include "http.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Session service for expert-driven amalgamation"};
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir;
    std::size_t max_upload = 16u << 20;
    std::string origin = "*";
    app.add_option("--host", host, "address to bind")->envname("CODA_HOST");
    app.add_option("--port", port, "port to listen on (0 picks a free one)")->envname("CODA_PORT");
    app.add_option("--data-dir", data_dir, "write-through copy of session exports")->envname("CODA_DATA_DIR");
    app.add_option("--max-upload", max_upload, "largest accepted request body in bytes")->envname("CODA_MAX_UPLOAD");
    app.add_option("--cors-origin", origin, "value of Access-Control-Allow-Origin")->envname("CODA_CORS_ORIGIN");
    CLI11_PARSE(app, argc, argv);

    coda::service::ServiceOptions opts;
    if (!data_dir.empty()) opts.data_dir = data_dir;
    coda::service::SessionStore store(opts);
    auto server = coda::service::make_http_server(store, {max_upload, origin});

    if (port == 0) port = server->bind_to_any_port(host);
    else if (!server->bind_to_port(host, port)) port = -1;
    if (port < 0) {
        std::cerr << "cannot bind " << host << "\n";
        return EXIT_FAILURE;
    }
    std::cout << "listening on http://" << host << ":" << port << std::endl;
    return server->listen_after_bind() ? EXIT_SUCCESS : EXIT_FAILURE;
}
