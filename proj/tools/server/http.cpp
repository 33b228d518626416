#include "http.hpp"

#include <httplib.h>

namespace coda::service {

std::unique_ptr<httplib::Server> make_http_server(SessionStore& store, const HttpOptions& options) {
    auto server = std::make_unique<httplib::Server>();
    server->set_payload_max_length(options.max_upload);
    server->set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                 {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                                 {"Access-Control-Allow-Headers", "Content-Type"}});

    auto forward = [&store](const httplib::Request& req, httplib::Response& res) {
        Request r{req.method, req.path, req.body, {}};
        for (const auto& [k, v] : req.params) r.query.emplace(k, v);
        const Response out = store.handle(r);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    const std::string any = R"(/.*)";
    server->Get(any, forward);
    server->Post(any, forward);
    server->Delete(any, forward);
    server->Options(any, [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    return server;
}

}  // namespace coda::service
