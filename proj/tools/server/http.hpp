#ifndef CODA_TOOLS_HTTP_HPP
#define CODA_TOOLS_HTTP_HPP

#include "service.hpp"

#include <cstddef>
#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace coda::service {

struct HttpOptions {
    std::size_t max_upload = 16u << 20;
    std::string cors_origin = "*";
};

/// An httplib server whose every route forwards to `store`.
std::unique_ptr<httplib::Server> make_http_server(SessionStore& store, const HttpOptions& options = {});

}  // namespace coda::service

#endif
