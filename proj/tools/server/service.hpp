#ifndef CODA_TOOLS_SERVICE_HPP
#define CODA_TOOLS_SERVICE_HPP

#include "coda/hierarchy.hpp"
#include "coda/io.hpp"
#include "coda/regression.hpp"
#include "coda/selection.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace coda::service {

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct Request {
    std::string method;
    std::string path;
    std::string body;
    std::map<std::string, std::string> query;
};

enum class WeightMode { Uniform, Proportional };

/**
 * @brief One dataset and the amalgamation hierarchy an expert builds on it.
 *
 * The trace is recomputed from the hierarchy after every mutation, so the
 * two can never disagree. Readers share the lock; mutations hold it
 * exclusively.
 */
class Session {
public:
    Session(std::string id, CompositionMatrix data, std::vector<std::size_t> replaced_per_part, WeightMode mode);

    const std::string& id() const noexcept { return id_; }
    std::shared_mutex& mutex() const noexcept { return mutex_; }

    // ---- reads; caller holds at least a shared lock ----
    const CompositionMatrix& data() const noexcept { return model_.data(); }
    const ResponseModel& model() const noexcept { return model_; }
    const AmalgamationHierarchy& hierarchy() const noexcept { return hierarchy_; }
    const SelectionTrace& trace() const noexcept { return trace_; }
    std::uint64_t version() const noexcept { return version_; }
    WeightMode weight_mode() const noexcept { return mode_; }
    const std::vector<std::size_t>& replaced_per_part() const noexcept { return replaced_; }
    std::size_t undo_depth() const noexcept { return undo_.size(); }
    std::size_t redo_depth() const noexcept { return redo_.size(); }
    /// Hex digest of the hierarchy document; equal states give equal hashes.
    std::string state_hash() const;

    // ---- mutations; caller holds the exclusive lock ----
    /// Replaces the hierarchy (after validation) and records the old one for undo.
    void apply(AmalgamationHierarchy next);
    bool undo();
    bool redo();

private:
    void refresh();

    std::string id_;
    ResponseModel model_;
    std::vector<std::size_t> replaced_;
    WeightMode mode_;
    AmalgamationHierarchy hierarchy_;
    SelectionTrace trace_;
    std::vector<AmalgamationHierarchy> undo_;
    std::vector<AmalgamationHierarchy> redo_;
    std::uint64_t version_ = 0;
    mutable std::shared_mutex mutex_;
};

struct ServiceOptions {
    std::optional<std::filesystem::path> data_dir;  // write-through copy of each session's export
};

/**
 * @brief Session registry and JSON request handling, independent of any
 *        HTTP library.
 */
class SessionStore {
public:
    explicit SessionStore(ServiceOptions options = {});

    Response handle(const Request& request);

    std::shared_ptr<Session> find(const std::string& id) const;
    std::size_t size() const;

private:
    Response create(const Request& r);
    Response get(Session& s);
    Response add_roots(Session& s, const Request& r);
    Response add_split(Session& s, const Request& r);
    Response import_hierarchy(Session& s, const Request& r);
    Response evaluate(Session& s, const Request& r);
    Response commit(Session& s, const Request& r);
    Response undo_redo(Session& s, bool undo);
    Response ordination(Session& s, const Request& r);
    Response ordination_locked(Session& s, const Request& r);
    Response export_session(Session& s);

    std::string new_id();
    void persist(const Session& s) const;

    ServiceOptions options_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex rng_mutex_;
    std::mt19937_64 rng_;
};

/// Session summary: dataset, hierarchy, trace and version.
Json session_state(const Session& s);
/// Hierarchy document, trace and SLR definition table.
Json session_export(const Session& s);

}  // namespace coda::service

#endif
