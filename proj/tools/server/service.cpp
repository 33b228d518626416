#include "service.hpp"

#include "coda/csv.hpp"
#include "coda/error.hpp"
#include "coda/ordination.hpp"
#include "coda/variance.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace coda::service {

namespace {

/// Error with an HTTP status; `extra` is merged into the error body.
struct HttpError {
    int status;
    std::string message;
    Json extra = Json::object();
};

Response json_response(int status, const Json& doc) { return {status, doc.dump(2) + "\n"}; }

Response error_response(const HttpError& e) {
    Json doc = Json::object();
    doc["error"] = e.message;
    for (const auto& [k, v] : e.extra.items()) doc[k] = v;
    return json_response(e.status, doc);
}

std::vector<std::string> segments(std::string_view path) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto end = path.find('/', start);
        const auto piece = path.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!piece.empty()) out.emplace_back(piece);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

Json parse_body(const Request& r) {
    if (r.body.empty()) return Json::object();
    try {
        return Json::parse(r.body);
    } catch (const Json::parse_error& e) {
        throw HttpError{400, std::string("request body is not valid JSON: ") + e.what()};
    }
}

std::vector<HierarchyNode> parse_nodes(const Json& list, const CompositionMatrix& m) {
    if (!list.is_array()) throw InputError("expected an array of {name, parts}");
    std::vector<HierarchyNode> out;
    for (const auto& n : list) {
        if (!n.is_object() || !n.contains("name") || !n.contains("parts")) throw InputError("each node needs name and parts");
        HierarchyNode node{n["name"].get<std::string>(), {}};
        for (const auto& p : n["parts"]) node.parts.push_back(m.part_index(p.get<std::string>()));
        out.push_back(std::move(node));
    }
    return out;
}

std::optional<LogratioSpec> node_spec(const AmalgamationHierarchy& h, std::string_view text, std::size_t parts) {
    for (auto pos = text.find('/'); pos != std::string_view::npos; pos = text.find('/', pos + 1)) {
        const std::string num(text.substr(0, pos));
        const std::string den(text.substr(pos + 1));
        if (h.find_node(num) && h.find_node(den)) return h.spec_between(num, den, parts);
    }
    return std::nullopt;
}

/// A candidate given as "num/den" (amalgamation or part names) or {num, den}.
LogratioSpec parse_candidate(const Json& c, const Session& s) {
    const auto& h = s.hierarchy();
    const auto parts = s.data().parts();
    if (c.is_object()) {
        return h.spec_between(c.at("num").get<std::string>(), c.at("den").get<std::string>(), parts);
    }
    if (!c.is_string()) throw InputError("a candidate must be a string or {num, den}");
    std::string text = c.get<std::string>();
    if (text.size() > 5 && text.rfind("log(", 0) == 0 && text.back() == ')') text = text.substr(4, text.size() - 5);
    if (auto spec = node_spec(h, text, parts)) return *spec;
    return parse_logratio(text, s.data().part_names());
}

/// Candidates of the sibling group that holds `chosen`, as the trace would see them.
std::vector<CandidateScore> score_group(const Session& s, const std::optional<std::string>& parent,
                                        const LogratioSpec* chosen) {
    const auto parts = s.data().parts();
    const auto committed = s.hierarchy().committed_specs(parts);
    std::vector<LogratioSpec> candidates;
    for (auto& c : s.hierarchy().sibling_candidates(parent, parts)) {
        if (std::any_of(committed.begin(), committed.end(), [&](const auto& x) { return x.same_line(c); })) continue;
        candidates.push_back(chosen && c.same_line(*chosen) ? *chosen : c);
    }
    if (candidates.empty()) return {};
    return evaluate_candidates(s.model(), committed, candidates);
}

std::string query(const Request& r, const std::string& key, const std::string& fallback) {
    const auto it = r.query.find(key);
    return it == r.query.end() ? fallback : it->second;
}

}  // namespace

// ---- Session ----

Session::Session(std::string id, CompositionMatrix data, std::vector<std::size_t> replaced_per_part, WeightMode mode)
    : id_(std::move(id)),
      model_(data, mode == WeightMode::Uniform ? PartWeights::uniform(data.parts()) : PartWeights::proportional(data)),
      replaced_(std::move(replaced_per_part)),
      mode_(mode) {
    refresh();
}

std::string Session::state_hash() const {
    // FNV-1a over the canonical hierarchy document
    const std::string doc = hierarchy_to_json(hierarchy_, data().part_names()).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : doc) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void Session::refresh() {
    trace_ = model_.total_variance() > 0.0 ? hierarchy_trace(model_, hierarchy_) : SelectionTrace{};
}

void Session::apply(AmalgamationHierarchy next) {
    next.validate(data().parts());
    undo_.push_back(std::move(hierarchy_));
    redo_.clear();
    hierarchy_ = std::move(next);
    ++version_;
    refresh();
}

bool Session::undo() {
    if (undo_.empty()) return false;
    redo_.push_back(std::move(hierarchy_));
    hierarchy_ = std::move(undo_.back());
    undo_.pop_back();
    ++version_;
    refresh();
    return true;
}

bool Session::redo() {
    if (redo_.empty()) return false;
    undo_.push_back(std::move(hierarchy_));
    hierarchy_ = std::move(redo_.back());
    redo_.pop_back();
    ++version_;
    refresh();
    return true;
}

Json session_state(const Session& s) {
    const auto& m = s.data();
    Json doc = Json::object();
    doc["id"] = s.id();
    doc["version"] = s.version();
    doc["state_hash"] = s.state_hash();
    doc["parts"] = m.parts();
    doc["samples"] = m.samples();
    doc["part_names"] = m.part_names();
    doc["weights"] = s.weight_mode() == WeightMode::Uniform ? "uniform" : "proportional";
    doc["total_variance"] = s.model().total_variance();
    doc["hierarchy"] = hierarchy_to_json(s.hierarchy(), m.part_names());
    doc["trace"] = trace_to_json(s.trace());
    doc["explained_pct"] = s.trace().final_pct();
    doc["warnings"] = s.hierarchy().validate(m.parts());
    doc["can_undo"] = s.undo_depth() > 0;
    doc["can_redo"] = s.redo_depth() > 0;
    return doc;
}

Json session_export(const Session& s) {
    Json doc = Json::object();
    doc["hierarchy"] = hierarchy_to_json(s.hierarchy(), s.data().part_names());
    doc["trace"] = trace_to_json(s.trace());
    doc["trace_csv"] = trace_to_csv(s.trace());
    doc["slr_table"] = slr_table_to_json(slr_table(s.hierarchy()));
    return doc;
}

// ---- SessionStore ----

SessionStore::SessionStore(ServiceOptions options) : options_(std::move(options)), rng_(std::random_device{}()) {
    if (options_.data_dir) std::filesystem::create_directories(*options_.data_dir);
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionStore::size() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
}

std::string SessionStore::new_id() {
    std::lock_guard lock(rng_mutex_);
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                  static_cast<unsigned long long>(rng_()));
    return buf;
}

void SessionStore::persist(const Session& s) const {
    if (!options_.data_dir) return;
    std::ofstream f(*options_.data_dir / (s.id() + ".json"), std::ios::binary);
    f << session_export(s).dump(2) << "\n";
}

Response SessionStore::handle(const Request& r) {
    try {
        const auto seg = segments(r.path);
        if (seg.size() == 1 && seg[0] == "health" && r.method == "GET") return json_response(200, {{"status", "ok"}});
        if (seg.empty() || seg[0] != "sessions") throw HttpError{404, "no route for " + r.path};
        if (seg.size() == 1) {
            if (r.method == "POST") return create(r);
            throw HttpError{405, "use POST /sessions"};
        }
        const auto session = find(seg[1]);
        if (!session) throw HttpError{404, "unknown session '" + seg[1] + "'"};
        Session& s = *session;
        const std::string action = seg.size() > 2 ? seg[2] : "";
        if (seg.size() > 3) throw HttpError{404, "no route for " + r.path};

        if (action.empty() && r.method == "GET") return get(s);
        if (action.empty() && r.method == "DELETE") {
            std::unique_lock lock(mutex_);
            sessions_.erase(s.id());
            return json_response(200, {{"deleted", s.id()}});
        }
        if (r.method == "GET") {
            if (action == "ordination") return ordination(s, r);
            if (action == "export") return export_session(s);
        }
        if (r.method == "POST") {
            if (action == "roots") return add_roots(s, r);
            if (action == "split") return add_split(s, r);
            if (action == "hierarchy") return import_hierarchy(s, r);
            if (action == "evaluate") return evaluate(s, r);
            if (action == "commit") return commit(s, r);
            if (action == "undo") return undo_redo(s, true);
            if (action == "redo") return undo_redo(s, false);
        }
        throw HttpError{404, "no route for " + r.method + " " + r.path};
    } catch (const HttpError& e) {
        return error_response(e);
    } catch (const ParseError& e) {
        return error_response({400, e.what(), {{"row", e.row()}, {"column", e.column()}}});
    } catch (const HierarchyError& e) {
        Json extra = Json::object();
        if (e.offending()) extra["offending"] = *e.offending();
        return error_response({409, e.what(), extra});
    } catch (const InputError& e) {
        return error_response({422, e.what()});
    } catch (const DegenerateError& e) {
        return error_response({422, e.what()});
    } catch (const Json::exception& e) {
        return error_response({422, std::string("malformed request: ") + e.what()});
    }
}

Response SessionStore::create(const Request& r) {
    const std::string weights = query(r, "weights", "uniform");
    if (weights != "uniform" && weights != "proportional") throw HttpError{400, "weights must be uniform or proportional"};
    CsvOptions opts;
    if (r.query.count("label_col")) opts.label_column = r.query.at("label_col");
    if (r.query.count("group_col")) opts.group_column = r.query.at("group_col");
    ZeroReplacement zr = [&] {
        try {
            return replace_zeros(parse_composition_csv(r.body, opts));
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw HttpError{400, e.what()};
        }
    }();
    const std::size_t replaced = zr.replaced_total();
    auto session = std::make_shared<Session>(new_id(), close(zr.matrix), zr.replaced_per_part,
                                             weights == "uniform" ? WeightMode::Uniform : WeightMode::Proportional);
    {
        std::unique_lock lock(mutex_);
        sessions_.emplace(session->id(), session);
    }
    persist(*session);

    const auto& m = session->data();
    Json doc = Json::object();
    doc["id"] = session->id();
    doc["parts"] = m.parts();
    doc["samples"] = m.samples();
    doc["part_names"] = m.part_names();
    if (m.group_factor()) {
        std::vector<std::string> levels;
        for (const auto& g : *m.group_factor()) {
            if (std::find(levels.begin(), levels.end(), g) == levels.end()) levels.push_back(g);
        }
        doc["groups"] = levels;
    }
    doc["replaced_cells"] = replaced;
    Json per_part = Json::object();
    for (std::size_t j = 0; j < m.parts(); ++j) {
        if (zr.replaced_per_part[j]) per_part[m.part_names()[j]] = zr.replaced_per_part[j];
    }
    doc["replaced_per_part"] = per_part;
    doc["total_variance"] = session->model().total_variance();
    doc["weights"] = weights;
    return json_response(201, doc);
}

Response SessionStore::get(Session& s) {
    std::shared_lock lock(s.mutex());
    return json_response(200, session_state(s));
}

namespace {

/// Rejects a mutation made against an outdated version, returning the current state.
void check_version(const Json& body, const Session& s) {
    if (!body.contains("version")) return;
    if (body["version"].get<std::uint64_t>() != s.version()) {
        throw HttpError{409, "session changed (now at version " + std::to_string(s.version()) + ")",
                        {{"state", session_state(s)}}};
    }
}

}  // namespace

Response SessionStore::add_roots(Session& s, const Request& r) {
    const Json body = parse_body(r);
    std::unique_lock lock(s.mutex());
    check_version(body, s);
    AmalgamationHierarchy next = s.hierarchy();
    next.add_roots(parse_nodes(body.at("roots"), s.data()), s.data().parts());
    s.apply(std::move(next));
    persist(s);
    return json_response(200, session_state(s));
}

Response SessionStore::add_split(Session& s, const Request& r) {
    const Json body = parse_body(r);
    std::unique_lock lock(s.mutex());
    check_version(body, s);
    AmalgamationHierarchy next = s.hierarchy();
    next.add_split(body.at("parent").get<std::string>(), parse_nodes(body.at("children"), s.data()),
                   s.data().parts());
    s.apply(std::move(next));
    persist(s);
    return json_response(200, session_state(s));
}

Response SessionStore::import_hierarchy(Session& s, const Request& r) {
    Json body = parse_body(r);
    // accept either a bare hierarchy document or a full export
    if (body.contains("hierarchy")) body = body["hierarchy"];
    std::unique_lock lock(s.mutex());
    s.apply(hierarchy_from_json(body, s.data().part_names()));
    persist(s);
    return json_response(200, session_state(s));
}

Response SessionStore::evaluate(Session& s, const Request& r) {
    const Json body = parse_body(r);
    std::shared_lock lock(s.mutex());
    const auto parts = s.data().parts();
    std::vector<CandidateScore> scores;
    if (body.contains("candidates")) {
        std::vector<LogratioSpec> candidates;
        for (const auto& c : body["candidates"]) candidates.push_back(parse_candidate(c, s));
        if (candidates.empty()) throw InputError("no candidates given");
        scores = evaluate_candidates(s.model(), s.hierarchy().committed_specs(parts), candidates);
    } else {
        std::optional<std::string> parent;
        if (body.contains("parent") && !body["parent"].is_null()) parent = body["parent"].get<std::string>();
        if (parent) (void)s.hierarchy().node(*parent);
        if (s.hierarchy().children_of(parent).size() < 2) {
            throw InputError(parent ? "amalgamation '" + *parent + "' has no split" : "define at least two roots first");
        }
        const auto committed = s.hierarchy().committed_specs(parts);
        const auto all = s.hierarchy().sibling_candidates(parent, parts);
        scores = evaluate_candidates(s.model(), committed, all);
    }
    Json doc = Json::object();
    doc["version"] = s.version();
    doc["next_step"] = s.hierarchy().slrs().empty() ? 1 : s.hierarchy().slrs().back().step + 1;
    doc["base_pct"] = s.trace().final_pct();
    doc["tie_set"] = tie_set(scores);
    doc["candidates"] = candidate_scores_to_json(scores);
    return json_response(200, doc);
}

Response SessionStore::commit(Session& s, const Request& r) {
    const Json body = parse_body(r);
    const auto num = body.at("num").get<std::string>();
    const auto den = body.at("den").get<std::string>();
    std::unique_lock lock(s.mutex());
    check_version(body, s);
    const auto parts = s.data().parts();

    bool manual = false;
    if (body.contains("manual") && !body["manual"].is_null()) {
        manual = body["manual"].get<bool>();
    } else if (const auto group = s.hierarchy().common_parent(num, den)) {
        // manual when the expert overrides the automatic choice
        const auto chosen = s.hierarchy().spec_between(num, den, parts);
        const auto scores = score_group(s, *group, &chosen);
        const auto ties = tie_set(scores);
        const auto name = chosen.name(s.data().part_names());
        manual = std::find(ties.begin(), ties.end(), name) == ties.end();
    }
    AmalgamationHierarchy next = s.hierarchy();
    next.commit(num, den, manual, parts);
    s.apply(std::move(next));
    persist(s);
    return json_response(200, session_state(s));
}

Response SessionStore::undo_redo(Session& s, bool undo) {
    std::unique_lock lock(s.mutex());
    if (!(undo ? s.undo() : s.redo())) {
        throw HttpError{409, undo ? "nothing to undo" : "nothing to redo", {{"state", session_state(s)}}};
    }
    persist(s);
    return json_response(200, session_state(s));
}

Response SessionStore::ordination(Session& s, const Request& r) {
    std::shared_lock lock(s.mutex());
    try {
        return ordination_locked(s, r);
    } catch (const HierarchyError& e) {
        throw HttpError{422, e.what()};
    }
}

Response SessionStore::ordination_locked(Session& s, const Request& r) {
    const std::string mode = query(r, "mode", "lra");
    const std::string target = query(r, "target", mode == "ternary" ? "roots" : "parts");
    const auto& m = s.data();
    const auto scaling = query(r, "scaling", "row") == "column" ? BiplotScaling::ColumnPrincipal : BiplotScaling::RowPrincipal;

    if (mode == "ternary") {
        const auto view = amalgamation_view(m, s.hierarchy(), target);
        if (view.parts() != 3) throw InputError("ternary needs a 3-part view, '" + target + "' has " + std::to_string(view.parts()));
        Json doc = ternary_to_json(ternary_coords(view), view);
        doc["mode"] = mode;
        doc["target"] = target;
        return json_response(200, doc);
    }
    OrdinationResult result;
    if (mode == "lra") {
        const auto view = amalgamation_view(m, s.hierarchy(), target);
        const auto w = target == "parts" ? s.model().weights()
                       : s.weight_mode() == WeightMode::Uniform ? PartWeights::uniform(view.parts())
                                                                : PartWeights::proportional(view);
        result = lra(view, w, scaling);
    } else if (mode == "pca-slr") {
        const auto specs = s.hierarchy().committed_specs(m.parts());
        if (specs.size() < 2) throw InputError("pca-slr needs at least two committed SLRs");
        result = pca_of_logratios(m, specs, {query(r, "standardize", "false") == "true", scaling});
    } else {
        throw InputError("unknown mode '" + mode + "' (lra, pca-slr or ternary)");
    }
    Json doc = ordination_to_json(result);
    doc["mode"] = mode;
    doc["target"] = target;
    doc["hulls_disjoint"] = hulls_disjoint(result);
    return json_response(200, doc);
}

Response SessionStore::export_session(Session& s) {
    std::shared_lock lock(s.mutex());
    return json_response(200, session_export(s));
}

}  // namespace coda::service
