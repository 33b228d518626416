#include "coda/io.hpp"

#include "coda/csv.hpp"
#include "coda/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>

namespace coda {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t pos = 0; pos <= s.size(); ++pos) {
        if (pos == s.size() || s[pos] == sep) {
            out.push_back(trim(s.substr(start, pos - start)));
            start = pos + 1;
        }
    }
    return out;
}

std::optional<PartIndex> find_name(const std::vector<std::string>& names, std::string_view name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<PartIndex>(it - names.begin());
}

PartSet parse_side(std::string_view side, const std::vector<std::string>& names, std::string_view whole) {
    side = trim(side);
    if (side.size() >= 2 && side.front() == '(' && side.back() == ')' && !find_name(names, side)) {
        side = side.substr(1, side.size() - 2);
    }
    // a part name may itself contain '+'; try the whole side first
    if (auto j = find_name(names, side)) return {*j};
    PartSet out;
    for (auto token : split(side, '+')) {
        const auto j = find_name(names, token);
        if (!j) throw InputError("unknown part '" + std::string(token) + "' in logratio '" + std::string(whole) + "'");
        out.push_back(*j);
    }
    return out;
}

std::string dim_key(Eigen::Index d) { return "dim" + std::to_string(d + 1); }

std::string strip_prefix(const std::string& name, const std::string& prefix) {
    if (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0) return name.substr(prefix.size());
    return name;
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t n = 0; n < names.size(); ++n) {
        if (n) out += (n + 1 == names.size()) ? " & " : ", ";
        out += names[n];
    }
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

LogratioSpec parse_logratio(std::string_view text, const std::vector<std::string>& part_names) {
    std::string_view body = trim(text);
    if (body.size() > 5 && body.substr(0, 4) == "log(" && body.back() == ')') body = body.substr(4, body.size() - 5);
    // split at the '/' that leaves a known part set on each side
    std::optional<LogratioSpec> found;
    std::string last_error = "logratio '" + std::string(text) + "' needs the form num/den";
    for (std::size_t pos = body.find('/'); pos != std::string_view::npos; pos = body.find('/', pos + 1)) {
        try {
            auto num = parse_side(body.substr(0, pos), part_names, text);
            auto den = parse_side(body.substr(pos + 1), part_names, text);
            found = make_logratio(std::move(num), std::move(den), part_names.size());
            break;
        } catch (const InputError& e) {
            last_error = e.what();
        }
    }
    if (!found) throw InputError(last_error);
    return *found;
}

std::vector<LogratioSpec> parse_logratio_list(std::string_view text, const std::vector<std::string>& part_names) {
    std::vector<LogratioSpec> out;
    for (auto line : split(text, '\n')) {
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line == "all") {
            PartSet every(part_names.size());
            for (std::size_t j = 0; j < every.size(); ++j) every[j] = j;
            auto plrs = all_plrs(every, part_names.size());
            out.insert(out.end(), plrs.begin(), plrs.end());
            continue;
        }
        out.push_back(parse_logratio(line, part_names));
    }
    return out;
}

PartWeights parse_weights(std::string_view text, const std::vector<std::string>& part_names) {
    Eigen::VectorXd raw = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(part_names.size()), -1.0);
    for (const auto& rec : split_csv(text)) {
        if (rec.fields.size() != 2) throw ParseError(rec.line, 1, "weights need two fields: part,weight");
        double value = 0.0;
        const auto& cell = rec.fields[1];
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            if (rec.line == 1) continue;  // header
            throw ParseError(rec.line, 2, "'" + cell + "' is not a number");
        }
        const auto j = find_name(part_names, rec.fields[0]);
        if (!j) throw ParseError(rec.line, 1, "unknown part '" + rec.fields[0] + "'");
        if (raw(static_cast<Eigen::Index>(*j)) >= 0.0) throw ParseError(rec.line, 1, "part '" + rec.fields[0] + "' listed twice");
        if (!(value > 0.0)) throw ParseError(rec.line, 2, "weight must be positive");
        raw(static_cast<Eigen::Index>(*j)) = value;
    }
    for (std::size_t j = 0; j < part_names.size(); ++j) {
        if (raw(static_cast<Eigen::Index>(j)) < 0.0) throw InputError("no weight given for part '" + part_names[j] + "'");
    }
    return PartWeights::from_values(raw);
}

// ---- hierarchy ----

Json hierarchy_to_json(const AmalgamationHierarchy& h, const std::vector<std::string>& part_names) {
    Json doc = Json::object();
    doc["nodes"] = Json::array();
    for (const auto& n : h.nodes()) {
        Json parts = Json::array();
        for (auto j : n.parts) parts.push_back(part_names.at(j));
        doc["nodes"].push_back({{"name", n.name}, {"parts", parts}});
    }
    doc["splits"] = Json::array();
    for (const auto& s : h.splits()) doc["splits"].push_back({{"parent", s.parent}, {"children", s.children}});
    doc["slrs"] = Json::array();
    for (const auto& s : h.slrs()) {
        doc["slrs"].push_back({{"step", s.step}, {"num", s.numerator}, {"den", s.denominator}, {"manual", s.manual}});
    }
    return doc;
}

AmalgamationHierarchy hierarchy_from_json(const Json& doc, const std::vector<std::string>& part_names) {
    if (!doc.is_object()) throw HierarchyError("hierarchy document must be an object");
    std::vector<HierarchyNode> nodes;
    std::vector<Split> splits;
    std::vector<CommittedSlr> slrs;
    try {
        for (const auto& n : doc.value("nodes", Json::array())) {
            HierarchyNode node{n.at("name").get<std::string>(), {}};
            for (const auto& p : n.at("parts")) {
                const auto name = p.get<std::string>();
                const auto j = find_name(part_names, name);
                if (!j) throw HierarchyError("amalgamation '" + node.name + "' names unknown part '" + name + "'", node.name);
                node.parts.push_back(*j);
            }
            nodes.push_back(std::move(node));
        }
        for (const auto& s : doc.value("splits", Json::array())) {
            splits.push_back({s.at("parent").get<std::string>(), s.at("children").get<std::vector<std::string>>()});
        }
        for (const auto& s : doc.value("slrs", Json::array())) {
            slrs.push_back({s.at("step").get<int>(), s.at("num").get<std::string>(), s.at("den").get<std::string>(),
                            s.value("manual", false)});
        }
    } catch (const Json::exception& e) {
        throw HierarchyError(std::string("malformed hierarchy document: ") + e.what());
    }
    AmalgamationHierarchy h(std::move(nodes), std::move(splits), std::move(slrs));
    h.validate(part_names.size());
    return h;
}

// ---- reports ----

Json variance_report_to_json(const VarianceReport& report, const std::vector<std::string>& part_names) {
    Json doc = Json::object();
    doc["method"] = report.method == VarianceMethod::Pairs ? "pairs" : "clr";
    doc["total"] = report.total;
    doc["n_samples"] = report.n_samples;
    doc["n_parts"] = part_names.size();
    Json weights = Json::object();
    for (std::size_t j = 0; j < part_names.size(); ++j) weights[part_names[j]] = report.weights_used[j];
    doc["weights"] = weights;
    if (!report.per_clr.empty()) {
        Json clr = Json::object();
        for (std::size_t j = 0; j < report.per_clr.size(); ++j) clr[part_names.at(j)] = report.per_clr[j];
        doc["per_clr"] = clr;
    }
    if (report.per_pair) {
        Json pairs = Json::object();
        for (const auto& p : *report.per_pair) {
            pairs[part_names.at(p.numerator) + "/" + part_names.at(p.denominator)] = p.variance;
        }
        doc["n_pairs"] = report.per_pair->size();
        doc["per_pair"] = pairs;
    }
    return doc;
}

Json regression_fit_to_json(const RegressionFit& fit, const std::vector<std::string>& part_names,
                            const std::vector<std::string>& predictor_names) {
    Json doc = Json::object();
    doc["explained_fraction"] = fit.explained_fraction;
    doc["explained_pct"] = fit.explained_percent();
    doc["fitted_variance"] = fit.fitted_variance;
    doc["residual_variance"] = fit.residual_variance;
    doc["total_variance"] = fit.total_variance;
    doc["rank"] = fit.rank;
    Json intercepts = Json::object();
    for (std::size_t j = 0; j < part_names.size(); ++j) intercepts[part_names[j]] = fit.intercepts(static_cast<Eigen::Index>(j));
    doc["intercepts"] = intercepts;
    Json coefficients = Json::object();
    for (std::size_t p = 0; p < predictor_names.size(); ++p) {
        Json row = Json::object();
        for (std::size_t j = 0; j < part_names.size(); ++j) {
            row[part_names[j]] = fit.coefficients(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j));
        }
        coefficients[predictor_names[p]] = row;
    }
    doc["coefficients"] = coefficients;
    doc["warnings"] = fit.warnings;
    return doc;
}

Json candidate_scores_to_json(std::span<const CandidateScore> scores) {
    Json out = Json::array();
    const auto ties = tie_set(scores);
    for (const auto& s : scores) {
        const bool tied = std::find(ties.begin(), ties.end(), s.name) != ties.end();
        out.push_back({{"name", s.name},
                       {"additional_pct", s.additional_pct},
                       {"cumulative_pct", s.cumulative_pct},
                       {"tied_best", tied},
                       {"duplicate", s.duplicate}});
    }
    return out;
}

Json trace_to_json(const SelectionTrace& trace) {
    Json doc = Json::object();
    doc["base_pct"] = trace.base_pct;
    doc["final_pct"] = trace.final_pct();
    doc["stop"] = to_string(trace.stop);
    doc["steps"] = Json::array();
    for (const auto& s : trace.steps) {
        doc["steps"].push_back({{"step", s.step},
                                {"chosen", s.chosen_name},
                                {"additional_pct", s.additional_pct},
                                {"cumulative_pct", s.cumulative_pct},
                                {"manual", s.manual},
                                {"tie_set", s.tie_set},
                                {"candidates", candidate_scores_to_json(s.candidates)}});
    }
    return doc;
}

Json ordination_to_json(const OrdinationResult& r) {
    Json doc = Json::object();
    doc["dims"] = r.dims();
    doc["scaling"] = r.scaling == BiplotScaling::RowPrincipal ? "row_principal" : "column_principal";
    doc["total_variance"] = r.total_variance;
    Json vars = Json::object();
    Json pcts = Json::object();
    for (std::size_t d = 0; d < r.dims(); ++d) {
        vars[dim_key(static_cast<Eigen::Index>(d))] = r.dim_variances[d];
        pcts[dim_key(static_cast<Eigen::Index>(d))] = r.dim_percentages[d];
    }
    doc["dim_variances"] = vars;
    doc["dim_percentages"] = pcts;
    doc["rows"] = Json::array();
    for (Eigen::Index i = 0; i < r.row_coords.rows(); ++i) {
        Json row = Json::object();
        row["label"] = r.sample_labels.at(static_cast<std::size_t>(i));
        if (r.groups) row["group"] = r.groups->at(static_cast<std::size_t>(i));
        for (Eigen::Index d = 0; d < r.row_coords.cols(); ++d) row[dim_key(d)] = r.row_coords(i, d);
        doc["rows"].push_back(row);
    }
    doc["variables"] = Json::array();
    for (Eigen::Index v = 0; v < r.col_coords.rows(); ++v) {
        Json var = Json::object();
        var["name"] = r.variables.at(static_cast<std::size_t>(v));
        for (Eigen::Index d = 0; d < r.col_coords.cols(); ++d) var[dim_key(d)] = r.col_coords(v, d);
        doc["variables"].push_back(var);
    }
    doc["hulls"] = Json::array();
    for (const auto& h : r.hulls) doc["hulls"].push_back({{"group", h.group}, {"vertices", h.vertices}});
    return doc;
}

Json ternary_to_json(const Eigen::MatrixXd& coords, const CompositionMatrix& m) {
    Json doc = Json::object();
    doc["vertices"] = Json::array();
    const double h = std::sqrt(3.0) / 2.0;
    const double corners[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.5, h}};
    for (std::size_t j = 0; j < 3; ++j) {
        doc["vertices"].push_back({{"name", m.part_names().at(j)}, {"x", corners[j][0]}, {"y", corners[j][1]}});
    }
    doc["rows"] = Json::array();
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        Json row = Json::object();
        row["label"] = m.sample_labels()[static_cast<std::size_t>(i)];
        if (m.group_factor()) row["group"] = m.group_factor()->at(static_cast<std::size_t>(i));
        row["x"] = coords(i, 0);
        row["y"] = coords(i, 1);
        doc["rows"].push_back(row);
    }
    if (m.group_factor()) {
        doc["hulls"] = Json::array();
        for (const auto& hull : group_hulls(coords, *m.group_factor())) {
            doc["hulls"].push_back({{"group", hull.group}, {"vertices", hull.vertices}});
        }
    }
    return doc;
}

std::string trace_to_csv(const SelectionTrace& trace) {
    std::string out = "step,chosen,additional_pct,cumulative_pct,tie_set\n";
    if (trace.steps.empty()) {
        out += "0,," + format_double(0.0) + "," + format_double(trace.base_pct) + ",\n";
        return out;
    }
    for (const auto& s : trace.steps) {
        std::string ties;
        for (std::size_t n = 0; n < s.tie_set.size(); ++n) {
            if (n) ties += ';';
            ties += s.tie_set[n];
        }
        out += std::to_string(s.step) + "," + csv_escape(s.chosen_name) + "," + format_double(s.additional_pct) + "," +
               format_double(s.cumulative_pct) + "," + csv_escape(ties) + "\n";
    }
    return out;
}

std::string coordinates_to_csv(const OrdinationResult& r) {
    std::string out = "label,group";
    for (Eigen::Index d = 0; d < r.row_coords.cols(); ++d) out += "," + dim_key(d);
    out += '\n';
    for (Eigen::Index i = 0; i < r.row_coords.rows(); ++i) {
        const auto row = static_cast<std::size_t>(i);
        out += csv_escape(r.sample_labels.at(row)) + "," + (r.groups ? csv_escape(r.groups->at(row)) : std::string());
        for (Eigen::Index d = 0; d < r.row_coords.cols(); ++d) out += "," + format_double(r.row_coords(i, d));
        out += '\n';
    }
    return out;
}

std::string ternary_to_csv(const Eigen::MatrixXd& coords, const CompositionMatrix& m) {
    std::string out = "label,group,x,y\n";
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const auto row = static_cast<std::size_t>(i);
        out += csv_escape(m.sample_labels()[row]) + "," +
               (m.group_factor() ? csv_escape(m.group_factor()->at(row)) : std::string()) + "," +
               format_double(coords(i, 0)) + "," + format_double(coords(i, 1)) + "\n";
    }
    return out;
}

std::vector<SlrTableRow> slr_table(const AmalgamationHierarchy& h) {
    std::vector<SlrTableRow> rows;
    std::vector<std::optional<std::string>> seen_groups;
    for (const auto& slr : h.slrs()) {
        const auto group = h.common_parent(slr.numerator, slr.denominator);
        if (!group) continue;
        const bool first = std::find(seen_groups.begin(), seen_groups.end(), *group) == seen_groups.end();
        std::string label;
        if (first) {
            seen_groups.push_back(*group);
            label = join_names(h.children_of(*group));
            if (*group) label = "(" + **group + ") " + label;
        }
        const std::string prefix = group->value_or("");
        const std::string abbreviation =
            prefix + strip_prefix(slr.numerator, prefix) + "/" + strip_prefix(slr.denominator, prefix);
        rows.push_back({label, "log(" + slr.numerator + "/" + slr.denominator + ")", abbreviation});
    }
    return rows;
}

Json slr_table_to_json(const std::vector<SlrTableRow>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) {
        out.push_back({{"amalgamations", r.amalgamations}, {"logratio", r.logratio}, {"abbreviation", r.abbreviation}});
    }
    return out;
}

}  // namespace coda
