#include "cli.hpp"

#include "coda/csv.hpp"
#include "coda/error.hpp"
#include "coda/hierarchy.hpp"
#include "coda/io.hpp"
#include "coda/ordination.hpp"
#include "coda/selection.hpp"
#include "coda/variance.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace coda::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string input;
    std::string label_col;
    std::string group_col;
    bool no_group = false;
    double closure = 1.0;
    std::string weights = "uniform";
    std::string out_dir = ".";
    std::vector<std::string> command;  // echoed to run.log
};

struct SelectConfig {
    std::string hierarchy;
    std::string candidates;
    std::size_t steps = 0;  // 0: as many as the candidates allow
    double floor = 0.0;
};

struct OrdinateConfig {
    std::string mode = "lra";
    std::string target = "parts";
    std::string hierarchy;
    std::string candidates;
    bool standardize = false;
    bool column_principal = false;
};

std::string pct(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", x);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

struct Dataset {
    CompositionMatrix data;
    std::size_t replaced = 0;
    std::vector<std::size_t> replaced_per_part;
};

Dataset load(const RunConfig& cfg) {
    if (!(cfg.closure > 0.0)) throw InputError("--closure must be positive");
    CsvOptions opts;
    if (!cfg.label_col.empty()) opts.label_column = cfg.label_col;
    if (!cfg.group_col.empty()) opts.group_column = cfg.group_col;
    opts.detect_group = !cfg.no_group;
    const auto raw = read_composition_csv(cfg.input, opts);
    auto zr = replace_zeros(raw);
    return {close(zr.matrix, cfg.closure), zr.replaced_total(), zr.replaced_per_part};
}

PartWeights weights_for(const RunConfig& cfg, const CompositionMatrix& m, bool original_parts) {
    if (cfg.weights == "uniform") return PartWeights::uniform(m.parts());
    if (cfg.weights == "proportional") return PartWeights::proportional(m);
    if (!original_parts) throw InputError("a weights file only applies to the original parts (use --target parts)");
    return parse_weights(read_text_file(cfg.weights), m.part_names());
}

AmalgamationHierarchy load_hierarchy(const std::string& path, const CompositionMatrix& m) {
    Json doc;
    try {
        doc = Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw InputError("hierarchy file '" + path + "' is not valid JSON: " + e.what());
    }
    return hierarchy_from_json(doc, m.part_names());
}

class Writer {
public:
    Writer(const RunConfig& cfg, std::ostream& out) : dir_(cfg.out_dir), out_(out) {
        fs::create_directories(dir_);
        std::string line = "coda_cli";
        for (const auto& a : cfg.command) line += " " + a;
        write("run.log", line + "\n");
    }

    void write(const std::string& name, const std::string& text) {
        const fs::path path = dir_ / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw InputError("cannot write '" + path.string() + "'");
        f << text;
        if (name != "run.log") out_ << "wrote " << path.string() << "\n";
    }

private:
    fs::path dir_;
    std::ostream& out_;
};

int cmd_variance(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto ds = load(cfg);
    const auto& m = ds.data;
    const auto w = weights_for(cfg, m, true);
    const auto clr = total_logratio_variance(m, w, VarianceMethod::Clr);
    const auto pairs = total_logratio_variance(m, w, VarianceMethod::Pairs);

    out << "samples " << m.samples() << ", parts " << m.parts() << ", pairs " << pairs.per_pair->size() << "\n";
    out << "replaced zeros " << ds.replaced << "\n";
    out << "TotLogVar (clr)   " << format_double(clr.total) << "\n";
    out << "TotLogVar (pairs) " << format_double(pairs.total) << "\n";
    if (!(clr.total > 0.0)) err << "warning: total logratio variance is zero; the compositions are constant\n";

    Json doc = Json::object();
    doc["samples"] = m.samples();
    doc["parts"] = m.parts();
    doc["replaced_cells"] = ds.replaced;
    Json per_part = Json::object();
    for (std::size_t j = 0; j < m.parts(); ++j) per_part[m.part_names()[j]] = ds.replaced_per_part[j];
    doc["replaced_per_part"] = per_part;
    doc["clr"] = variance_report_to_json(clr, m.part_names());
    doc["pairs"] = variance_report_to_json(pairs, m.part_names());
    Writer files(cfg, out);
    files.write("variance.json", doc.dump(2) + "\n");
    return kExitOk;
}

void print_trace(const SelectionTrace& trace, std::ostream& out) {
    std::size_t width = 6;
    for (const auto& s : trace.steps) width = std::max(width, s.chosen_name.size() + 2);
    out << pad("step", 6) << pad("chosen", width) << pad("+%", 8) << pad("cum%", 8) << "ties\n";
    out << pad("base", 6) << pad("", width) << pad("", 8) << pad(pct(trace.base_pct), 8) << "\n";
    for (const auto& s : trace.steps) {
        out << pad(std::to_string(s.step), 6) << pad(s.chosen_name, width) << pad(pct(s.additional_pct), 8)
            << pad(pct(s.cumulative_pct), 8) << s.tie_set.size() << (s.manual ? "  manual" : "") << "\n";
    }
    out << "final " << pct(trace.final_pct()) << "% (" << to_string(trace.stop) << ")\n";
}

int cmd_select(const RunConfig& cfg, const SelectConfig& sel, std::ostream& out, std::ostream& err) {
    if (sel.hierarchy.empty() && sel.candidates.empty()) throw InputError("select needs --hierarchy or --candidates");
    const auto ds = load(cfg);
    const auto& m = ds.data;
    const ResponseModel model(m, weights_for(cfg, m, true));

    SelectionTrace trace;
    std::optional<AmalgamationHierarchy> h;
    if (!sel.hierarchy.empty()) {
        h = load_hierarchy(sel.hierarchy, m);
        for (const auto& w : h->validate(m.parts())) err << "warning: " << w << "\n";
        trace = hierarchy_trace(model, *h);
    }
    if (!sel.candidates.empty()) {
        const auto candidates = parse_logratio_list(read_text_file(sel.candidates), m.part_names());
        if (candidates.empty()) throw InputError("candidate file '" + sel.candidates + "' lists no logratios");
        const auto seed = h ? h->committed_specs(m.parts()) : std::vector<LogratioSpec>{};
        StepwiseOptions opts;
        opts.steps = sel.steps ? sel.steps : candidates.size();
        opts.floor_pct = sel.floor;
        auto more = stepwise_select(model, candidates, opts, seed);
        if (h) {
            // continue numbering after the hierarchy's steps
            const std::size_t offset = trace.steps.size();
            for (auto& s : more.steps) s.step += offset;
            more.base_pct = trace.base_pct;
            std::vector<SelectionStep> all = std::move(trace.steps);
            all.insert(all.end(), std::make_move_iterator(more.steps.begin()), std::make_move_iterator(more.steps.end()));
            more.steps = std::move(all);
        }
        trace = std::move(more);
    }

    print_trace(trace, out);
    Writer files(cfg, out);
    files.write("trace.csv", trace_to_csv(trace));
    Json doc = trace_to_json(trace);
    if (h) doc["slr_table"] = slr_table_to_json(slr_table(*h));
    files.write("trace.json", doc.dump(2) + "\n");
    return kExitOk;
}

int cmd_ordinate(const RunConfig& cfg, const OrdinateConfig& ord, std::ostream& out, std::ostream&) {
    const auto ds = load(cfg);
    const auto& m = ds.data;
    std::optional<AmalgamationHierarchy> h;
    if (!ord.hierarchy.empty()) h = load_hierarchy(ord.hierarchy, m);
    if (ord.target != "parts" && !h) throw InputError("--target " + ord.target + " needs --hierarchy");
    const CompositionMatrix view = h ? amalgamation_view(m, *h, ord.target) : m;
    const auto scaling = ord.column_principal ? BiplotScaling::ColumnPrincipal : BiplotScaling::RowPrincipal;

    if (ord.mode == "ternary") {
        const auto coords = ternary_coords(view);
        out << "ternary of " << view.part_names()[0] << ", " << view.part_names()[1] << ", " << view.part_names()[2]
            << " (" << view.samples() << " points)\n";
        Writer files(cfg, out);
        files.write("coordinates.csv", ternary_to_csv(coords, view));
        files.write("ordination.json", ternary_to_json(coords, view).dump(2) + "\n");
        return kExitOk;
    }

    OrdinationResult result;
    if (ord.mode == "lra") {
        result = lra(view, weights_for(cfg, view, ord.target == "parts"), scaling);
    } else if (ord.mode == "pca-slr") {
        std::vector<LogratioSpec> specs;
        if (!ord.candidates.empty()) {
            specs = parse_logratio_list(read_text_file(ord.candidates), m.part_names());
        } else if (h) {
            specs = h->committed_specs(m.parts());
        } else {
            throw InputError("pca-slr needs --hierarchy with committed SLRs or --candidates");
        }
        result = pca_of_logratios(m, specs, {ord.standardize, scaling});
    } else {
        throw InputError("unknown mode '" + ord.mode + "' (lra, pca-slr or ternary)");
    }

    double running = 0.0;
    const std::size_t shown = std::min<std::size_t>(result.dims(), 10);
    for (std::size_t d = 0; d < shown; ++d) {
        running += result.dim_percentages[d];
        out << "dim" << d + 1 << " " << pct(result.dim_percentages[d]) << "%  (cumulative " << pct(running) << "%)\n";
    }
    if (shown < result.dims()) out << "(" << result.dims() - shown << " more dimensions in the files)\n";
    if (!result.hulls.empty()) out << "group hulls " << (hulls_disjoint(result) ? "disjoint" : "overlap") << "\n";
    Writer files(cfg, out);
    files.write("coordinates.csv", coordinates_to_csv(result));
    files.write("ordination.json", ordination_to_json(result).dump(2) + "\n");
    return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--input", cfg.input, "CSV file, one row per sample")->required()->check(CLI::ExistingFile);
    sub->add_option("--label-col", cfg.label_col, "column holding sample labels");
    sub->add_option("--group-col", cfg.group_col, "column holding the group factor");
    sub->add_flag("--no-group", cfg.no_group, "do not guess a group column");
    sub->add_option("--closure", cfg.closure, "closure constant applied after zero replacement");
    sub->add_option("--weights", cfg.weights, "uniform, proportional, or a part,weight CSV file");
    sub->add_option("--out-dir", cfg.out_dir, "directory for output files");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Logratio variance, amalgamation selection and ordination", "coda_cli"};
    app.require_subcommand(1);
    RunConfig cfg;
    cfg.command = args;
    SelectConfig sel;
    OrdinateConfig ord;

    auto* variance = app.add_subcommand("variance", "total logratio variance");
    add_common(variance, cfg);

    auto* select = app.add_subcommand("select", "stepwise selection or hierarchy trace");
    add_common(select, cfg);
    select->add_option("--hierarchy", sel.hierarchy, "hierarchy JSON document");
    select->add_option("--candidates", sel.candidates, "logratio list, one per line");
    select->add_option("--steps", sel.steps, "maximum number of stepwise steps");
    select->add_option("--floor", sel.floor, "stop when the best increment is below this percentage");

    auto* ordinate = app.add_subcommand("ordinate", "ordination coordinates");
    add_common(ordinate, cfg);
    ordinate->add_option("--mode", ord.mode, "lra, pca-slr or ternary")
        ->check(CLI::IsMember({"lra", "pca-slr", "ternary"}));
    ordinate->add_option("--target", ord.target, "parts, roots, or an amalgamation whose children are shown");
    ordinate->add_option("--hierarchy", ord.hierarchy, "hierarchy JSON document");
    ordinate->add_option("--candidates", ord.candidates, "logratios for pca-slr");
    ordinate->add_flag("--standardize", ord.standardize, "standardize logratios in pca-slr");
    ordinate->add_flag("--column-principal", ord.column_principal, "variables in principal coordinates");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (variance->parsed()) return cmd_variance(cfg, out, err);
        if (select->parsed()) return cmd_select(cfg, sel, out, err);
        return cmd_ordinate(cfg, ord, out, err);
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace coda::cli
