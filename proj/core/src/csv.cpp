#include "coda/csv.hpp"

#include "coda/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace coda {

ParseError::ParseError(std::size_t row, std::size_t column, const std::string& what)
    : InputError("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + what),
      row_(row),
      column_(column) {}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
    return value;
}

}  // namespace

std::vector<CsvRecord> split_csv(std::string_view text, char delimiter) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    std::size_t line = 1;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(field_quoted ? field : std::string(trim(field)));
        field.clear();
        field_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = current.fields.size() == 1 && current.fields.front().empty();
        if (!blank) records.push_back(std::move(current));
        current = CsvRecord{};
    };

    for (std::size_t pos = 0; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"' && trim(field).empty()) {
            field.clear();
            in_quotes = true;
            field_quoted = true;
        } else if (c == delimiter) {
            end_field();
        } else if (c == '\r') {
            // CRLF: the '\n' ends the record
        } else if (c == '\n') {
            end_record();
            ++line;
            current.line = line;
        } else {
            field += c;
        }
    }
    if (in_quotes) throw ParseError(current.line, current.fields.size() + 1, "unterminated quoted field");
    if (!field.empty() || !current.fields.empty()) end_record();
    return records;
}

std::string csv_escape(std::string_view field, char delimiter) {
    if (field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CompositionMatrix parse_composition_csv(std::string_view text, const CsvOptions& options) {
    const auto records = split_csv(text, options.delimiter);
    if (records.empty()) throw ParseError(1, 1, "empty input");
    const auto& header = records.front().fields;
    const std::size_t width = header.size();
    if (records.size() < 2) throw ParseError(records.front().line, 1, "no data rows");
    for (const auto& rec : records) {
        if (rec.fields.size() != width) {
            throw ParseError(rec.line, std::min(rec.fields.size(), width) + 1,
                             "expected " + std::to_string(width) + " fields, found " + std::to_string(rec.fields.size()));
        }
    }

    auto column_named = [&](const std::string& name) -> std::size_t {
        for (std::size_t c = 0; c < width; ++c) {
            if (header[c] == name) return c;
        }
        throw ParseError(records.front().line, 1, "no column named '" + name + "'");
    };

    std::optional<std::size_t> group_col;
    std::optional<std::size_t> label_col;
    if (options.group_column) group_col = column_named(*options.group_column);
    if (options.label_column) label_col = column_named(*options.label_column);

    // leading text columns
    const auto& first_row = records[1].fields;
    for (std::size_t c = 0; c < width && c < 2; ++c) {
        if (parse_number(first_row[c])) break;
        if (c == group_col || c == label_col) continue;
        if (header[c].empty() && !label_col) {
            label_col = c;
        } else if (options.detect_group && !group_col) {
            group_col = c;
        } else {
            break;
        }
    }

    std::vector<std::size_t> part_cols;
    std::vector<std::string> part_names;
    for (std::size_t c = 0; c < width; ++c) {
        if (c == group_col || c == label_col) continue;
        if (header[c].empty()) throw ParseError(records.front().line, c + 1, "empty part name");
        part_cols.push_back(c);
        part_names.push_back(header[c]);
    }

    const std::size_t rows = records.size() - 1;
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(part_cols.size()));
    std::vector<std::string> labels;
    std::optional<std::vector<std::string>> groups;
    if (group_col) groups.emplace();

    for (std::size_t r = 0; r < rows; ++r) {
        const auto& rec = records[r + 1];
        for (std::size_t p = 0; p < part_cols.size(); ++p) {
            const std::size_t c = part_cols[p];
            const auto v = parse_number(rec.fields[c]);
            if (!v) throw ParseError(rec.line, c + 1, "'" + rec.fields[c] + "' is not a number (part '" + header[c] + "')");
            if (*v < 0.0) throw ParseError(rec.line, c + 1, "negative value for part '" + header[c] + "'");
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(p)) = *v;
        }
        if (label_col) labels.push_back(rec.fields[*label_col]);
        if (group_col) groups->push_back(rec.fields[*group_col]);
    }
    return CompositionMatrix(std::move(values), std::move(part_names), std::move(labels), std::move(groups));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CompositionMatrix read_composition_csv(const std::filesystem::path& path, const CsvOptions& options) {
    return parse_composition_csv(read_text_file(path), options);
}

}  // namespace coda
