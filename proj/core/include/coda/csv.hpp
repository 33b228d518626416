#ifndef CODA_CSV_HPP
#define CODA_CSV_HPP

#include "coda/composition.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coda {

/**
 * @brief How a CSV file maps onto a CompositionMatrix.
 *
 * The first row is the header. Leading text columns are metadata: a column
 * named `group_column` (or, with `detect_group`, the first leading column
 * whose first data cell is not a number) becomes the group factor, and a
 * column named `label_column` (or a leading text column with an empty
 * header) supplies sample labels. Every other column must be numeric.
 */
struct CsvOptions {
    std::optional<std::string> group_column;
    std::optional<std::string> label_column;
    bool detect_group = true;
    char delimiter = ',';
};

struct CsvRecord {
    std::size_t line = 0;  // 1-based line in the source
    std::vector<std::string> fields;
};

/// Splits CSV text into records; handles double-quoted fields, CRLF and a
/// UTF-8 byte order mark. Blank lines are skipped.
std::vector<CsvRecord> split_csv(std::string_view text, char delimiter = ',');

/// Quotes a field when it contains the delimiter, a quote or a newline.
std::string csv_escape(std::string_view field, char delimiter = ',');

CompositionMatrix parse_composition_csv(std::string_view text, const CsvOptions& options = {});
CompositionMatrix read_composition_csv(const std::filesystem::path& path, const CsvOptions& options = {});

std::string read_text_file(const std::filesystem::path& path);

}  // namespace coda

#endif  // CODA_CSV_HPP
