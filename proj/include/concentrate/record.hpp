#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace concentrate {

/// One serialized value. monostate is an absent value (empty CSV field, JSON null).
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view text);

/// Tabular experiment output plus metadata. Rows are self-describing through
/// the column header.
struct ExperimentRecord {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool passed = true;

    void add_row(std::vector<Cell> row);
};

/// 17 significant digits, '.' separator, no locale; "inf", "-inf", "nan" for
/// non-finite values.
std::string format_double(double x);

void write_csv(const ExperimentRecord &record, std::ostream &out);
void write_json(const ExperimentRecord &record, std::ostream &out);
void write_record(const ExperimentRecord &record, OutputFormat format, std::ostream &out);

} // namespace concentrate
