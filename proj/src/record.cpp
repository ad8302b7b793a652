#include "concentrate/record.hpp"

#include "concentrate/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace concentrate {

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(text) + "'");
}

void ExperimentRecord::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw Error(ErrorCode::InvalidArgument, "row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

namespace {

std::string csv_field(const Cell &cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return format_double(d); }
        std::string operator()(const std::string &s) const {
            if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
            std::string quoted = "\"";
            for (char c : s) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            return quoted + '"';
        }
    };
    return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json json_value(const Cell &cell) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(bool b) const { return b; }
        nlohmann::ordered_json operator()(std::int64_t i) const { return i; }
        nlohmann::ordered_json operator()(double d) const {
            if (!std::isfinite(d)) return format_double(d);
            return d;
        }
        nlohmann::ordered_json operator()(const std::string &s) const { return s; }
    };
    return std::visit(Visitor{}, cell);
}

} // namespace

void write_csv(const ExperimentRecord &record, std::ostream &out) {
    for (std::size_t c = 0; c < record.columns.size(); ++c) out << (c ? "," : "") << csv_field(record.columns[c]);
    out << '\n';
    for (const auto &row : record.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
        out << '\n';
    }
}

void write_json(const ExperimentRecord &record, std::ostream &out) {
    nlohmann::ordered_json doc;
    doc["meta"] = record.meta;
    auto rows   = nlohmann::ordered_json::array();
    for (const auto &row : record.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[record.columns[c]] = json_value(row[c]);
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

void write_record(const ExperimentRecord &record, OutputFormat format, std::ostream &out) {
    if (format == OutputFormat::Csv)
        write_csv(record, out);
    else
        write_json(record, out);
}

} // namespace concentrate
