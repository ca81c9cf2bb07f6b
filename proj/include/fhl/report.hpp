#pragma once
//
// fhl/report.hpp
//
// Run reports: named tables of cells, named pass/fail verdicts, a config
// echo, serialized to CSV or JSON. CSV output is byte-deterministic for a
// fixed config and seed; wall time therefore lives only in the JSON form.
//

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fhl/common.hpp"
#include "fhl/errors.hpp"

namespace fhl::report {

using Cell = std::variant<double, long long, bool, std::string>;

inline Cell cell(double v) { return Cell(v); }
inline Cell cell(int v) { return Cell(static_cast<long long>(v)); }
inline Cell cell(long long v) { return Cell(v); }
inline Cell cell(std::size_t v) { return Cell(static_cast<long long>(v)); }
inline Cell cell(bool v) { return Cell(v); }
inline Cell cell(std::string v) { return Cell(std::move(v)); }
inline Cell cell(const char* v) { return Cell(std::string(v)); }

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    template <class... Ts>
    void add_row(Ts&&... values) {
        rows.push_back({cell(std::forward<Ts>(values))...});
        if (rows.back().size() != columns.size())
            throw UsageError("report table '" + name + "': row width mismatch");
    }
};

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunReport {
    std::vector<std::pair<std::string, std::string>> config; // ordered echo
    std::vector<Table> tables;
    std::vector<Verdict> verdicts;
    double wall_seconds = 0.0;
    std::string version = kVersion;

    bool all_passed() const {
        for (const Verdict& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return std::get<std::string>(c);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

} // namespace detail

inline void write_csv(const RunReport& report, std::ostream& os) {
    os << "# fhl " << report.version << "\n";
    for (const auto& [key, value] : report.config) os << "# config " << key << "=" << value << "\n";
    for (const Table& table : report.tables) {
        os << "# table " << table.name << "\n";
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            os << (i ? "," : "") << detail::csv_escape(table.columns[i]);
        os << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << detail::csv_escape(detail::format_cell(row[i]));
            os << "\n";
        }
    }
    if (!report.verdicts.empty()) {
        os << "# table verdicts\n";
        os << "name,pass,detail\n";
        for (const Verdict& v : report.verdicts)
            os << detail::csv_escape(v.name) << "," << (v.pass ? "true" : "false") << ","
               << detail::csv_escape(v.detail) << "\n";
    }
}

inline nlohmann::json to_json(const RunReport& report) {
    nlohmann::json j;
    j["version"] = report.version;
    j["wall_seconds"] = report.wall_seconds;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [key, value] : report.config) cfg[key] = value;
    j["config"] = cfg;
    j["tables"] = nlohmann::json::array();
    for (const Table& table : report.tables) {
        nlohmann::json t;
        t["name"] = table.name;
        t["columns"] = table.columns;
        t["rows"] = nlohmann::json::array();
        for (const auto& row : table.rows) {
            nlohmann::json r = nlohmann::json::array();
            for (const Cell& c : row) {
                if (const auto* d = std::get_if<double>(&c)) r.push_back(*d);
                else if (const auto* i = std::get_if<long long>(&c)) r.push_back(*i);
                else if (const auto* b = std::get_if<bool>(&c)) r.push_back(*b);
                else r.push_back(std::get<std::string>(c));
            }
            t["rows"].push_back(std::move(r));
        }
        j["tables"].push_back(std::move(t));
    }
    j["verdicts"] = nlohmann::json::array();
    for (const Verdict& v : report.verdicts)
        j["verdicts"].push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    return j;
}

enum class Format { csv, json };

inline void write_report_file(const RunReport& report, const std::string& path, Format format) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw UsageError("cannot open report file: " + path);
    if (format == Format::csv) {
        write_csv(report, os);
    } else {
        os << to_json(report).dump(2) << "\n";
    }
    if (!os.good()) throw Error("failed writing report file: " + path);
}

} // namespace fhl::report
