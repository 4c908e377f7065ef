#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace wg {

// RFC 4180: CRLF records, mandatory header, fields quoted when they hold a comma,
// quote, CR or LF
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void addRow(std::vector<std::string> row);
};

std::string toCsv(const Table& t);
Table parseCsv(const std::string& text);
std::string csvNumber(double v);

struct Report {
    std::string name;  // file stem
    Table table;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    std::vector<std::string> failures;  // acceptance failures, machine readable ids
};

nlohmann::ordered_json tableToJson(const Table& t);

// Writes <out>/<name>.csv and <out>/<name>.json for format "csv", only the JSON
// (with rows) for "json". Every file goes through a temporary and a rename.
std::vector<std::string> writeReport(const Report& r, const std::string& outDir, const std::string& format);

void writeFileAtomic(const std::string& path, const std::string& content);

}  // namespace wg
