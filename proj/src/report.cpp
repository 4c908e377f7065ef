#include "wg/report.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "wg/config.hpp"

namespace wg {

void Table::addRow(std::vector<std::string> row) {
    if (row.size() != header.size()) throw std::invalid_argument("table row width differs from header");
    rows.push_back(std::move(row));
}

namespace {

std::string quoteField(const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string q = "\"";
    for (char c : f) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void appendRecord(std::string& out, const std::vector<std::string>& rec) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
        if (i) out += ',';
        out += quoteField(rec[i]);
    }
    out += "\r\n";
}

}  // namespace

std::string csvNumber(double v) { return formatDouble(v); }

std::string toCsv(const Table& t) {
    if (t.header.empty()) throw std::invalid_argument("CSV needs a header row");
    std::string out;
    appendRecord(out, t.header);
    for (const auto& r : t.rows) appendRecord(out, r);
    return out;
}

Table parseCsv(const std::string& text) {
    std::vector<std::vector<std::string>> recs;
    std::vector<std::string> rec;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            rec.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            rec.push_back(std::move(field));
            field.clear();
            recs.push_back(std::move(rec));
            rec.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw std::invalid_argument("CSV: unterminated quote");
    if (any || !field.empty()) {
        rec.push_back(std::move(field));
        recs.push_back(std::move(rec));
    }
    if (recs.empty()) throw std::invalid_argument("CSV: missing header");
    Table t;
    t.header = recs.front();
    for (std::size_t i = 1; i < recs.size(); ++i) t.addRow(recs[i]);
    return t;
}

nlohmann::ordered_json tableToJson(const Table& t) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < r.size(); ++i) o[t.header[i]] = r[i];
        rows.push_back(std::move(o));
    }
    return rows;
}

void writeFileAtomic(const std::string& path, const std::string& content) {
    static std::atomic<unsigned> counter{0};
    const std::string tmp = path + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out.write(content.data(), std::streamsize(content.size()));
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw std::runtime_error("write failed: " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename to " + path + " failed: " + ec.message());
    }
}

std::vector<std::string> writeReport(const Report& r, const std::string& outDir, const std::string& format) {
    if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
    if (r.name.empty()) throw std::invalid_argument("report needs a name");
    std::filesystem::create_directories(outDir);
    const auto base = (std::filesystem::path(outDir) / r.name).string();
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["report"] = r.name;
    j["meta"] = r.meta;
    j["columns"] = r.table.header;
    j["failures"] = r.failures;
    j["status"] = r.failures.empty() ? "pass" : "fail";
    std::vector<std::string> written;
    if (format == "csv") {
        writeFileAtomic(base + ".csv", toCsv(r.table));
        written.push_back(base + ".csv");
    } else {
        j["rows"] = tableToJson(r.table);
    }
    writeFileAtomic(base + ".json", j.dump(2) + "\n");
    written.push_back(base + ".json");
    return written;
}

}  // namespace wg
