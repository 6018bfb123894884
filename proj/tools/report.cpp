#include "report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace triples::cli {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string(), std::nullopt, path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string(), std::nullopt, path.string());
}

}  // namespace

Table::Table(std::string name, std::vector<std::string> header)
    : name_(std::move(name)), header_(std::move(header)) {}

Table& Table::row() {
    rows_.emplace_back();
    return *this;
}

Table& Table::operator<<(double v) { return *this << format_number(v); }

Table& Table::operator<<(long v) { return *this << std::to_string(v); }

Table& Table::operator<<(const std::string& v) {
    if (rows_.empty()) rows_.emplace_back();
    rows_.back().push_back(v);
    return *this;
}

std::string Table::csv() const {
    std::string s;
    for (std::size_t i = 0; i < header_.size(); ++i) s += (i ? "," : "") + header_[i];
    s += '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
        s += '\n';
    }
    return s;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void emit_report(RunResult& result, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + out_dir + ": " + ec.message(), std::nullopt, out_dir);
    Json files = Json::array();
    for (const Table& t : result.tables) {
        if (t.rows() == 0) throw Error(ErrorKind::Io, "table '" + t.name() + "' is empty; nothing written", std::nullopt, t.name());
        const std::string file = t.name() + ".csv";
        write_file(std::filesystem::path(out_dir) / file, t.csv());
        files.push_back(file);
    }
    for (const auto& [name, doc] : result.documents) {
        const std::string file = name + ".json";
        write_file(std::filesystem::path(out_dir) / file, doc.dump(2) + "\n");
        files.push_back(file);
    }
    result.summary["files"] = files;
    write_file(std::filesystem::path(out_dir) / "summary.json", result.summary.dump(2) + "\n");
}

Json error_json(const Error& e, int exit_code) {
    Json j;
    j["error"] = to_string(e.kind());
    j["message"] = e.what();
    j["node"] = e.node() ? Json(*e.node()) : Json(nullptr);
    j["object"] = e.object().empty() ? Json(nullptr) : Json(e.object());
    j["exit_code"] = exit_code;
    return j;
}

}  // namespace triples::cli
