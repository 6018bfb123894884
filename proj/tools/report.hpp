#pragma once

// Artifact emission: long-format CSV tables and a JSON summary per run.

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "triples/error.hpp"

namespace triples::cli {

class Table {
public:
    Table(std::string name, std::vector<std::string> header);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_.size(); }

    Table& row();
    Table& operator<<(double v);
    Table& operator<<(long v);
    Table& operator<<(int v) { return *this << static_cast<long>(v); }
    Table& operator<<(const std::string& v);
    Table& operator<<(const char* v) { return *this << std::string(v); }

    std::string csv() const;

private:
    std::string name_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct RunResult {
    Json summary;
    std::vector<Table> tables;
    /// Extra JSON documents, written as <name>.json.
    std::vector<std::pair<std::string, Json>> documents;
    /// False when a check ran to completion but missed its tolerance.
    bool passed = true;
};

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

/// Writes every table as <out>/<name>.csv, the documents as <out>/<name>.json and
/// the summary as <out>/summary.json.
/// Throws Io for unwritable paths and for tables without rows.
void emit_report(RunResult& result, const std::string& out_dir);

Json error_json(const Error& e, int exit_code);

}  // namespace triples::cli
