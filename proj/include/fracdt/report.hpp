#pragma once

#include "fracdt/config.hpp"

#include <deque>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fracdt {

/// Numeric table written as CSV with 17 significant digits.
struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
    std::vector<double> column(const std::string& name) const;
};

std::string format_double(double v);
std::string to_csv(const Table& t);

enum class Status { pass, fail, inconclusive };
std::string to_string(Status s);

struct Verdict {
    std::string name;
    Status status = Status::inconclusive;
    std::string detail;
};

struct Report {
    std::string experiment;
    /// Deque so that references returned by table() survive later insertions.
    std::deque<Table> tables;
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<Verdict> verdicts;
    Json witnesses = Json::object();
    /// Scalars regressed against the golden file.
    std::vector<std::string> golden_keys;
    double boundary_decay = 0.0;
    Json provenance = Json::object();

    Table& table(const std::string& name, std::vector<std::string> header);
    const Table& table(const std::string& name) const;
    void scalar(const std::string& name, double v, bool golden = false);
    double scalar(const std::string& name) const;
    void verdict(const std::string& name, bool ok, const std::string& detail);
    void verdict(const std::string& name, Status s, const std::string& detail);
    const Verdict* find_verdict(const std::string& name) const;

    Status overall() const;
    Json summary() const;
};

/// Writes <dir>/<table>.csv for every table and <dir>/summary.json.
void write_report(const Report& r, const std::filesystem::path& dir);

enum class GoldenMode { check, update };

/// Compares the golden scalars against `path` at 1e-9 relative. A missing
/// file, or mode == update, records the current values instead. A golden
/// recorded under a different config hash is not compared.
void apply_golden(Report& r, const std::filesystem::path& path, GoldenMode mode, double rel_tol = 1e-9);

}  // namespace fracdt
