#include "fracdt/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#ifndef FRACDT_VERSION
#define FRACDT_VERSION "unknown"
#endif

namespace fracdt {

void Table::add(std::vector<double> row) {
    if (row.size() != header.size()) throw Error("row width does not match table '" + name + "'");
    rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& col) const {
    const auto it = std::find(header.begin(), header.end(), col);
    if (it == header.end()) throw Error("table '" + name + "' has no column '" + col + "'");
    const auto idx = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
    out += '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
        out += '\n';
    }
    return out;
}

std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::inconclusive: return "inconclusive";
    }
    return "unknown";
}

Table& Report::table(const std::string& name, std::vector<std::string> header) {
    tables.push_back(Table{name, std::move(header), {}});
    return tables.back();
}

const Table& Report::table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return t;
    throw Error("report has no table '" + name + "'");
}

void Report::scalar(const std::string& name, double v, bool golden) {
    scalars.emplace_back(name, v);
    if (golden) golden_keys.push_back(name);
}

double Report::scalar(const std::string& name) const {
    for (const auto& [k, v] : scalars)
        if (k == name) return v;
    throw Error("report has no scalar '" + name + "'");
}

void Report::verdict(const std::string& name, bool ok, const std::string& detail) {
    verdict(name, ok ? Status::pass : Status::fail, detail);
}

void Report::verdict(const std::string& name, Status s, const std::string& detail) {
    verdicts.push_back({name, s, detail});
}

const Verdict* Report::find_verdict(const std::string& name) const {
    for (const auto& v : verdicts)
        if (v.name == name) return &v;
    return nullptr;
}

Status Report::overall() const {
    bool all_pass = true;
    for (const auto& v : verdicts) {
        if (v.status == Status::fail) return Status::fail;
        all_pass = all_pass && v.status == Status::pass;
    }
    return all_pass ? Status::pass : Status::inconclusive;
}

Json Report::summary() const {
    Json j;
    j["experiment"] = experiment;
    j["status"] = to_string(overall());
    Json sc = Json::object();
    for (const auto& [k, v] : scalars) sc[k] = std::isfinite(v) ? Json(v) : Json(format_double(v));
    j["scalars"] = sc;
    Json vs = Json::array();
    for (const auto& v : verdicts) vs.push_back({{"name", v.name}, {"status", to_string(v.status)}, {"detail", v.detail}});
    j["verdicts"] = vs;
    Json ts = Json::array();
    for (const auto& t : tables) ts.push_back(t.name + ".csv");
    j["tables"] = ts;
    j["witnesses"] = witnesses;
    j["boundary_decay"] = boundary_decay;
    j["provenance"] = provenance;
    j["provenance"]["code_version"] = FRACDT_VERSION;
    return j;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
}

}  // namespace

void write_report(const Report& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& t : r.tables) write_file(dir / (t.name + ".csv"), to_csv(t));
    write_file(dir / "summary.json", r.summary().dump(2) + "\n");
}

void apply_golden(Report& r, const std::filesystem::path& path, GoldenMode mode, double rel_tol) {
    if (r.golden_keys.empty()) return;
    const std::string hash = r.provenance.value("config_hash", "");
    Json current = Json::object();
    for (const auto& k : r.golden_keys) current[k] = r.scalar(k);

    auto record = [&](const std::string& why) {
        std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
        Json g{{"experiment", r.experiment}, {"config_hash", hash}, {"values", current}};
        write_file(path, g.dump(2) + "\n");
        r.verdict("golden_regression", Status::pass, why + " " + path.string());
    };

    if (mode == GoldenMode::update || !std::filesystem::exists(path)) {
        record(mode == GoldenMode::update ? "golden updated at" : "golden recorded at");
        return;
    }
    std::ifstream in(path);
    const Json g = Json::parse(in);
    if (g.value("config_hash", "") != hash) {
        r.verdict("golden_regression", Status::inconclusive,
                  "golden at " + path.string() + " was recorded under a different config; not compared");
        return;
    }
    std::string bad;
    for (const auto& k : r.golden_keys) {
        if (!g["values"].contains(k)) {
            bad += " " + k + " (missing)";
            continue;
        }
        const double want = g["values"][k].get<double>(), got = r.scalar(k);
        const double scale = std::max(std::abs(want), 1e-300);
        if (!(std::abs(got - want) <= rel_tol * scale) && !(want == 0.0 && got == 0.0))
            bad += " " + k + " (" + format_double(got) + " vs " + format_double(want) + ")";
    }
    r.verdict("golden_regression", bad.empty(), bad.empty() ? "matches " + path.string() : "drift:" + bad);
}

}  // namespace fracdt
