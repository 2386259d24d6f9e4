#pragma once
// Output plumbing: locale-independent number formatting (17 significant
// digits, enough to round-trip an IEEE double), CSV emitters, JSON
// serialization of expressions, run manifests, and the binary grid dump.

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <gphase/expr.hpp>

namespace gphase::io {

using json = nlohmann::ordered_json;

// file-system level failure, distinct from numerical errors for exit codes
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
    std::array<char, 40> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), ptr);
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    return out;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream out = open_out(path);
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("CSV row width does not match header");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c]);
        out << "\n";
    }
}

// minimal reader for round-trip tests and manifest replay
inline std::vector<std::vector<double>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) { first = false; continue; } // header
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            std::string cell = line.substr(start, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - start);
            double v = 0;
            auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{}) throw std::runtime_error("bad CSV cell '" + cell + "'");
            row.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

// canonical term-list serialization of an expression
inline json expr_to_json(const PhaseExpr& e) {
    json terms = json::array();
    for (const auto& [m, c] : e.terms()) {
        json t;
        t["c"] = to_string(c);
        t["q"] = m.qe;
        t["p"] = m.pe;
        t["r"] = m.rodd;
        json params = json::object();
        for (const auto& [name, exp] : m.params) params[name] = exp;
        t["params"] = std::move(params);
        terms.push_back(std::move(t));
    }
    return json{{"qden", e.qden()}, {"terms", std::move(terms)}};
}

inline PhaseExpr expr_from_json(const json& j) {
    PhaseExpr acc;
    for (const auto& t : j.at("terms")) {
        std::string cs = t.at("c").get<std::string>();
        PhaseExpr term = PhaseExpr::rational(Rational(cs));
        const auto& qe = t.at("q");
        const auto& pe = t.at("p");
        for (int i = 0; i < 3; ++i) {
            term = term * PhaseExpr::q(i + 1).pow(qe.at(i).get<int>());
            term = term * PhaseExpr::p(i + 1).pow(pe.at(i).get<int>());
        }
        if (t.at("r").get<int>()) term = term * PhaseExpr::r_power(1);
        for (const auto& [name, exp] : t.at("params").items())
            term = term * PhaseExpr::param(name, exp.get<int>());
        acc += term;
    }
    unsigned qden = j.at("qden").get<unsigned>();
    if (qden > 0) acc = acc * PhaseExpr::r_power(-2 * static_cast<int>(qden));
    return acc;
}

// Every run writes a manifest next to its outputs: resolved configuration,
// tool version, and the command line, so a run can be reproduced exactly.
inline void write_manifest(const std::string& dir, const std::string& subcommand,
                           const json& resolved_config, const std::string& version,
                           const std::vector<std::string>& argv) {
    json m{{"tool", "gphase"},
           {"version", version},
           {"subcommand", subcommand},
           {"argv", argv},
           {"config", resolved_config}};
    write_json(dir + "/manifest.json", m);
}

// Binary grid dump, little-endian (native on every supported target):
//   magic "GPHG" | u32 version=1 | u32 n_q | u32 n_p
//   f64 q_min | f64 q_max | f64 p_min | f64 p_max
//   n_q * n_p f64 values, row-major (q index outer, p index inner)
inline void write_grid_binary(const std::string& path, std::uint32_t nq, std::uint32_t np,
                              double qmin, double qmax, double pmin, double pmax,
                              const double* rowmajor) {
    std::ofstream out = open_out(path);
    out.write("GPHG", 4);
    std::uint32_t ver = 1;
    auto put = [&out](const void* p, std::size_t n) {
        out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    };
    put(&ver, 4);
    put(&nq, 4);
    put(&np, 4);
    for (double b : {qmin, qmax, pmin, pmax}) put(&b, 8);
    put(rowmajor, sizeof(double) * nq * np);
    if (!out) throw std::runtime_error("grid dump failed for '" + path + "'");
}

struct GridFile {
    std::uint32_t nq = 0, np = 0;
    double qmin = 0, qmax = 0, pmin = 0, pmax = 0;
    std::vector<double> values;
};

inline GridFile read_grid_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (std::string(magic, 4) != "GPHG") throw std::runtime_error("bad grid magic");
    auto get = [&in](void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    };
    std::uint32_t ver = 0;
    get(&ver, 4);
    if (ver != 1) throw std::runtime_error("unsupported grid version");
    GridFile g;
    get(&g.nq, 4);
    get(&g.np, 4);
    for (double* b : {&g.qmin, &g.qmax, &g.pmin, &g.pmax}) get(b, 8);
    g.values.resize(static_cast<std::size_t>(g.nq) * g.np);
    get(g.values.data(), sizeof(double) * g.values.size());
    if (!in) throw std::runtime_error("grid payload truncated in '" + path + "'");
    return g;
}

} // namespace gphase::io
