#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gskit/common.hpp"
#include "gskit/conjugate.hpp"
#include "gskit/seminorms.hpp"
#include "gskit/theorems.hpp"
#include "gskit/weights.hpp"

namespace gskit {

using nlohmann::json;

inline json to_json(const SeminormValue& v) {
    json j;
    j["value"] = v.value;
    j["log_value"] = std::isfinite(v.log_value) ? json(v.log_value) : json("-inf");
    j["witness_x"] = v.witness_x;
    j["witness_y"] = v.witness_y;
    j["witness_alpha"] = v.witness_alpha;
    j["witness_beta"] = v.witness_beta;
    j["witness_k"] = v.witness_k;
    j["trunc_alpha"] = v.trunc_alpha;
    j["trunc_beta"] = v.trunc_beta;
    j["trunc_k"] = v.trunc_k;
    j["tail_bound"] = v.tail_bound;
    j["tail_ratio"] = v.tail_ratio;
    j["converged"] = v.converged;
    return j;
}

inline json to_json(const VerificationReport& r) {
    json j;
    j["theorem"] = r.theorem_id;
    j["function"] = r.function_id;
    j["family"] = r.family_id;
    j["indices"] = r.indices;
    j["left"] = r.left;
    j["right"] = r.right;
    j["minimal_constant"] = r.minimal_constant;
    j["margin"] = r.margin;
    j["all_converged"] = r.all_converged;
    j["pass"] = r.pass;
    if (!r.note.empty()) j["note"] = r.note;
    if (!r.extra.empty()) j["extra"] = r.extra;
    return j;
}

inline json to_json(const FamilyConditionReport& r) {
    json j;
    j["condition"] = to_string(r.condition);
    j["m"] = r.m;
    j["grid"] = {{"lo", r.grid_lo}, {"hi", r.grid_hi}, {"size", r.grid_size}};
    json consts = json::object();
    for (const auto& [name, value] : r.constants) consts[name] = value;
    j["constants"] = consts;
    j["min_margin"] = r.min_margin;
    j["pass"] = r.pass;
    j["proxy"] = r.proxy;
    return j;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Two-column CSV (x,y).
inline void write_csv(const GridFunction& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("io-error", "cannot write " + path);
    out << "x,y\n";
    for (std::size_t i = 0; i < g.xs.size(); ++i)
        out << detail::format_double(g.xs[i]) << ',' << detail::format_double(g.ys[i]) << '\n';
}

/// Three-column CSV (slope,value,argmax_x) against the source grid.
inline void write_csv(const ConjugateResult& r, const GridFunction& source,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("io-error", "cannot write " + path);
    out << "slope,value,argmax_x\n";
    for (std::size_t i = 0; i < r.slopes.size(); ++i)
        out << detail::format_double(r.slopes[i]) << ',' << detail::format_double(r.values[i])
            << ',' << detail::format_double(source.xs[r.argmax_index[i]]) << '\n';
}

/// Generic numeric table with a header row.
inline void write_csv_table(const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("io-error", "cannot write " + path);
    for (std::size_t c = 0; c < header.size(); ++c)
        out << header[c] << (c + 1 == header.size() ? '\n' : ',');
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << detail::format_double(row[c]) << (c + 1 == row.size() ? '\n' : ',');
    }
}

}  // namespace gskit
