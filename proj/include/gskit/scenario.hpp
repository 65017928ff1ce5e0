#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gskit/common.hpp"
#include "gskit/conjugate.hpp"
#include "gskit/fourier.hpp"
#include "gskit/functions.hpp"
#include "gskit/seminorms.hpp"
#include "gskit/serialize.hpp"
#include "gskit/theorems.hpp"
#include "gskit/weights.hpp"

namespace gskit {

/// A declarative verification scenario: weight families, test functions and a
/// job list. The config is versioned JSON; see README for the schema.
struct Scenario {
    int schema_version = 1;
    std::string output_dir = "out";
    unsigned long seed = 0x5EED;
    VerifyOptions options;
    std::map<std::string, WeightFamily> families;
    std::map<std::string, HermiteGaussian> functions;

    struct Job {
        std::string id;
        std::string type;
        json params;
    };
    std::vector<Job> jobs;
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& path, const std::string& what) {
    fail("config-error", path + ": " + what);
}

inline const json& require(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) config_fail(path + "." + key, "missing field");
    return *it;
}

inline double get_num(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number()) config_fail(path + "." + key, "expected a number");
    return v.get<double>();
}

inline double get_num_or(const json& j, const char* key, double def) {
    auto it = j.find(key);
    return it == j.end() ? def : it->get<double>();
}

inline int get_int(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number_integer()) config_fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

inline std::string get_str(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string()) config_fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

inline std::vector<double> grid_from_json(const json& j, const std::string& path) {
    const std::string kind = get_str(j, "kind", path);
    if (kind == "geometric") {
        return geometric_grid(get_num(j, "lo", path), get_num(j, "hi", path),
                              static_cast<std::size_t>(get_int(j, "count", path)),
                              j.value("include_zero", true));
    }
    if (kind == "linear") {
        return linear_grid(get_num(j, "lo", path), get_num(j, "hi", path),
                           static_cast<std::size_t>(get_int(j, "count", path)));
    }
    config_fail(path + ".kind", "unknown grid kind '" + kind + "'");
}

inline std::vector<double> job_grid(const json& params, const std::string& path,
                                    const char* fallback_kind = "geometric") {
    if (params.contains("grid")) return grid_from_json(params["grid"], path + ".grid");
    if (std::string(fallback_kind) == "linear") return linear_grid(0.0, 18.0, 181);
    return geometric_grid(1e-3, 1e3, 512, true);
}

}  // namespace detail

inline HermiteGaussian function_from_json(const json& jf, const std::string& path) {
    HermiteGaussian f;
    f.n = detail::get_int(jf, "n", path);
    const json& decay = detail::require(jf, "decay", path);
    if (!decay.is_array()) detail::config_fail(path + ".decay", "expected an array");
    for (const auto& a : decay) f.decay.push_back(a.get<double>());
    const json& terms = detail::require(jf, "terms", path);
    if (!terms.is_array() || terms.empty())
        detail::config_fail(path + ".terms", "expected a nonempty array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tpath = path + ".terms[" + std::to_string(t) + "]";
        const json& jt = terms[t];
        const json& alpha = detail::require(jt, "alpha", tpath);
        MultiIndex a;
        for (const auto& v : alpha) a.push_back(v.get<int>());
        f.terms[a] += Complex(detail::get_num_or(jt, "re", 0.0), detail::get_num_or(jt, "im", 0.0));
    }
    f.label = jf.value("id", "");
    try {
        f.validate();
    } catch (const Error& e) {
        detail::config_fail(path, e.what());
    }
    return f;
}

inline WeightFamily family_from_json(const json& jf, const std::string& path) {
    const std::string kind = detail::get_str(jf, "kind", path);
    if (kind == "power") {
        return make_power_family(detail::get_num(jf, "p", path), detail::get_num(jf, "base", path),
                                 detail::get_int(jf, "m_max", path));
    }
    if (kind == "table") {
        const json& grid = detail::require(jf, "grid", path);
        const json& values = detail::require(jf, "values", path);
        std::vector<double> g;
        for (const auto& v : grid) g.push_back(v.get<double>());
        std::vector<std::vector<double>> rows;
        for (const auto& row : values) {
            rows.emplace_back();
            for (const auto& v : row) rows.back().push_back(v.get<double>());
        }
        return make_table_family(std::move(g), std::move(rows), jf.value("convex", false),
                                 jf.value("nondecreasing", true));
    }
    detail::config_fail(path + ".kind", "unknown family kind '" + kind + "'");
}

/// Parse and validate a scenario file. Reference errors and malformed fields
/// raise config-error (CLI exit code 2) with the offending path.
inline Scenario load_scenario(const std::string& file) {
    std::ifstream in(file);
    if (!in) detail::config_fail(file, "cannot open scenario file");
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        detail::config_fail(file, std::string("parse error: ") + e.what());
    }

    Scenario sc;
    sc.schema_version = detail::get_int(root, "schema_version", "$");
    if (sc.schema_version != 1) detail::config_fail("$.schema_version", "unsupported version");
    sc.output_dir = root.value("output_dir", "out");
    sc.seed = root.value("seed", 0x5EEDul);
    sc.options.seed = sc.seed;

    if (root.contains("budgets")) {
        const json& b = root["budgets"];
        sc.options.alpha_budget = b.value("alpha", 40);
        sc.options.beta_budget = b.value("beta", 40);
        sc.options.k_budget = b.value("k", 40);
        sc.options.taylor_budget = b.value("taylor", 80);
    }
    if (root.contains("sup_search")) {
        const json& s = root["sup_search"];
        sc.options.sup.half_width = s.value("half_width", 10.0);
        sc.options.sup.points_per_axis = s.value("points_per_axis", 33);
        sc.options.sup.refine_rounds = s.value("refine_rounds", 3);
        sc.options.sup.growth = s.value("growth", 1.6);
        sc.options.sup.validate();
    }

    const json& fams = detail::require(root, "families", "$");
    for (std::size_t i = 0; i < fams.size(); ++i) {
        const std::string path = "$.families[" + std::to_string(i) + "]";
        const std::string id = detail::get_str(fams[i], "id", path);
        sc.families.emplace(id, family_from_json(fams[i], path));
    }
    if (root.contains("functions")) {
        const json& fns = root["functions"];
        for (std::size_t i = 0; i < fns.size(); ++i) {
            const std::string path = "$.functions[" + std::to_string(i) + "]";
            const std::string id = detail::get_str(fns[i], "id", path);
            HermiteGaussian f = function_from_json(fns[i], path);
            f.label = id;
            sc.functions.emplace(id, std::move(f));
        }
    }

    const json& jobs = detail::require(root, "jobs", "$");
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const std::string path = "$.jobs[" + std::to_string(i) + "]";
        Scenario::Job job;
        job.type = detail::get_str(jobs[i], "type", path);
        job.id = jobs[i].value("id", job.type + "-" + std::to_string(i));
        job.params = jobs[i];
        // Validate references now so a bad config never starts running.
        if (job.params.contains("family")) {
            const std::string fid = job.params["family"].get<std::string>();
            if (!sc.families.count(fid))
                detail::config_fail(path + ".family", "unknown family '" + fid + "'");
        }
        if (job.params.contains("function")) {
            const std::string gid = job.params["function"].get<std::string>();
            if (!sc.functions.count(gid))
                detail::config_fail(path + ".function", "unknown function '" + gid + "'");
        }
        sc.jobs.push_back(std::move(job));
    }
    return sc;
}

struct JobResult {
    std::string id;
    std::string type;
    bool pass = false;
    std::string error;
    double key_constant = 0.0;
    double margin = 0.0;
    json payload;
    // Plot tables to be written under plots/<job>_<name>.csv.
    std::vector<std::pair<std::string,
                          std::pair<std::vector<std::string>, std::vector<std::vector<double>>>>>
        plots;
};

namespace detail {

inline json margin_profile_json(const MarginProfile& p) {
    json j;
    j["min_margin"] = p.min_margin;
    j["pass"] = p.pass;
    j["points"] = p.xs.size();
    return j;
}

inline Condition condition_from_string(const std::string& s, const std::string& path) {
    if (s == "i1") return Condition::i1;
    if (s == "i2") return Condition::i2;
    if (s == "i3") return Condition::i3;
    if (s == "i4") return Condition::i4;
    if (s == "i5") return Condition::i5;
    config_fail(path, "unknown condition '" + s + "'");
}

}  // namespace detail

/// Execute one job. Verification failures are reported in the result; thrown
/// toolkit errors become failed results carrying the error kind.
inline JobResult run_job(const Scenario& sc, const Scenario::Job& job, double budget_scale) {
    JobResult res;
    res.id = job.id;
    res.type = job.type;
    const std::string path = "$.jobs(" + job.id + ")";

    VerifyOptions opt = sc.options;
    opt.budget_scale = budget_scale;

    auto family = [&]() -> const WeightFamily& {
        const std::string fid = detail::get_str(job.params, "family", path);
        return sc.families.at(fid);
    };
    auto function = [&]() -> const HermiteGaussian& {
        const std::string gid = detail::get_str(job.params, "function", path);
        return sc.functions.at(gid);
    };

    try {
        if (job.type == "check_condition") {
            const auto which = detail::condition_from_string(
                detail::get_str(job.params, "which", path), path + ".which");
            const int m = detail::get_int(job.params, "m", path);
            std::vector<double> params;
            if (job.params.contains("params"))
                for (const auto& v : job.params["params"]) params.push_back(v.get<double>());
            const auto rep =
                check_condition(family(), which, m, detail::job_grid(job.params, path), params);
            res.pass = rep.pass;
            res.margin = rep.min_margin;
            if (!rep.constants.empty()) res.key_constant = rep.constants.back().second;
            res.payload = to_json(rep);
        } else if (job.type == "lemma1") {
            const int m = detail::get_int(job.params, "m", path);
            const auto prof =
                lemma1_margin(family().member(m), detail::get_num(job.params, "a", path),
                              detail::get_num(job.params, "b", path),
                              detail::job_grid(job.params, path));
            res.pass = prof.pass;
            res.margin = prof.min_margin;
            res.payload = detail::margin_profile_json(prof);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < prof.xs.size(); ++i)
                rows.push_back({prof.xs[i], prof.margins[i]});
            res.plots.push_back({"margin", {{"x", "margin"}, rows}});
        } else if (job.type == "corollary1") {
            const int m = detail::get_int(job.params, "m", path);
            const double A = corollary1_bound(family().member(m),
                                              detail::get_num(job.params, "M", path),
                                              detail::job_grid(job.params, path));
            res.pass = std::isfinite(A);
            res.key_constant = A;
            res.payload = json{{"A_M", A}};
        } else if (job.type == "remark1") {
            const int m = detail::get_int(job.params, "m", path);
            const auto rep = remark1_series(family().member(m),
                                            detail::get_num(job.params, "b", path),
                                            job.params.value("j_max", 200),
                                            job.params.value("dim", 1));
            res.pass = rep.converged;
            res.key_constant = rep.sum;
            res.payload = json{{"sum", rep.sum},
                               {"converged", rep.converged},
                               {"terms_used", rep.partial_sums.size()}};
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < rep.partial_sums.size(); ++i)
                rows.push_back({static_cast<double>(i), rep.partial_sums[i]});
            res.plots.push_back({"partial_sums", {{"j", "sum"}, rows}});
        } else if (job.type == "lemma2" || job.type == "ineq16") {
            Lemma2Result lr;
            double tau;
            if (job.type == "ineq16") {
                const int k = detail::get_int(job.params, "k", path);
                const double h = job.params.value("h", 2.0);
                auto grid = job.params.contains("grid")
                                ? detail::job_grid(job.params, path)
                                : linear_grid(0.0, 10.0, 41);
                const auto r16 = ineq16_subadd(family(), k, grid, h);
                lr = r16.inner;
                tau = r16.b_k;
                res.payload["b_k"] = r16.b_k;
            } else {
                const int um = detail::get_int(job.params, "u_m", path);
                const int vm = detail::get_int(job.params, "v_m", path);
                tau = detail::get_num(job.params, "tau", path);
                auto grid = job.params.contains("grid")
                                ? detail::job_grid(job.params, path)
                                : linear_grid(0.0, 10.0, 41);
                lr = lemma2_constant(family().member(um), family().member(vm), tau,
                                     detail::get_num(job.params, "C", path), grid);
            }
            res.pass = lr.pass;
            res.margin = lr.min_margin;
            res.key_constant = lr.A;
            res.payload["A"] = lr.A;
            res.payload["tau"] = tau;
            res.payload["min_margin"] = lr.min_margin;
            std::vector<std::vector<double>> rows;
            for (const auto& t : lr.profile) rows.push_back({t[0], t[1], t[2]});
            res.plots.push_back({"margin", {{"x", "y", "margin"}, rows}});
        } else if (job.type == "lemma3") {
            const int um = detail::get_int(job.params, "u_m", path);
            const int vm = detail::get_int(job.params, "v_m", path);
            const auto prof = lemma3_gap(family().member(um), family().member(vm),
                                         detail::get_num(job.params, "sigma", path),
                                         detail::get_num(job.params, "gamma", path),
                                         detail::job_grid(job.params, path));
            res.pass = prof.pass;
            res.margin = prof.min_margin;
            res.payload = detail::margin_profile_json(prof);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < prof.xs.size(); ++i)
                rows.push_back({prof.xs[i], prof.margins[i]});
            res.plots.push_back({"margin", {{"x", "margin"}, rows}});
        } else if (job.type == "lemma5") {
            const int m = detail::get_int(job.params, "m", path);
            const auto prox = lemma5_gap_growth(family().member(m),
                                                detail::get_num(job.params, "delta", path),
                                                detail::job_grid(job.params, path));
            res.pass = prox.pass;
            res.payload = json{{"eventually_increasing", prox.eventually_increasing},
                               {"last_exceeds_mid", prox.last_exceeds_mid},
                               {"proxy", true}};
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < prox.xs.size(); ++i)
                rows.push_back({prox.xs[i], prox.ratios[i]});
            res.plots.push_back({"ratio", {{"x", "ratio"}, rows}});
        } else if (job.type == "lemma67") {
            const int m = detail::get_int(job.params, "m", path);
            auto grid = job.params.contains("grid") ? detail::job_grid(job.params, path)
                                                    : geometric_grid(0.01, 100.0, 512, false);
            const auto r = lemma67_sandwich(family().member(m), grid);
            res.pass = r.pass_upper && std::isfinite(r.K_witness);
            res.key_constant = r.K_witness;
            res.payload = json{{"K_witness", r.K_witness}, {"pass_upper", r.pass_upper}};
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < r.ts.size(); ++i)
                rows.push_back({r.ts[i], r.upper_margins[i], r.lower_margins[i]});
            res.plots.push_back({"sandwich", {{"t", "upper_margin", "lower_margin"}, rows}});
        } else if (job.type == "ineq7") {
            const int k = detail::get_int(job.params, "k", path);
            const double A = detail::get_num(job.params, "A", path);
            auto grid = job.params.contains("grid") ? detail::job_grid(job.params, path)
                                                    : linear_grid(0.0, 18.0, 181);
            const auto prof = ineq7_shift(family(), k, A, grid);
            res.pass = prof.pass;
            res.margin = prof.min_margin;
            res.payload = detail::margin_profile_json(prof);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < prof.xs.size(); ++i)
                rows.push_back({prof.xs[i], prof.margins[i]});
            res.plots.push_back({"margin", {{"x", "margin"}, rows}});
        } else if (job.type == "conjugate_curve") {
            const int m = detail::get_int(job.params, "m", path);
            auto grid = job.params.contains("grid") ? detail::job_grid(job.params, path)
                                                    : linear_grid(0.0, 64.0, 257);
            FamilyCalculus calc(family());
            std::vector<std::vector<double>> rows;
            for (double x : grid) rows.push_back({x, calc.psi_star_cont(m, x)});
            res.pass = true;
            res.payload = json{{"points", rows.size()}};
            res.plots.push_back({"psi_star", {{"x", "psi_star"}, rows}});
        } else if (job.type == "p_sweep") {
            FamilyCalculus calc(family());
            const auto& f = function();
            const int nu = detail::get_int(job.params, "nu", path);
            const int k_hi = job.params.value("k_max", 6);
            std::vector<std::vector<double>> rows;
            bool all_conv = true;
            for (int k = 0; k <= k_hi; ++k) {
                const auto v = p_norm(f, calc, nu, k, opt.sup);
                rows.push_back({static_cast<double>(k), v.value});
                all_conv = all_conv && v.converged;
            }
            res.pass = all_conv;
            res.payload = json{{"nu", nu}, {"k_max", k_hi}};
            res.plots.push_back({"p_sweep", {{"k", "p"}, rows}});
        } else if (job.type == "theorem1" || job.type == "theorem2" || job.type == "theorem3" ||
                   job.type == "theorem4" || job.type == "prop_h" || job.type == "lemma4") {
            FamilyCalculus calc(family());
            const auto& f = function();
            const int nu = detail::get_int(job.params, "nu", path);
            VerificationReport rep;
            if (job.type == "theorem1")
                rep = verify_theorem1(f, calc, detail::get_int(job.params, "m", path), nu, opt);
            else if (job.type == "theorem2")
                rep = verify_theorem2(f, calc, detail::get_int(job.params, "m", path), nu, opt);
            else if (job.type == "theorem3")
                rep = verify_theorem3(f, calc, detail::get_int(job.params, "m", path), nu, opt);
            else if (job.type == "theorem4")
                rep = verify_theorem4(f, calc, detail::get_int(job.params, "m", path), nu, opt);
            else if (job.type == "prop_h")
                rep = verify_prop_H(f, calc, detail::get_int(job.params, "k", path), nu, opt);
            else
                rep = verify_lemma4(f, calc, detail::get_int(job.params, "m", path), nu, opt);
            res.pass = rep.pass;
            res.key_constant = rep.minimal_constant;
            res.margin = rep.margin;
            res.payload = to_json(rep);
        } else {
            detail::config_fail(path + ".type", "unknown job type '" + job.type + "'");
        }
    } catch (const Error& e) {
        if (e.kind() == "config-error") throw;
        res.pass = false;
        res.error = e.what();
    }
    return res;
}

/// Run every job, write report_<job>.json, plots/*.csv, summary.csv and
/// meta.json under out_dir. Returns 0 when all jobs pass, 1 otherwise.
/// Reports are byte-stable across runs; wall-clock data goes to meta.json.
inline int run_scenario(const Scenario& sc, const std::string& out_dir, int threads,
                        double budget_scale) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/plots");

    std::vector<JobResult> results(sc.jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= sc.jobs.size()) break;
            results[i] = run_job(sc, sc.jobs[i], budget_scale);
        }
    };
    const int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Serialized writes, in job order, after the barrier.
    bool all_pass = true;
    std::ofstream summary(out_dir + "/summary.csv");
    summary << "job,type,pass,constant,margin,error\n";
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        json j;
        j["id"] = r.id;
        j["type"] = r.type;
        j["pass"] = r.pass;
        if (!r.error.empty()) j["error"] = r.error;
        j["constant"] = r.key_constant;
        j["margin"] = r.margin;
        j["detail"] = r.payload;
        std::ofstream out(out_dir + "/report_" + r.id + ".json");
        out << j.dump(2) << '\n';
        for (const auto& plot : r.plots)
            write_csv_table(plot.second.first, plot.second.second,
                            out_dir + "/plots/" + r.id + "_" + plot.first + ".csv");
        summary << r.id << ',' << r.type << ',' << (r.pass ? 1 : 0) << ','
                << detail::format_double(r.key_constant) << ',' << detail::format_double(r.margin)
                << ',' << (r.error.empty() ? "" : r.error) << '\n';
    }
    summary.close();

    const auto t1 = std::chrono::steady_clock::now();
    json meta;
    meta["elapsed_seconds"] = std::chrono::duration<double>(t1 - t0).count();
    meta["jobs"] = sc.jobs.size();
    meta["threads"] = nthreads;
    meta["budget_scale"] = budget_scale;
    meta["seed"] = sc.seed;
    std::ofstream(out_dir + "/meta.json") << meta.dump(2) << '\n';

    return all_pass ? 0 : 1;
}

}  // namespace gskit
