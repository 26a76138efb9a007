// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0

// ellres: command line front end over the header-only library.
//
//   ellres genus   --model FILE --y SPEC [--q-order Q] [--seed S] [--json]
//   ellres residue --config FILE --y SPEC [--n N] [--method direct|quadrature|localization]
//                  [--all-methods] [--points P] [--q-order Q] [--json]
//   ellres verify  SUITE [--seed S] [--trials T] [--tol X] [--N N] [--k K] [--rp R] [--rm R]
//                  [--dmax D] [--expect-fail] [--q-order Q] [--json] [--timing]
//
// Exit status: 0 PASS, 1 FAIL, 2 usage or parse error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellres/geom.hpp"
#include "ellres/io.hpp"
#include "ellres/residue.hpp"
#include "ellres/suites.hpp"

namespace {

using ellres::cplx;
using ellres::QSeries;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string fmt_complex(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.15g %+.15gi", z.real(), z.imag());
    return buf;
}

nlohmann::json series_json(const QSeries& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const cplx c : s.coeffs()) arr.push_back({c.real(), c.imag()});
    return arr;
}

void print_series(const QSeries& s) {
    for (std::size_t k = 0; k <= s.order(); ++k) std::printf("  q^%zu: %s\n", k, fmt_complex(s[k]).c_str());
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

struct GenusArgs {
    std::string model;
    std::string y;
    std::size_t q_order = 8;
    std::uint64_t seed = 0;
    bool json = false;
};

int cmd_genus(const GenusArgs& a) {
    const auto model = ellres::load_model(a.model);
    const auto y = ellres::parse_y(a.y, a.seed);
    for (const auto& w : model.all_weights())
        if (w.s_exp != 0) throw ellres::ParseError(a.model + ": genus models are functions of y and t only; found an s exponent");
    const ellres::EvalPoint pt = ellres::sample_generic_point(a.seed, model.lattice_rank, model.all_weights(), y.value);
    const auto g = ellres::elliptic_genus(model, pt, a.q_order);
    if (a.json) {
        nlohmann::json t = nlohmann::json::array();
        for (const cplx v : pt.t_vals) t.push_back({v.real(), v.imag()});
        std::cout << nlohmann::json{{"command", "genus"},
                                    {"model", a.model},
                                    {"y", {{"spec", y.label}, {"value", {y.value.real(), y.value.imag()}}}},
                                    {"seed", a.seed},
                                    {"t", t},
                                    {"q_order", a.q_order},
                                    {"coefficients", series_json(g.series)},
                                    {"scale", g.scale}}
                         .dump(2)
                  << "\n";
        return kExitPass;
    }
    std::printf("genus of %s at y = %s (%s)\n", a.model.c_str(), y.label.c_str(), fmt_complex(y.value).c_str());
    for (std::size_t i = 0; i < pt.t_vals.size(); ++i) std::printf("  t_%zu = %s\n", i, fmt_complex(pt.t_vals[i]).c_str());
    print_series(g.series);
    std::printf("scale %.15g\n", g.scale);
    return kExitPass;
}

struct ResidueArgs {
    std::string config;
    std::string y;
    std::optional<int> n;
    std::string method = "direct";
    bool all_methods = false;
    std::size_t points = 512;
    std::size_t q_order = 8;
    std::uint64_t seed = 0;
    bool json = false;
};

int cmd_residue(const ResidueArgs& a) {
    auto input = ellres::load_config(a.config);
    if (a.n) input.n = *a.n;
    const auto y = ellres::parse_y(a.y, a.seed);
    try {
        input.cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ellres::ParseError(a.config + ": " + e.what());
    }
    const ellres::IntegrandSpec raw{input.n, input.cfg, y.value};
    const ellres::IntegrandSpec genuine{input.n, input.cfg.all_positive() ? input.cfg : ellres::virtual_normalize(input.cfg, y.value),
                                        y.value};

    std::vector<std::pair<std::string, QSeries>> results;
    double scale = 0.0;
    auto run = [&](const std::string& m) {
        if (m == "direct") {
            const auto d = ellres::cn_direct(genuine, a.q_order);
            scale = std::max(scale, d.scale);
            results.emplace_back(m, d.series);
        } else if (m == "quadrature") {
            results.emplace_back(m, ellres::quadrature_residue(raw, a.q_order, {a.points}) *
                                        cplx{static_cast<double>(ellres::kSigmaRes)});
        } else {
            const auto l = ellres::euler_char_PV(genuine.n, genuine.cfg, y.value, a.q_order);
            scale = std::max(scale, l.scale);
            results.emplace_back(m, l.series * cplx{static_cast<double>(ellres::kSigmaJK)});
        }
    };
    if (a.all_methods)
        for (const char* m : {"direct", "quadrature", "localization"}) run(m);
    else
        run(a.method);

    double max_dev = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            max_dev = std::max(max_dev, ellres::relative_deviation(results[i].second, results[j].second, 1e-4 * scale));

    if (a.json) {
        nlohmann::json out{{"command", "residue"},
                           {"config", a.config},
                           {"n", input.n},
                           {"y", {{"spec", y.label}, {"value", {y.value.real(), y.value.imag()}}}},
                           {"q_order", a.q_order},
                           {"constants", {{"sigma_res", ellres::kSigmaRes}, {"sigma_jk", ellres::kSigmaJK}}},
                           {"scale", scale}};
        for (const auto& [m, s] : results) out["methods"][m] = series_json(s);
        if (results.size() > 1) out["max_pairwise_deviation"] = max_dev;
        std::cout << out.dump(2) << "\n";
        return kExitPass;
    }
    std::printf("C_%d at y = %s (%s)\n", input.n, y.label.c_str(), fmt_complex(y.value).c_str());
    for (const auto& [m, s] : results) {
        std::printf("%s:\n", m.c_str());
        print_series(s);
    }
    if (scale > 0.0) std::printf("scale %.15g\n", scale);
    if (results.size() > 1) std::printf("max pairwise relative deviation %.3e\n", max_dev);
    return kExitPass;
}

struct VerifyArgs {
    std::string suite;
    ellres::SuiteParams params;
    bool json = false;
    bool timing = false;
};

int cmd_verify(const VerifyArgs& a) {
    const auto report = ellres::run_suite(a.suite, a.params);
    if (a.json) {
        std::cout << ellres::report_to_json(report, a.timing, utc_timestamp()).dump(2) << "\n";
    } else {
        std::printf("suite %s (seed %llu, trials %d)\n", report.suite.c_str(), static_cast<unsigned long long>(a.params.seed),
                    a.params.trials);
        for (const auto& c : report.cases) {
            std::printf("  %s  %s  [observed %.3e, threshold %.3e", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.max_error,
                        c.threshold);
            if (c.scale > 0.0) std::printf(", scale %.3e", c.scale);
            if (a.timing) std::printf(", %.1f ms", c.runtime_ms);
            std::printf("]\n");
        }
        std::printf("sigma_res = %d, sigma_JK = %d\n", ellres::kSigmaRes, ellres::kSigmaJK);
        std::printf("simple-pole constant: %s\n", report.diagnostics["simple_pole_constant"]["constant"].get<std::string>().c_str());
        std::printf("%s\n", report.pass() ? "PASS" : "FAIL");
    }
    return report.pass() ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elliptic genera, wall-crossing residues and their verification suites"};
    app.require_subcommand(1);

    GenusArgs genus;
    auto* g = app.add_subcommand("genus", "Elliptic genus of a fixed-point model by localization");
    g->add_option("--model", genus.model, "model JSON file")->required();
    g->add_option("--y", genus.y, "y: <re>+<im>i, zeta:N:k or random")->required();
    g->add_option("--q-order", genus.q_order, "truncation order in q")->capture_default_str();
    g->add_option("--seed", genus.seed, "seed for the evaluation point")->capture_default_str();
    g->add_flag("--json", genus.json, "structured output");

    ResidueArgs residue;
    auto* r = app.add_subcommand("residue", "Wall-crossing residue C_n of a Chern root configuration");
    r->add_option("--config", residue.config, "configuration JSON file")->required();
    r->add_option("--y", residue.y, "y: <re>+<im>i, zeta:N:k or random")->required();
    r->add_option("--n", residue.n, "twist n (overrides the file)");
    r->add_option("--method", residue.method, "route")
        ->check(CLI::IsMember({"direct", "quadrature", "localization"}))
        ->capture_default_str();
    r->add_flag("--all-methods", residue.all_methods, "run all three routes and report their deviation");
    r->add_option("--points", residue.points, "quadrature nodes per circle")->check(CLI::Range(16, 1 << 20))->capture_default_str();
    r->add_option("--q-order", residue.q_order, "truncation order in q")->capture_default_str();
    r->add_option("--seed", residue.seed, "seed for --y random")->capture_default_str();
    r->add_flag("--json", residue.json, "structured output");

    VerifyArgs verify;
    auto& vp = verify.params;
    auto* v = app.add_subcommand("verify", "Run a verification suite");
    v->add_option("suite", verify.suite, "suite name")->required()->check(CLI::IsMember(ellres::suite_names()));
    v->add_option("--seed", vp.seed)->capture_default_str();
    v->add_option("--trials", vp.trials)->check(CLI::PositiveNumber)->capture_default_str();
    v->add_option("--tol", vp.tol, "override the main tolerance");
    v->add_option("--N", vp.n_root, "root-of-unity order");
    v->add_option("--k", vp.k_root, "root-of-unity exponent");
    v->add_option("--rp", vp.r_plus, "rank of E_+");
    v->add_option("--rm", vp.r_minus, "rank of E_-");
    v->add_option("--dmax", vp.dmax, "flag dimension budget")->capture_default_str();
    v->add_option("--q-order", vp.q_order, "truncation order (0: suite default)");
    v->add_flag("--expect-fail", vp.expect_fail, "run as a negative control");
    v->add_flag("--json", verify.json, "structured report");
    v->add_flag("--timing", verify.timing, "include runtimes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*g) return cmd_genus(genus);
        if (*r) return cmd_residue(residue);
        return cmd_verify(verify);
    } catch (const ellres::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ellres::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ellres::IllConditioned& e) {
        std::cerr << "ill-conditioned: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
