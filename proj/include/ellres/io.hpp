// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON file formats and the y-specification grammar used by the command line tool.
//
// Model file:
//   { "lattice_rank": 2,
//     "points": [ { "tangent_weights": [ { "y": 0, "s": 0, "t": [1, -1] }, ... ] }, ... ] }
//   "y" and "s" default to 0.
//
// Chern root configuration file:
//   { "n": 0,
//     "a_roots": [ { "re": 1.1, "im": 0.2, "sign": 1 }, { "abs": 1.2, "arg": 0.7 } ],
//     "b_roots": [ ... ] }
//   a root is given either as re/im or as abs/arg (radians); "sign" defaults to +1, "n" to 0.

#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ellres/geom.hpp"
#include "ellres/residue.hpp"
#include "ellres/weights.hpp"

namespace ellres {

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing field \"" + key + "\"");
    return *it;
}

inline int as_int(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
    return j.get<int>();
}

inline double as_double(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where + ": expected a number");
    return j.get<double>();
}

inline nlohmann::json parse_text(const std::string& text, const std::string& source) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SignedRoot parse_root(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    SignedRoot r;
    if (j.contains("re") || j.contains("im")) {
        r.value = cplx{as_double(require(j, "re", where), where + ".re"), as_double(require(j, "im", where), where + ".im")};
    } else if (j.contains("abs")) {
        r.value = std::polar(as_double(require(j, "abs", where), where + ".abs"), as_double(require(j, "arg", where), where + ".arg"));
    } else {
        throw ParseError(where + ": give either re/im or abs/arg");
    }
    if (j.contains("sign")) {
        r.sign = as_int(j["sign"], where + ".sign");
        if (r.sign != 1 && r.sign != -1) throw ParseError(where + ".sign: must be +1 or -1");
    }
    return r;
}

} // namespace detail

inline FixedPointModel parse_model(const std::string& text, const std::string& source = "<model>") {
    const auto j = detail::parse_text(text, source);
    FixedPointModel m;
    const int rank = detail::as_int(detail::require(j, "lattice_rank", source), source + ".lattice_rank");
    if (rank < 0) throw ParseError(source + ".lattice_rank: must be non-negative");
    m.lattice_rank = static_cast<std::size_t>(rank);
    const auto& pts = detail::require(j, "points", source);
    if (!pts.is_array()) throw ParseError(source + ".points: expected an array");
    for (std::size_t p = 0; p < pts.size(); ++p) {
        const std::string pw = source + ".points[" + std::to_string(p) + "]";
        const auto& ws = detail::require(pts[p], "tangent_weights", pw);
        if (!ws.is_array()) throw ParseError(pw + ".tangent_weights: expected an array");
        FixedPoint fp;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            const std::string ww = pw + ".tangent_weights[" + std::to_string(i) + "]";
            WeightVector w;
            if (ws[i].contains("y")) w.y_exp = detail::as_int(ws[i]["y"], ww + ".y");
            if (ws[i].contains("s")) w.s_exp = detail::as_int(ws[i]["s"], ww + ".s");
            const auto& t = detail::require(ws[i], "t", ww);
            if (!t.is_array()) throw ParseError(ww + ".t: expected an array");
            if (t.size() != m.lattice_rank)
                throw ParseError(ww + ".t: has " + std::to_string(t.size()) + " entries, lattice_rank is " +
                                 std::to_string(m.lattice_rank));
            for (std::size_t k = 0; k < t.size(); ++k) w.t_exps.push_back(detail::as_int(t[k], ww + ".t[" + std::to_string(k) + "]"));
            if (w.is_zero()) throw ParseError(ww + ": trivial character is not a valid tangent weight");
            fp.tangent_weights.push_back(std::move(w));
        }
        m.points.push_back(std::move(fp));
    }
    return m;
}

inline FixedPointModel load_model(const std::string& path) { return parse_model(detail::read_file(path), path); }

inline nlohmann::json model_to_json(const FixedPointModel& m) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : m.points) {
        nlohmann::json ws = nlohmann::json::array();
        for (const auto& w : p.tangent_weights) ws.push_back({{"y", w.y_exp}, {"s", w.s_exp}, {"t", w.t_exps}});
        pts.push_back({{"tangent_weights", ws}});
    }
    return {{"lattice_rank", m.lattice_rank}, {"points", pts}};
}

struct ResidueInput {
    int n = 0;
    ChernRootConfig cfg;
};

inline ResidueInput parse_config(const std::string& text, const std::string& source = "<config>") {
    const auto j = detail::parse_text(text, source);
    if (!j.is_object()) throw ParseError(source + ": expected an object");
    ResidueInput in;
    if (j.contains("n")) in.n = detail::as_int(j["n"], source + ".n");
    for (const char* key : {"a_roots", "b_roots"}) {
        if (!j.contains(key)) continue;
        const auto& arr = j[key];
        if (!arr.is_array()) throw ParseError(source + "." + key + ": expected an array");
        auto& dst = std::string(key) == "a_roots" ? in.cfg.a_roots : in.cfg.b_roots;
        for (std::size_t i = 0; i < arr.size(); ++i)
            dst.push_back(detail::parse_root(arr[i], source + "." + key + "[" + std::to_string(i) + "]"));
    }
    if (in.cfg.size() == 0) throw ParseError(source + ": configuration has no roots");
    return in;
}

inline ResidueInput load_config(const std::string& path) { return parse_config(detail::read_file(path), path); }

/// A resolved value of y with a human-readable description.
struct YSpec {
    cplx value;
    std::string label;
    int root_n = 0; ///< nonzero for zeta:N:k
    int root_k = 0;
};

/// Accepts "<re>+<im>i", "<re>", "<im>i", "zeta:N:k" and "random" (seeded).
inline YSpec parse_y(const std::string& text, std::uint64_t seed = 0) {
    static const std::regex zeta(R"(^zeta:(-?\d+):(-?\d+)$)");
    static const std::regex complex_re(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i)?\s*$)");
    static const std::regex pure_imag(R"(^\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, zeta)) {
        const int n = std::stoi(m[1]);
        const int k = std::stoi(m[2]);
        try {
            return {root_of_unity(n, k), text, n, k};
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("--y ") + text + ": " + e.what());
        }
    }
    if (text == "random") {
        std::mt19937_64 rng(seed ^ 0x79);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const cplx y = std::polar(0.8 + 0.4 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
        return {y, "random(seed=" + std::to_string(seed) + ")", 0, 0};
    }
    if (std::regex_match(text, m, pure_imag)) {
        const double mag = m[2].matched ? std::stod(m[2]) : 1.0;
        return {cplx{0.0, m[1] == "-" ? -mag : mag}, text, 0, 0};
    }
    if (std::regex_match(text, m, complex_re) && m[1].matched) {
        const double re = std::stod(m[1]);
        double im = 0.0;
        if (m[2].matched) {
            im = m[3].matched ? std::stod(m[3]) : 1.0;
            if (m[2] == "-") im = -im;
        }
        return {cplx{re, im}, text, 0, 0};
    }
    throw ParseError("--y " + text + ": expected <re>+<im>i, zeta:N:k or random");
}

} // namespace ellres
