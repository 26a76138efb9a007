// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellres/qseries.hpp"

namespace ellres {

/// Character y^{y_exp} s^{s_exp} prod t_i^{t_exps[i]} of the torus (y-circle) x S x T.
struct WeightVector {
    int y_exp = 0;
    int s_exp = 0;
    std::vector<int> t_exps;

    static WeightVector basis(std::size_t rank, std::size_t i) {
        WeightVector w;
        w.t_exps.assign(rank, 0);
        w.t_exps.at(i) = 1;
        return w;
    }

    bool is_zero() const {
        if (y_exp != 0 || s_exp != 0) return false;
        for (int m : t_exps) if (m != 0) return false;
        return true;
    }

    WeightVector& operator+=(const WeightVector& rhs) {
        if (rhs.t_exps.size() != t_exps.size()) throw std::invalid_argument("weight lattice rank mismatch");
        y_exp += rhs.y_exp;
        s_exp += rhs.s_exp;
        for (std::size_t i = 0; i < t_exps.size(); ++i) t_exps[i] += rhs.t_exps[i];
        return *this;
    }
    friend WeightVector operator+(WeightVector a, const WeightVector& b) { return a += b; }
    friend WeightVector operator-(WeightVector a) {
        a.y_exp = -a.y_exp;
        a.s_exp = -a.s_exp;
        for (int& m : a.t_exps) m = -m;
        return a;
    }
    friend WeightVector operator-(WeightVector a, const WeightVector& b) { return a += -b; }
    friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

/// Numeric point of the torus; s_val is absent when s is being integrated over.
struct EvalPoint {
    cplx y_val{1.0};
    std::optional<cplx> s_val;
    std::vector<cplx> t_vals;
};

class MissingCoordinate : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline cplx ipow(cplx base, int e) {
    if (e == 0) return cplx{1.0};
    cplx b = e > 0 ? base : 1.0 / base;
    unsigned n = static_cast<unsigned>(e > 0 ? e : -e);
    cplx acc{1.0};
    while (n) {
        if (n & 1u) acc *= b;
        b *= b;
        n >>= 1u;
    }
    return acc;
}

} // namespace detail

inline cplx eval_weight(const WeightVector& w, const EvalPoint& p) {
    if (w.t_exps.size() != p.t_vals.size())
        throw std::invalid_argument("eval_weight: weight has rank " + std::to_string(w.t_exps.size()) +
                                    ", point has rank " + std::to_string(p.t_vals.size()));
    cplx v = detail::ipow(p.y_val, w.y_exp);
    if (w.s_exp != 0) {
        if (!p.s_val) throw MissingCoordinate("eval_weight: weight depends on s but the point has no s coordinate");
        v *= detail::ipow(*p.s_val, w.s_exp);
    }
    for (std::size_t i = 0; i < w.t_exps.size(); ++i) v *= detail::ipow(p.t_vals[i], w.t_exps[i]);
    return v;
}

/// exp(2 pi i k / N), for N >= 2 and k not divisible by N.
inline cplx root_of_unity(int n, int k) {
    if (n < 2) throw std::invalid_argument("root_of_unity: N must be >= 2");
    if (k % n == 0) throw std::invalid_argument("root_of_unity: k = 0 mod N gives the excluded value 1");
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    // Exact on the axes.
    const int num = ((k % n) + n) % n;
    if (2 * num == n) return cplx{-1.0, 0.0};
    if (4 * num == n) return cplx{0.0, 1.0};
    if (4 * num == 3 * n) return cplx{0.0, -1.0};
    return std::polar(1.0, angle);
}

class SamplingExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SamplerOptions {
    double spread = 0.2;
    double separation = 1e-3;
    int max_attempts = 10000;
};

/// Deterministic generic point: t_i = rho_i exp(2 pi i u_i) with rho_i in [1-spread, 1+spread].
/// Every constraint weight is kept at least `separation` away from 1. When `fixed_y` is given it is used
/// for y; otherwise y is drawn from the same law as the t_i.
inline EvalPoint sample_generic_point(std::uint64_t seed, std::size_t rank, std::span<const WeightVector> constraints = {},
                                      std::optional<cplx> fixed_y = std::nullopt, SamplerOptions opt = {}) {
    if (!(opt.spread > 0.0 && opt.spread < 0.5)) throw std::invalid_argument("sample_generic_point: spread must lie in (0, 0.5)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> radius(1.0 - opt.spread, 1.0 + opt.spread);
    auto draw = [&] { return std::polar(radius(rng), 2.0 * std::numbers::pi * unit(rng)); };
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
        EvalPoint p;
        p.y_val = draw();
        if (fixed_y) p.y_val = *fixed_y;
        p.t_vals.resize(rank);
        for (auto& t : p.t_vals) t = draw();
        bool ok = true;
        for (const auto& w : constraints) {
            if (std::abs(eval_weight(w, p) - 1.0) < opt.separation) {
                ok = false;
                break;
            }
        }
        if (ok) return p;
    }
    throw SamplingExhausted("sample_generic_point: rejection budget exhausted; some constraint is identically 1?");
}

} // namespace ellres
