// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Varieties with isolated torus-fixed points, given purely by the tangent weights at
// each fixed point, and the localization sums evaluated on them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ellres/qseries.hpp"
#include "ellres/theta.hpp"
#include "ellres/weights.hpp"

namespace ellres {

struct FixedPoint {
    std::vector<WeightVector> tangent_weights;
};

struct FixedPointModel {
    std::size_t lattice_rank = 0;
    std::vector<FixedPoint> points;

    /// Throws unless every weight lives in a lattice of rank lattice_rank and is a nonzero character.
    void validate() const {
        for (std::size_t p = 0; p < points.size(); ++p) {
            for (std::size_t i = 0; i < points[p].tangent_weights.size(); ++i) {
                const auto& w = points[p].tangent_weights[i];
                if (w.t_exps.size() != lattice_rank)
                    throw std::invalid_argument("fixed point " + std::to_string(p) + ", weight " + std::to_string(i) +
                                                ": expected " + std::to_string(lattice_rank) + " t-exponents");
                if (w.is_zero())
                    throw std::invalid_argument("fixed point " + std::to_string(p) + ", weight " + std::to_string(i) +
                                                ": tangent weight is the trivial character");
            }
        }
    }

    /// All tangent weights, for use as sampler separation constraints.
    std::vector<WeightVector> all_weights() const {
        std::vector<WeightVector> out;
        for (const auto& p : points) out.insert(out.end(), p.tangent_weights.begin(), p.tangent_weights.end());
        return out;
    }
};

/// A localization sum together with the largest single fixed-point term, the yardstick for "vanishing".
struct LocalizedSum {
    QSeries series;
    double scale = 0.0;
};

/// A theta denominator too close to zero at the chosen evaluation point.
class IllConditioned : public std::domain_error {
  public:
    IllConditioned(std::size_t point, std::size_t weight, cplx value)
        : std::domain_error("ill-conditioned denominator at fixed point " + std::to_string(point) + ", weight " +
                            std::to_string(weight) + " (value " + std::to_string(value.real()) + (value.imag() < 0 ? "" : "+") +
                            std::to_string(value.imag()) + "i is too close to 1)"),
          point_(point), weight_(weight) {}
    std::size_t point() const noexcept { return point_; }
    std::size_t weight() const noexcept { return weight_; }

  private:
    std::size_t point_;
    std::size_t weight_;
};

// ---------------------------------------------------------------------------
// Builders

inline FixedPointModel projective_space_model(std::size_t n) {
    FixedPointModel m;
    m.lattice_rank = n + 1;
    for (std::size_t i = 0; i <= n; ++i) {
        FixedPoint p;
        for (std::size_t j = 0; j <= n; ++j)
            if (j != i) p.tangent_weights.push_back(WeightVector::basis(n + 1, j) - WeightVector::basis(n + 1, i));
        m.points.push_back(std::move(p));
    }
    return m;
}

/// Local models at a fixed point p of an (N+1)-fold Y with weights x_1..x_{N+1}, and of the
/// exceptional locus of its blow-up at p, where p is replaced by N+1 fixed points.
inline std::pair<FixedPointModel, FixedPointModel> blowup_local_models(std::size_t n) {
    if (n < 1) throw std::invalid_argument("blowup_local_models: N must be >= 1");
    const std::size_t rank = n + 1;
    FixedPointModel before{rank, {}};
    FixedPointModel after{rank, {}};
    FixedPoint p;
    for (std::size_t i = 0; i < rank; ++i) p.tangent_weights.push_back(WeightVector::basis(rank, i));
    before.points.push_back(std::move(p));
    for (std::size_t i = 0; i < rank; ++i) {
        FixedPoint q;
        q.tangent_weights.push_back(WeightVector::basis(rank, i));
        for (std::size_t j = 0; j < rank; ++j)
            if (j != i) q.tangent_weights.push_back(WeightVector::basis(rank, j) - WeightVector::basis(rank, i));
        after.points.push_back(std::move(q));
    }
    return {std::move(before), std::move(after)};
}

inline FixedPointModel product_model(const FixedPointModel& a, const FixedPointModel& b) {
    const std::size_t rank = a.lattice_rank + b.lattice_rank;
    auto embed = [rank](const WeightVector& w, std::size_t offset) {
        WeightVector out{w.y_exp, w.s_exp, std::vector<int>(rank, 0)};
        std::copy(w.t_exps.begin(), w.t_exps.end(), out.t_exps.begin() + static_cast<std::ptrdiff_t>(offset));
        return out;
    };
    FixedPointModel m{rank, {}};
    for (const auto& p : a.points) {
        for (const auto& q : b.points) {
            FixedPoint pq;
            for (const auto& w : p.tangent_weights) pq.tangent_weights.push_back(embed(w, 0));
            for (const auto& w : q.tangent_weights) pq.tangent_weights.push_back(embed(w, a.lattice_rank));
            m.points.push_back(std::move(pq));
        }
    }
    return m;
}

enum class Side { Plus, Minus };

/// tot(O(-1) (x) V_fiber^dual) over P(V_base), with base = V_+ for Side::Plus and V_- for Side::Minus.
/// The tautological line at the k-th coordinate point carries the k-th base weight c_k, so the tangent
/// weights there are {c_m - c_k}_{m != k} on the base and {c_k - d_l}_l along the fiber.
inline FixedPointModel total_space_model(std::span<const WeightVector> plus_weights, std::span<const WeightVector> minus_weights,
                                         Side side) {
    const auto base = side == Side::Plus ? plus_weights : minus_weights;
    const auto fiber = side == Side::Plus ? minus_weights : plus_weights;
    if (base.empty()) throw std::invalid_argument("total_space_model: base representation is empty");
    FixedPointModel m;
    m.lattice_rank = base.front().t_exps.size();
    for (std::size_t k = 0; k < base.size(); ++k) {
        FixedPoint p;
        for (std::size_t j = 0; j < base.size(); ++j)
            if (j != k) p.tangent_weights.push_back(base[j] - base[k]);
        for (const auto& d : fiber) p.tangent_weights.push_back(base[k] - d);
        m.points.push_back(std::move(p));
    }
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// Localization

/// Sum over fixed points of prod_w theta(y w) / theta(w).
inline LocalizedSum elliptic_genus(const FixedPointModel& model, const EvalPoint& pt, std::size_t order) {
    LocalizedSum out{QSeries(order), 0.0};
    for (std::size_t p = 0; p < model.points.size(); ++p) {
        QSeries num = QSeries::one(order);
        QSeries den = QSeries::one(order);
        const auto& weights = model.points[p].tangent_weights;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const cplx w = eval_weight(weights[i], pt);
            const QSeries tw = theta_series(w, order);
            if (!(std::abs(tw[0]) > kInversionFloor * tw.max_abs())) throw IllConditioned(p, i, w);
            num = num * theta_series(pt.y_val * w, order);
            den = den * tw;
        }
        QSeries term = num * qs_inv(den);
        out.scale = std::max(out.scale, term.max_abs());
        out.series += term;
    }
    return out;
}

/// A localization sum at a numeric nome, with the largest single term.
struct CollapsedSum {
    cplx value{0.0};
    double scale = 0.0;
};

/// The same sum with every theta summed at a numeric nome q0 first.
inline CollapsedSum elliptic_genus_collapsed(const FixedPointModel& model, const EvalPoint& pt, cplx q0, std::size_t order) {
    CollapsedSum out;
    for (const auto& p : model.points) {
        cplx term{1.0};
        for (const auto& wv : p.tangent_weights) {
            const cplx w = eval_weight(wv, pt);
            term *= theta_value(pt.y_val * w, q0, order) / theta_value(w, q0, order);
        }
        out.scale = std::max(out.scale, std::abs(term));
        out.value += term;
    }
    return out;
}

inline cplx elliptic_genus_value(const FixedPointModel& model, const EvalPoint& pt, cplx q0, std::size_t order) {
    return elliptic_genus_collapsed(model, pt, q0, order).value;
}

/// Chern roots a_i of E_+ and b_j of E_-; sign -1 marks a root subtracted in a virtual bundle.
struct ChernRootConfig {
    std::vector<SignedRoot> a_roots;
    std::vector<SignedRoot> b_roots;

    std::size_t size() const { return a_roots.size() + b_roots.size(); }
    bool all_positive() const {
        auto pos = [](const SignedRoot& r) { return r.sign == 1; };
        return std::all_of(a_roots.begin(), a_roots.end(), pos) && std::all_of(b_roots.begin(), b_roots.end(), pos);
    }
    /// Signed ranks (rank E_+, rank E_-).
    std::pair<int, int> ranks() const {
        int rp = 0, rm = 0;
        for (const auto& r : a_roots) rp += r.sign;
        for (const auto& r : b_roots) rm += r.sign;
        return {rp, rm};
    }

    /// Every root has modulus > 1; roots are pairwise separated by `separation`.
    void validate(double separation = 1e-3) const {
        std::vector<cplx> all;
        for (const auto& r : a_roots) all.push_back(r.value);
        for (const auto& r : b_roots) all.push_back(r.value);
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (!(std::abs(all[i]) > 1.0))
                throw std::invalid_argument("Chern root " + std::to_string(i) + " has modulus <= 1 (" +
                                            std::to_string(std::abs(all[i])) + ")");
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(all[i] / all[j] - 1.0) < separation)
                    throw std::invalid_argument("Chern roots " + std::to_string(j) + " and " + std::to_string(i) +
                                                " are not separated (simple-pole genericity)");
        }
    }
};

/// Equivariant Euler characteristic over P(V), V = V_+ + V_-, of
///   O(n) (x) Theta(y O(1) V_+ + y^{-1} O(1) V_-) / Phi(O(1) V) Phi(O(-1) V^dual),
/// by localization at the coordinate points (O(-1) has weight c_k at the k-th point).
inline LocalizedSum euler_char_PV(int n, const ChernRootConfig& cfg, cplx y, std::size_t order) {
    if (!cfg.all_positive()) throw std::invalid_argument("euler_char_PV: virtual roots must be normalized first");
    if (cfg.size() == 0) throw std::invalid_argument("euler_char_PV: need r_+ + r_- > 0");
    std::vector<cplx> c;
    for (const auto& r : cfg.a_roots) c.push_back(r.value);
    for (const auto& r : cfg.b_roots) c.push_back(r.value);
    LocalizedSum out{QSeries(order), 0.0};
    for (std::size_t k = 0; k < c.size(); ++k) {
        const cplx o1 = 1.0 / c[k]; // weight of O(1) at point k
        QSeries num = QSeries::constant(detail::ipow(o1, n), order);
        for (const auto& a : cfg.a_roots) num = num * theta_series(y * o1 * a.value, order);
        for (const auto& b : cfg.b_roots) num = num * theta_series(o1 * b.value / y, order);
        QSeries den = QSeries::one(order);
        cplx euler{1.0};
        for (std::size_t m = 0; m < c.size(); ++m) {
            den = den * phi_series(o1 * c[m], order) * phi_series(c[k] / c[m], order);
            if (m != k) euler *= 1.0 - c[k] / c[m];
        }
        if (!(std::abs(euler) > 1e-14)) throw std::domain_error("euler_char_PV: coincident Chern roots");
        QSeries term = num * qs_inv(den) * (1.0 / euler);
        out.scale = std::max(out.scale, term.max_abs());
        out.series += term;
    }
    return out;
}

} // namespace ellres
