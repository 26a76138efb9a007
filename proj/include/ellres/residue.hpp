// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The K-theoretic residue in the S-variable and the contour integral
//
//   C_n(a; y) = res  s^n prod_i theta(y s a_i)/theta(s a_i) prod_j theta(s b_j / y)/theta(s b_j)
//
// computed three ways: closed-form simple-pole sums (cn_direct), annulus quadrature
// (quadrature_residue) and localization on P(V) (geom.hpp: euler_char_PV).
//
// Every q-coefficient of the integrand is a rational function of s whose only poles off
// {0, infinity} sit at s = 1/a_i, 1/b_j. res is the sum of residues of f ds/s at exactly those
// poles times kSigmaRes, which is what the annulus difference "outer circle minus inner circle"
// computes, so Laurent polynomials in s are killed and 1/(1 - sL) goes to 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellres/geom.hpp"
#include "ellres/qseries.hpp"
#include "ellres/theta.hpp"
#include "ellres/weights.hpp"

namespace ellres {

/// Global sign making res(1/(1 - sL)) = 1 when res is the residue sum at the weight poles.
inline constexpr int kSigmaRes = -1;

/// cn_direct = kSigmaJK * euler_char_PV. Measured on (r_+, r_-) = (1, 0), n = 0; see measure_sigma_jk().
inline constexpr int kSigmaJK = -1;

struct IntegrandSpec {
    int n = 0;
    ChernRootConfig cfg;
    cplx y{1.0};
};

class NearPole : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class NoValidAnnulus : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Usage error (bad parameters), as opposed to a failed identity.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// Argument of the denominator theta for a root, i.e. the factor vanishing at the pole.
inline cplx pole_argument_scale(const SignedRoot& r, bool is_a, cplx y) {
    if (r.sign == 1) return r.value;
    return is_a ? y * r.value : r.value / y;
}

} // namespace detail

/// Locations in s of the weight poles of the integrand.
inline std::vector<cplx> integrand_poles(const IntegrandSpec& spec) {
    std::vector<cplx> poles;
    for (const auto& a : spec.cfg.a_roots) poles.push_back(1.0 / detail::pole_argument_scale(a, true, spec.y));
    for (const auto& b : spec.cfg.b_roots) poles.push_back(1.0 / detail::pole_argument_scale(b, false, spec.y));
    return poles;
}

/// s^n times the signed theta ratios, as a q-series at fixed numeric s.
inline QSeries integrand_at(const IntegrandSpec& spec, cplx s, std::size_t order, double separation = 1e-3) {
    for (const cplx p : integrand_poles(spec))
        if (std::abs(s / p - 1.0) < separation) throw NearPole("integrand_at: s is within the separation of a pole");
    QSeries num = QSeries::constant(detail::ipow(s, spec.n), order);
    QSeries den = QSeries::one(order);
    auto factor = [&](const SignedRoot& r, cplx yy) {
        QSeries top = theta_series(yy * s * r.value, order);
        QSeries bottom = theta_series(s * r.value, order);
        if (r.sign == 1) {
            num = num * top;
            den = den * bottom;
        } else {
            num = num * bottom;
            den = den * top;
        }
    };
    for (const auto& a : spec.cfg.a_roots) factor(a, spec.y);
    for (const auto& b : spec.cfg.b_roots) factor(b, 1.0 / spec.y);
    return num * qs_inv(den);
}

/// The integrand at numeric s and numeric nome q0, each theta summed before dividing.
inline cplx integrand_value(const IntegrandSpec& spec, cplx s, cplx q0, std::size_t order) {
    cplx v = detail::ipow(s, spec.n);
    auto factor = [&](const SignedRoot& r, cplx yy) {
        const cplx ratio = theta_value(yy * s * r.value, q0, order) / theta_value(s * r.value, q0, order);
        v *= r.sign == 1 ? ratio : 1.0 / ratio;
    };
    for (const auto& a : spec.cfg.a_roots) factor(a, spec.y);
    for (const auto& b : spec.cfg.b_roots) factor(b, 1.0 / spec.y);
    return v;
}

/// (1/2 pi i) [ oint_{|s| = rho_out} - oint_{|s| = rho_in} ] f ds/s by the trapezoid rule, coefficientwise.
/// No sign convention is applied.
inline QSeries annulus_residue(const std::function<QSeries(cplx)>& f, double rho_in, double rho_out, std::size_t n_points,
                               std::size_t order) {
    if (!(rho_in > 0.0 && rho_out > rho_in)) throw NoValidAnnulus("annulus_residue: need 0 < rho_in < rho_out");
    if (n_points < 16) throw std::invalid_argument("annulus_residue: need at least 16 nodes");
    QSeries outer(order), inner(order);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        // Nodes at half-integer multiples of the step.
        const cplx u = std::polar(1.0, step * (static_cast<double>(k) + 0.5));
        outer += f(rho_out * u);
        inner += f(rho_in * u);
    }
    return (outer - inner) * cplx{1.0 / static_cast<double>(n_points)};
}

struct QuadratureOptions {
    std::size_t n_points = 512;
    double margin = 0.1;        ///< radii sit this relative distance outside the extreme pole moduli
    double max_radius_ratio = 16.0;
};

/// Residue sum of the integrand at its weight poles, via annulus quadrature. No kSigmaRes applied.
inline QSeries quadrature_residue(const IntegrandSpec& spec, std::size_t order, QuadratureOptions opt = {}) {
    const auto poles = integrand_poles(spec);
    if (poles.empty()) return QSeries(order);
    double lo = std::abs(poles.front()), hi = lo;
    for (const cplx p : poles) {
        lo = std::min(lo, std::abs(p));
        hi = std::max(hi, std::abs(p));
    }
    const double rho_in = lo / (1.0 + opt.margin);
    const double rho_out = hi * (1.0 + opt.margin);
    if (rho_out / rho_in > opt.max_radius_ratio)
        throw NoValidAnnulus("quadrature_residue: pole moduli span [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "]; rescale the configuration");
    return annulus_residue([&](cplx s) { return integrand_at(spec, s, order, 0.0); }, rho_in, rho_out, opt.n_points, order);
}

/// Closed-form C_n: kSigmaRes times the sum of simple-pole residues. scale is the largest single pole term.
inline LocalizedSum cn_direct(const IntegrandSpec& spec, std::size_t order) {
    const auto& cfg = spec.cfg;
    if (!cfg.all_positive()) throw std::invalid_argument("cn_direct: normalize virtual roots first (virtual_normalize)");
    const QSeries inv_dtheta = qs_inv(theta_prime_at_one(order));
    const QSeries limit_a = theta_series(spec.y, order) * inv_dtheta;
    const QSeries limit_b = theta_series(1.0 / spec.y, order) * inv_dtheta;

    LocalizedSum out{QSeries(order), 0.0};
    auto pole_term = [&](cplx s0, const QSeries& limit, bool skip_a, std::size_t skip) {
        QSeries num = limit * detail::ipow(s0, spec.n);
        QSeries den = QSeries::one(order);
        for (std::size_t i = 0; i < cfg.a_roots.size(); ++i) {
            if (skip_a && i == skip) continue;
            num = num * theta_series(spec.y * s0 * cfg.a_roots[i].value, order);
            den = den * theta_series(s0 * cfg.a_roots[i].value, order);
        }
        for (std::size_t j = 0; j < cfg.b_roots.size(); ++j) {
            if (!skip_a && j == skip) continue;
            num = num * theta_series(s0 * cfg.b_roots[j].value / spec.y, order);
            den = den * theta_series(s0 * cfg.b_roots[j].value, order);
        }
        QSeries term = num * qs_inv(den) * cplx{static_cast<double>(kSigmaRes)};
        out.scale = std::max(out.scale, term.max_abs());
        out.series += term;
    };
    for (std::size_t i = 0; i < cfg.a_roots.size(); ++i) pole_term(1.0 / cfg.a_roots[i].value, limit_a, true, i);
    for (std::size_t j = 0; j < cfg.b_roots.size(); ++j) pole_term(1.0 / cfg.b_roots[j].value, limit_b, false, j);
    return out;
}

/// Rewrites subtracted roots as genuine ones: a' (sign -1) becomes the b-root y a', and b' (sign -1)
/// becomes the a-root b'/y. The integrand is unchanged; this is re-checked at five sample points.
inline ChernRootConfig virtual_normalize(const ChernRootConfig& cfg, cplx y, std::size_t check_order = 4) {
    ChernRootConfig out;
    for (const auto& a : cfg.a_roots) {
        if (a.sign == 1) out.a_roots.push_back(a);
        else out.b_roots.push_back({y * a.value, 1});
    }
    for (const auto& b : cfg.b_roots) {
        if (b.sign == 1) out.b_roots.push_back(b);
        else out.a_roots.push_back({b.value / y, 1});
    }
    for (const auto& r : out.a_roots)
        if (!(std::abs(r.value) > 1.0)) throw std::domain_error("virtual_normalize: rewritten a-root has modulus <= 1");
    for (const auto& r : out.b_roots)
        if (!(std::abs(r.value) > 1.0)) throw std::domain_error("virtual_normalize: rewritten b-root has modulus <= 1");

    const IntegrandSpec before{0, cfg, y};
    const IntegrandSpec after{0, out, y};
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(0.9, 1.1);
    int checked = 0;
    for (int attempt = 0; checked < 5 && attempt < 1000; ++attempt) {
        const cplx s = std::polar(radius(rng), angle(rng));
        QSeries lhs, rhs;
        try {
            lhs = integrand_at(before, s, check_order, 1e-2);
            rhs = integrand_at(after, s, check_order, 1e-2);
        } catch (const NearPole&) {
            continue;
        }
        const double denom = std::max(lhs.max_abs(), 1e-300);
        if (max_abs_diff(lhs, rhs) / denom > 1e-8) throw std::logic_error("virtual_normalize: integrand changed");
        ++checked;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sampling and comparison helpers

struct ConfigSampler {
    double min_modulus = 1.05;
    double max_modulus = 1.35;
    double separation = 1e-3;
};

/// Random genuine configuration with r_plus a-roots and r_minus b-roots.
inline ChernRootConfig sample_config(std::mt19937_64& rng, std::size_t r_plus, std::size_t r_minus, ConfigSampler opt = {}) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(opt.min_modulus, opt.max_modulus);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        ChernRootConfig cfg;
        for (std::size_t i = 0; i < r_plus; ++i) cfg.a_roots.push_back({std::polar(radius(rng), angle(rng)), 1});
        for (std::size_t j = 0; j < r_minus; ++j) cfg.b_roots.push_back({std::polar(radius(rng), angle(rng)), 1});
        try {
            cfg.validate(opt.separation);
            return cfg;
        } catch (const std::invalid_argument&) {
        }
    }
    throw SamplingExhausted("sample_config: could not separate roots");
}

/// max_k |a_k - b_k| / max(|a|, |b|, floor).
inline double relative_deviation(const QSeries& a, const QSeries& b, double floor) {
    return max_abs_diff(a, b) / std::max({a.max_abs(), b.max_abs(), floor, 1e-300});
}

/// Multiplicative order of y = exp(2 pi i k/N).
inline int root_order(int n, int k) {
    int g = std::gcd(n, ((k % n) + n) % n);
    return n / g;
}

/// Re-derives kSigmaRes from res(1/(1 - sL)) = 1 at L = 1.1 exp(0.3i).
inline int measure_sigma_res() {
    const cplx L = std::polar(1.1, 0.3);
    const QSeries r = annulus_residue([&](cplx s) { return QSeries::constant(1.0 / (1.0 - s * L), 0); },
                                      0.8 / std::abs(L), 1.2 / std::abs(L), 512, 0);
    return r[0].real() > 0 ? 1 : -1;
}

/// Re-derives kSigmaJK on the reference configuration (r_+, r_-) = (1, 0), n = 0.
inline int measure_sigma_jk(std::size_t order = 4) {
    IntegrandSpec spec{0, ChernRootConfig{{{std::polar(1.2, 0.7), 1}}, {}}, std::polar(1.0, 1.1)};
    const QSeries direct = cn_direct(spec, order).series;
    const QSeries loc = euler_char_PV(0, spec.cfg, spec.y, order).series;
    const cplx ratio = direct[0] / loc[0];
    return ratio.real() > 0 ? 1 : -1;
}

} // namespace ellres
