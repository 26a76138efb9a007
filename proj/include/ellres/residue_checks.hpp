// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Trial-based checks built on the residue routes. Each check samples configurations and
// reports the worst case against a fixed tolerance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ellres/geom.hpp"
#include "ellres/parallel.hpp"
#include "ellres/residue.hpp"

namespace ellres {

/// "Vanishes" means max|coeff| <= kVanishTol * scale.
inline constexpr double kVanishTol = 1e-7;
/// A negative control "does not vanish" when max|coeff| > kNonVanishTol * scale.
inline constexpr double kNonVanishTol = 1e-3;

struct VanishingReport {
    int r_plus = 0;
    int r_minus = 0;
    int n_root = 0;
    int k_root = 0;
    bool expect_vanish = true;
    std::vector<double> ratios; ///< max|coeff| / scale, per trial
    double max_ratio = 0.0;
    double nonvanishing_fraction = 0.0;
    bool pass = false;
};

namespace detail {

inline void finish(VanishingReport& rep) {
    rep.max_ratio = 0.0;
    std::size_t big = 0;
    for (double r : rep.ratios) {
        rep.max_ratio = std::max(rep.max_ratio, r);
        if (r > kNonVanishTol) ++big;
    }
    rep.nonvanishing_fraction = rep.ratios.empty() ? 0.0 : static_cast<double>(big) / static_cast<double>(rep.ratios.size());
    rep.pass = rep.expect_vanish ? rep.max_ratio <= kVanishTol : rep.nonvanishing_fraction >= 0.95;
}

inline double vanishing_ratio(const LocalizedSum& s) { return s.series.max_abs() / std::max(s.scale, 1e-300); }

inline void check_root(int n, int k) {
    if (n < 2) throw UsageError("root of unity order N must be >= 2");
    if (k % n == 0) throw UsageError("zeta_N^k = 1 is excluded");
}

} // namespace detail

/// C_0 at y = zeta_N^k over random genuine configurations with the given ranks.
/// expect_vanish = true requires r_+ = r_- mod N; false runs a negative control and requires the
/// rank difference to be nonzero modulo the order of y.
inline VanishingReport vanishing_check(int r_plus, int r_minus, int n, int k, int trials, std::uint64_t seed, std::size_t order,
                                       bool expect_vanish = true) {
    detail::check_root(n, k);
    if (r_plus < 0 || r_minus < 0 || r_plus + r_minus == 0) throw UsageError("need r_+, r_- >= 0 and r_+ + r_- > 0");
    if (trials < 1) throw UsageError("trials must be positive");
    const int diff = r_plus - r_minus;
    if (expect_vanish && diff % n != 0)
        throw UsageError("rank condition r_+ = r_- mod N violated; run as a negative control instead");
    if (!expect_vanish && diff % root_order(n, k) == 0)
        throw UsageError("negative control needs r_+ - r_- nonzero modulo the order of zeta_N^k");
    VanishingReport rep{r_plus, r_minus, n, k, expect_vanish, std::vector<double>(static_cast<std::size_t>(trials)), 0, 0, false};
    const cplx y = root_of_unity(n, k);
    parallel_for(rep.ratios.size(), [&](std::size_t t) {
        std::mt19937_64 rng(mix_seed(seed, t));
        const auto cfg = sample_config(rng, static_cast<std::size_t>(r_plus), static_cast<std::size_t>(r_minus));
        rep.ratios[t] = detail::vanishing_ratio(cn_direct(IntegrandSpec{0, cfg, y}, order));
    });
    detail::finish(rep);
    return rep;
}

/// Signed root counts of a virtual configuration: E_+ = A_plus - A_minus, E_- = B_plus - B_minus.
struct VirtualShape {
    int a_plus = 0, a_minus = 0, b_plus = 0, b_minus = 0;
    int rank_plus() const { return a_plus - a_minus; }
    int rank_minus() const { return b_plus - b_minus; }
    int total() const { return a_plus + a_minus + b_plus + b_minus; }
};

/// Random signed configuration; roots are resampled until the normalized config is generic.
inline ChernRootConfig sample_virtual_config(std::mt19937_64& rng, const VirtualShape& shape, cplx y, ConfigSampler opt = {}) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(opt.min_modulus, opt.max_modulus);
    auto draw = [&](int sign) { return SignedRoot{std::polar(radius(rng), angle(rng)), sign}; };
    for (int attempt = 0; attempt < 10000; ++attempt) {
        ChernRootConfig cfg;
        for (int i = 0; i < shape.a_plus; ++i) cfg.a_roots.push_back(draw(1));
        for (int i = 0; i < shape.a_minus; ++i) cfg.a_roots.push_back(draw(-1));
        for (int i = 0; i < shape.b_plus; ++i) cfg.b_roots.push_back(draw(1));
        for (int i = 0; i < shape.b_minus; ++i) cfg.b_roots.push_back(draw(-1));
        ChernRootConfig plain;
        for (const auto& r : cfg.a_roots) plain.a_roots.push_back(r.sign == 1 ? r : SignedRoot{y * r.value, 1});
        for (const auto& r : cfg.b_roots) plain.b_roots.push_back(r.sign == 1 ? r : SignedRoot{r.value / y, 1});
        try {
            plain.validate(opt.separation);
            return cfg;
        } catch (const std::invalid_argument&) {
        }
    }
    throw SamplingExhausted("sample_virtual_config: could not separate roots");
}

/// Vanishing of C_0 for virtual E_+-, through virtual_normalize. Same pass rule as vanishing_check.
inline VanishingReport virtual_vanishing_check(const VirtualShape& shape, int n, int k, int trials, std::uint64_t seed,
                                               std::size_t order) {
    detail::check_root(n, k);
    if (shape.total() == 0) throw UsageError("empty virtual configuration");
    if ((shape.rank_plus() - shape.rank_minus()) % n != 0) throw UsageError("rank condition rank E_+ = rank E_- mod N violated");
    VanishingReport rep{shape.rank_plus(), shape.rank_minus(), n, k, true, std::vector<double>(static_cast<std::size_t>(trials)),
                        0, 0, false};
    const cplx y = root_of_unity(n, k);
    parallel_for(rep.ratios.size(), [&](std::size_t t) {
        std::mt19937_64 rng(mix_seed(seed, t));
        const auto signed_cfg = sample_virtual_config(rng, shape, y);
        const auto cfg = virtual_normalize(signed_cfg, y);
        rep.ratios[t] = detail::vanishing_ratio(cn_direct(IntegrandSpec{0, cfg, y}, order));
    });
    detail::finish(rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Toric flip

/// Y_+ = tot(O(-1) (x) V_-^dual) over P(V_+), with V_+ = span(e_0..e_{r+-1}), V_- = span(rest),
/// together with its partner Y_-, which is presented on the dual representations V_-^dual, V_+^dual.
inline std::pair<std::vector<WeightVector>, std::vector<WeightVector>> flip_weights(std::size_t r_plus, std::size_t r_minus) {
    const std::size_t rank = r_plus + r_minus;
    std::vector<WeightVector> plus, minus;
    for (std::size_t i = 0; i < r_plus; ++i) plus.push_back(WeightVector::basis(rank, i));
    for (std::size_t j = 0; j < r_minus; ++j) minus.push_back(WeightVector::basis(rank, r_plus + j));
    return {plus, minus};
}

struct FlipSides {
    LocalizedSum plus;  ///< genus of Y_+ (zero if V_+ = 0)
    LocalizedSum minus; ///< genus of Y_- (zero if V_- = 0)
    QSeries difference() const { return plus.series - minus.series; }
    double scale() const { return std::max(plus.scale, minus.scale); }
};

inline FlipSides flip_genera(const ChernRootConfig& cfg, cplx y, std::size_t order) {
    const auto [plus, minus] = flip_weights(cfg.a_roots.size(), cfg.b_roots.size());
    EvalPoint pt;
    pt.y_val = y;
    for (const auto& a : cfg.a_roots) pt.t_vals.push_back(a.value);
    for (const auto& b : cfg.b_roots) pt.t_vals.push_back(b.value);
    FlipSides out{{QSeries(order), 0.0}, {QSeries(order), 0.0}};
    if (!plus.empty()) out.plus = elliptic_genus(total_space_model(plus, minus, Side::Plus), pt, order);
    if (!minus.empty()) {
        std::vector<WeightVector> dual_plus, dual_minus;
        for (const auto& w : plus) dual_plus.push_back(-w);
        for (const auto& w : minus) dual_minus.push_back(-w);
        out.minus = elliptic_genus(total_space_model(dual_plus, dual_minus, Side::Minus), pt, order);
    }
    return out;
}

/// genus(Y_+) - genus(Y_-) predicted from C_0:  kSigmaRes y^{-r_-} phi(1)^2 / theta(y) * cn_direct.
inline QSeries flip_difference_from_residue(const ChernRootConfig& cfg, cplx y, std::size_t order) {
    const QSeries c0 = cn_direct(IntegrandSpec{0, cfg, y}, order).series;
    const QSeries factor = theta_prime_at_one(order) * qs_inv(theta_series(y, order)) *
                           (static_cast<double>(kSigmaRes) * detail::ipow(y, -static_cast<int>(cfg.b_roots.size())));
    return factor * c0;
}

struct FlipTrial {
    double agreement = 0.0;  ///< relative deviation between the genus difference and the residue prediction
    double ratio = 0.0;      ///< max|genus difference| / scale
};

struct FlipReport {
    int r_plus = 0;
    int r_minus = 0;
    std::vector<FlipTrial> trials;
    double max_agreement = 0.0;
    double max_ratio = 0.0;
    double min_ratio = 0.0;
};

/// Genus difference across the flip for random configurations at a fixed y.
inline FlipReport flip_check(int r_plus, int r_minus, cplx y, int trials, std::uint64_t seed, std::size_t order) {
    if (r_plus < 0 || r_minus < 0 || r_plus + r_minus == 0) throw UsageError("need r_+, r_- >= 0 and r_+ + r_- > 0");
    if (std::abs(y - 1.0) < 1e-12) throw UsageError("flip_check: y = 1 makes the residue relation trivial");
    FlipReport rep{r_plus, r_minus, std::vector<FlipTrial>(static_cast<std::size_t>(trials)), 0, 0, 0};
    parallel_for(rep.trials.size(), [&](std::size_t t) {
        std::mt19937_64 rng(mix_seed(seed, t));
        const auto cfg = sample_config(rng, static_cast<std::size_t>(r_plus), static_cast<std::size_t>(r_minus));
        const auto sides = flip_genera(cfg, y, order);
        const QSeries diff = sides.difference();
        const QSeries predicted = flip_difference_from_residue(cfg, y, order);
        rep.trials[t].agreement = relative_deviation(diff, predicted, 1e-4 * sides.scale());
        rep.trials[t].ratio = diff.max_abs() / std::max(sides.scale(), 1e-300);
    });
    rep.min_ratio = rep.trials.empty() ? 0.0 : rep.trials.front().ratio;
    for (const auto& t : rep.trials) {
        rep.max_agreement = std::max(rep.max_agreement, t.agreement);
        rep.max_ratio = std::max(rep.max_ratio, t.ratio);
        rep.min_ratio = std::min(rep.min_ratio, t.ratio);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Holomorphy across the non-shifted pole loci

struct HolomorphyReport {
    std::vector<double> eps;
    std::vector<double> value_size; ///< max|coeff| of C_n along the path
    std::vector<double> term_size;  ///< largest single localization term along the path
    double value_slope = 0.0;       ///< least-squares exponent p in value_size ~ eps^{-p}
    double term_slope = 0.0;
    bool bounded = false;           ///< value_slope < 0.1
    bool terms_blow_up = false;     ///< term_slope > 0.9
};

namespace detail {

inline double growth_exponent(const std::vector<double>& eps, const std::vector<double>& size) {
    const std::size_t n = eps.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -std::log(eps[i]);
        const double y = std::log(std::max(size[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

} // namespace detail

/// Moves root `moving` toward root `target` (a-roots first, then b-roots) as
/// c_moving = c_target (1 + eps e^{i phase}) and evaluates C_n by localization on P(V).
inline HolomorphyReport holomorphy_probe(const IntegrandSpec& base, std::size_t moving, std::size_t target, std::size_t order,
                                         double phase = 0.4, std::vector<double> eps = {}) {
    if (eps.empty())
        for (int i = 0; i <= 6; ++i) eps.push_back(std::pow(10.0, -2.0 - 0.5 * i));
    const std::size_t na = base.cfg.a_roots.size();
    if (moving == target || moving >= base.cfg.size() || target >= base.cfg.size())
        throw UsageError("holomorphy_probe: bad root indices");
    auto root = [&](ChernRootConfig& c, std::size_t i) -> SignedRoot& { return i < na ? c.a_roots[i] : c.b_roots[i - na]; };
    HolomorphyReport rep;
    rep.eps = eps;
    for (double e : eps) {
        ChernRootConfig cfg = base.cfg;
        root(cfg, moving).value = root(cfg, target).value * (1.0 + std::polar(e, phase));
        const auto v = euler_char_PV(base.n, cfg, base.y, order);
        rep.value_size.push_back(v.series.max_abs());
        rep.term_size.push_back(v.scale);
    }
    rep.value_slope = detail::growth_exponent(rep.eps, rep.value_size);
    rep.term_slope = detail::growth_exponent(rep.eps, rep.term_size);
    rep.bounded = rep.value_slope < 0.1;
    rep.terms_blow_up = rep.term_slope > 0.9;
    return rep;
}

// ---------------------------------------------------------------------------
// q-periodicity

/// I(q0 s) / I(s) with every theta summed at the numeric nome q0.
inline cplx integrand_shift_ratio(const IntegrandSpec& spec, cplx s, cplx q0, std::size_t order) {
    return integrand_value(spec, q0 * s, q0, order) / integrand_value(spec, s, q0, order);
}

/// y^{rank E_- - rank E_+} q0^n, the factor picked up by the integrand under s -> q0 s.
inline cplx expected_shift_factor(const IntegrandSpec& spec, cplx q0) {
    const auto [rp, rm] = spec.cfg.ranks();
    return detail::ipow(spec.y, rm - rp) * detail::ipow(q0, spec.n);
}

} // namespace ellres
