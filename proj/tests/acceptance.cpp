// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed here.
// Exit status is nonzero when a criterion fails that is not listed in kKnownUnattainable.

#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ellres/geom.hpp"
#include "ellres/parity.hpp"
#include "ellres/residue.hpp"
#include "ellres/residue_checks.hpp"
#include "ellres/suites.hpp"
#include "ellres/theta.hpp"

using namespace ellres;

namespace {

constexpr double kThetaTol = 1e-8;
constexpr double kMonomialTol = 1e-9;
constexpr double kSimplePoleTol = 1e-8;
constexpr double kRouteTol = 1e-6;
constexpr double kVanish = 1e-7;
constexpr double kNonVanish = 1e-3;
constexpr double kControlFraction = 0.95;
constexpr double kClosedFormTol = 1e-10;
constexpr double kFlipAgreeTol = 1e-6;
constexpr double kShiftTol = 1e-8;
constexpr double kNormalizeTol = 1e-8;
constexpr double kBoundedSlope = 0.1;
constexpr double kBlowupSlope = 0.9;
constexpr std::uint64_t kSeed = 20261019;

// Criterion 6 contradicts the genus it is stated for; see README.
const std::set<int> kKnownUnattainable{6};

struct Line {
    int id;
    bool pass;
    std::string text;
};

std::vector<Line> lines;

void report(int id, bool pass, const std::string& text) {
    lines.push_back({id, pass, text});
    std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", text.c_str());
    std::fflush(stdout);
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

cplx random_unitish(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> r(lo, hi), a(0.0, 2.0 * std::numbers::pi);
    return std::polar(r(rng), a(rng));
}

cplx generic_y(std::mt19937_64& rng) { return suites::random_generic_y(rng); }

void theta_q_difference() {
    std::mt19937_64 rng(kSeed);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const cplx z = random_unitish(rng, 0.5, 2.0);
        const cplx q0 = random_unitish(rng, 0.2, 0.2);
        const cplx lhs = theta_value(q0 * z, q0, 20);
        const cplx rhs = -theta_value(z, q0, 20) / (q0 * z);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    report(1, worst <= kThetaTol, "theta(q0 z) = -(q0 z)^-1 theta(z), 100 z, |q0| = 0.2, Q = 20: max rel " + sci(worst));
}

void residue_axioms() {
    double monomial = 0.0;
    for (int k = -3; k <= 3; ++k) {
        const QSeries r = annulus_residue([k](cplx s) { return QSeries::constant(detail::ipow(s, k), 0); }, 0.7, 1.3, 512, 0);
        monomial = std::max(monomial, std::abs(r[0]));
    }
    std::mt19937_64 rng(kSeed + 2);
    double pole = 0.0;
    for (int t = 0; t < 20; ++t) {
        const cplx L = random_unitish(rng, 0.8, 1.25);
        const double m = 1.0 / std::abs(L);
        const QSeries r = annulus_residue([L](cplx s) { return QSeries::constant(1.0 / (1.0 - s * L), 0); }, m / 1.2, m * 1.2, 512, 0);
        pole = std::max(pole, std::abs(static_cast<double>(kSigmaRes) * r[0] - 1.0));
    }
    report(2, monomial <= kMonomialTol && pole <= kSimplePoleTol,
           "res s^k (k = -3..3) max " + sci(monomial) + "; sigma_res res 1/(1-sL) - 1 max " + sci(pole) + " over 20 L");
}

void route_agreement() {
    std::vector<suites::RouteDeviation> dev(50);
    parallel_for(dev.size(), [&](std::size_t t) {
        std::mt19937_64 rng(mix_seed(kSeed + 3, t));
        dev[t] = suites::compare_routes(suites::random_spec(rng, 5), 8);
    });
    double worst = 0.0;
    for (const auto& d : dev) worst = std::max(worst, d.max());
    report(3, worst <= kRouteTol, "direct / quadrature / sigma_JK localization on 50 configs, Q = 8: max pairwise rel " + sci(worst));
}

void main_vanishing() {
    double worst = 0.0, worst_control = 1.0;
    int cases = 0, controls = 0;
    for (int n = 2; n <= 6; ++n)
        for (int rp = 0; rp <= 6; ++rp)
            for (int rm = 0; rp + rm <= 6; ++rm) {
                if (rp + rm == 0) continue;
                for (int k = 1; k < n; ++k) {
                    if ((rp - rm) % n == 0) {
                        const auto r = vanishing_check(rp, rm, n, k, 20, kSeed + 4, 8, true);
                        worst = std::max(worst, r.max_ratio);
                        ++cases;
                    } else if ((rp - rm) % root_order(n, k) != 0) {
                        const auto r = vanishing_check(rp, rm, n, k, 20, kSeed + 5, 8, false);
                        std::size_t big = 0;
                        for (double v : r.ratios) big += v > kNonVanish;
                        worst_control = std::min(worst_control, static_cast<double>(big) / static_cast<double>(r.ratios.size()));
                        ++controls;
                    }
                }
            }
    report(4, worst <= kVanish && worst_control >= kControlFraction,
           std::to_string(cases) + " vanishing cases max " + sci(worst) + " scale; " + std::to_string(controls) +
               " negative controls, worst non-vanishing fraction " + std::to_string(worst_control));
}

void pn_and_blowup() {
    double pn = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const auto model = projective_space_model(static_cast<std::size_t>(n - 1));
        for (int k = 1; k < n; ++k)
            for (int t = 0; t < 5; ++t) {
                const auto pt = sample_generic_point(mix_seed(kSeed + 6, static_cast<std::uint64_t>(100 * n + 10 * k + t)),
                                                     model.lattice_rank, model.all_weights(), root_of_unity(n, k));
                const auto g = elliptic_genus(model, pt, 8);
                pn = std::max(pn, g.series.max_abs() / g.scale);
            }
    }
    double blow = 0.0;
    int control_big = 0, control_total = 0;
    std::mt19937_64 rng(kSeed + 7);
    for (int n = 2; n <= 4; ++n) {
        const auto [before, after] = blowup_local_models(static_cast<std::size_t>(n));
        for (int t = 0; t < 20; ++t) {
            for (int k = 1; k < n; ++k) {
                const auto pt = sample_generic_point(rng(), before.lattice_rank, after.all_weights(), root_of_unity(n, k));
                const auto a = elliptic_genus(before, pt, 8), b = elliptic_genus(after, pt, 8);
                blow = std::max(blow, max_abs_diff(a.series, b.series) / std::max(a.scale, b.scale));
            }
            const auto pt = sample_generic_point(rng(), before.lattice_rank, after.all_weights(), generic_y(rng), suites::kControlSampler);
            const auto a = elliptic_genus(before, pt, 0), b = elliptic_genus(after, pt, 0);
            control_big += std::abs(a.series[0] - b.series[0]) > kNonVanish * std::max(a.scale, b.scale);
            ++control_total;
        }
    }
    const double control = static_cast<double>(control_big) / control_total;
    report(5, pn <= kVanish && blow <= kVanish && control >= kControlFraction,
           "genus(P^{N-1}) at zeta_N max " + sci(pn) + "; blow-up difference at zeta_N max " + sci(blow) +
               "; generic y differs at q^0 in " + std::to_string(control_big) + "/" + std::to_string(control_total) + " trials");
}

void pn_closed_form() {
    std::mt19937_64 rng(kSeed + 8);
    double stated = 0.0, inverse_sum = 0.0;
    for (std::size_t n = 0; n <= 6; ++n) {
        const auto model = projective_space_model(n);
        for (int t = 0; t < 20; ++t) {
            const cplx y = generic_y(rng);
            const auto pt = sample_generic_point(rng(), model.lattice_rank, model.all_weights(), y);
            const cplx c0 = elliptic_genus(model, pt, 1).series[0];
            const cplx literal = (1.0 - detail::ipow(y, static_cast<int>(n) + 2)) / (1.0 - y);
            stated = std::max(stated, std::abs(c0 - literal) / std::abs(literal));
            inverse_sum = std::max(inverse_sum, std::abs(c0 - suites::pn_constant_term(n, y)) / std::abs(c0));
        }
    }
    report(6, stated <= kClosedFormTol,
           "q^0 of genus(P^n) vs (1 - y^{n+2})/(1 - y), n <= 6, 20 y: max rel " + sci(stated) +
               " [diagnostic: vs sum_{p=0}^{n} y^-p max rel " + sci(inverse_sum) + "]");
}

void flip_flop() {
    std::mt19937_64 rng(kSeed + 9);
    double flop = 0.0, agree = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto r = flip_check(2, 2, generic_y(rng), 1, mix_seed(kSeed + 9, static_cast<std::uint64_t>(t)), 8);
        flop = std::max(flop, r.max_ratio);
        agree = std::max(agree, r.max_agreement);
    }
    // Unequal dimensions with difference divisible by N: zero at zeta_N, nonzero at generic y.
    double at_root = 0.0, generic = 1e300;
    const std::vector<std::tuple<int, int, int>> unequal{{3, 1, 2}, {4, 2, 2}, {3, 0, 3}, {4, 0, 2}, {4, 1, 3}};
    for (const auto& [rp, rm, n] : unequal) {
        for (int k = 1; k < n; ++k) {
            const auto r = flip_check(rp, rm, root_of_unity(n, k), 5, kSeed + 10, 8);
            at_root = std::max(at_root, r.max_ratio);
            agree = std::max(agree, r.max_agreement);
        }
        const auto g = flip_check(rp, rm, generic_y(rng), 5, kSeed + 11, 8);
        generic = std::min(generic, g.min_ratio);
        agree = std::max(agree, g.max_agreement);
    }
    report(7, flop <= kVanish && at_root <= kVanish && generic > kNonVanish && agree <= kFlipAgreeTol,
           "flop (2,2) at 20 generic y max " + sci(flop) + "; unequal dims at zeta_N max " + sci(at_root) + ", generic y min " +
               sci(generic) + "; residue agreement max " + sci(agree));
}

void integrand_ellipticity() {
    std::mt19937_64 rng(kSeed + 12);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        IntegrandSpec spec = suites::random_spec(rng, 5);
        spec.n = 0;
        const cplx s = random_unitish(rng, 0.9, 1.1);
        const cplx q0 = random_unitish(rng, 0.2, 0.2);
        const cplx want = detail::ipow(spec.y, spec.cfg.ranks().second - spec.cfg.ranks().first);
        worst = std::max(worst, std::abs(integrand_shift_ratio(spec, s, q0, 20) / want - 1.0));
    }
    report(8, worst <= kShiftTol, "I(q0 s)/I(s) = y^{r- - r+} on 20 specs: max rel " + sci(worst));
}

void virtual_reduction() {
    const std::vector<std::pair<VirtualShape, int>> shapes{
        {{2, 1, 1, 0}, 2}, {{1, 1, 1, 1}, 3}, {{3, 1, 0, 0}, 2}, {{1, 0, 2, 1}, 2}, {{2, 0, 1, 2}, 3}, {{3, 0, 0, 1}, 4}};
    double worst = 0.0, normalize = 0.0;
    std::mt19937_64 rng(kSeed + 13);
    for (const auto& [shape, n] : shapes) {
        for (int k = 1; k < n; ++k) {
            const auto r = virtual_vanishing_check(shape, n, k, 20, kSeed + 14, 8);
            worst = std::max(worst, r.max_ratio);
            const cplx y = root_of_unity(n, k);
            const auto signed_cfg = sample_virtual_config(rng, shape, y);
            const auto genuine = virtual_normalize(signed_cfg, y);
            int checked = 0;
            while (checked < 5) {
                const cplx s = random_unitish(rng, 0.9, 1.1);
                try {
                    const QSeries a = integrand_at({0, signed_cfg, y}, s, 6, 1e-2);
                    const QSeries b = integrand_at({0, genuine, y}, s, 6, 1e-2);
                    normalize = std::max(normalize, relative_deviation(a, b, 0.0));
                    ++checked;
                } catch (const NearPole&) {
                }
            }
        }
    }
    report(9, worst <= kVanish && normalize <= kNormalizeTol,
           "signed configs after normalization: vanishing max " + sci(worst) + "; integrand change max " + sci(normalize));
}

void flag_splittings() {
    int bad = 0, total = 0;
    for (int d1 = 0; d1 <= 12; ++d1)
        for (int d2 = 0; d1 + d2 <= 12; ++d2, ++total)
            if (splitting_diff_set(d1, d2) != parity_progression(d1, d2)) ++bad;
    report(10, bad == 0, "splitting asymmetries = {-d1 d2, ..., d1 d2} step 2 for d1 + d2 <= 12: " + std::to_string(total - bad) +
                             "/" + std::to_string(total) + " exact");
}

void hrr_vw() {
    std::mt19937_64 rng(kSeed + 15);
    std::uniform_int_distribution<long> small(-1000, 1000), rank(0, 50);
    int odd = 0, nonzero = 0, vw = 0;
    for (int t = 0; t < 1000; ++t) {
        if (hrr_parity_diff(SurfaceClass::with_spin(small(rng)), SheafClass::with_spin(rank(rng), small(rng))) % 2 != 0) ++odd;
        if (hrr_parity_diff(SurfaceClass::general(0), SheafClass::general(rank(rng), 0)) != 0) ++nonzero;
        const auto s = SurfaceClass::with_spin(small(rng));
        if (vw_ext_parity(s, SheafClass::with_spin(rank(rng), small(rng)), SheafClass::with_spin(rank(rng), small(rng))) != 0) ++vw;
    }
    report(11, odd == 0 && nonzero == 0 && vw == 0,
           "1000 draws: odd spin HRR " + std::to_string(odd) + ", nonzero K = 0 " + std::to_string(nonzero) + ", odd VW parity " +
               std::to_string(vw));
}

void holomorphy() {
    std::mt19937_64 rng(kSeed + 16);
    double worst_value = -1e300, worst_term = 1e300;
    for (int path = 0; path < 5; ++path) {
        IntegrandSpec spec;
        spec.cfg = sample_config(rng, 2 + path % 2, 1 + path % 2);
        spec.n = path % 3;
        spec.y = generic_y(rng);
        const auto r = holomorphy_probe(spec, 0, 1, 6, 0.3 + 0.9 * path);
        worst_value = std::max(worst_value, r.value_slope);
        worst_term = std::min(worst_term, r.term_slope);
    }
    report(12, worst_value < kBoundedSlope && worst_term > kBlowupSlope,
           "5 paths a_1 -> a_2: C_n growth exponent max " + sci(worst_value) + ", single-term growth exponent min " + sci(worst_term));
}

} // namespace

int main() {
    const std::vector<void (*)()> criteria{theta_q_difference, residue_axioms, route_agreement, main_vanishing,
                                           pn_and_blowup,      pn_closed_form, flip_flop,       integrand_ellipticity,
                                           virtual_reduction,  flag_splittings,     hrr_vw,          holomorphy};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
        }
    }
    int unexpected = 0;
    for (const auto& l : lines) {
        if (l.pass && kKnownUnattainable.count(l.id))
            std::printf("note: criterion %d is listed as unattainable but passed\n", l.id);
        if (!l.pass && !kKnownUnattainable.count(l.id)) ++unexpected;
    }
    const int passed = static_cast<int>(std::count_if(lines.begin(), lines.end(), [](const Line& l) { return l.pass; }));
    std::printf("%d/%zu criteria pass; %d unexpected failure(s)\n", passed, lines.size(), unexpected);
    return unexpected == 0 ? 0 : 1;
}
