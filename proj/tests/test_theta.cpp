// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "ellres/theta.hpp"
#include "ellres/weights.hpp"

using namespace ellres;

namespace {

// Triple product side: -z^{-1} sum_n (-1)^n q^{n(n-1)/2} z^n / prod_m (1 - q^m), summed over the
// exponents that fit in the truncation.
QSeries theta_by_triple_product(cplx z, std::size_t order) {
    QSeries sum(order);
    for (int n = -40; n <= 40; ++n) {
        const long e = static_cast<long>(n) * (n - 1) / 2;
        if (e > static_cast<long>(order)) continue;
        sum[static_cast<std::size_t>(e)] += (n % 2 == 0 ? 1.0 : -1.0) * detail::ipow(z, n);
    }
    QSeries euler = QSeries::one(order);
    for (std::size_t m = 1; m <= order; ++m) {
        QSeries f = QSeries::one(order);
        f[m] = -1.0;
        euler = euler * f;
    }
    return sum * qs_inv(euler) * (-1.0 / z);
}

} // namespace

TEST(Theta, PhiHandExpansion) {
    // (1 - q)(1 - q^2) = 1 - q - q^2 + q^3
    const QSeries p = phi_series(1.0, 2);
    EXPECT_NEAR(std::abs(p[0] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p[1] + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p[2] + 1.0), 0.0, 1e-15);
}

TEST(Theta, FirstCoefficientsAtTwo) {
    const QSeries t = theta_series(2.0, 1);
    EXPECT_NEAR(std::abs(t[0] - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(t[1] + 1.25), 0.0, 1e-15);
}

TEST(Theta, AgreesWithTripleProduct) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 6.28);
    for (int i = 0; i < 10; ++i) {
        const cplx z = std::polar(0.6 + 0.1 * i, u(rng));
        const QSeries a = theta_series(z, 15);
        const QSeries b = theta_by_triple_product(z, 15);
        EXPECT_LT(max_abs_diff(a, b), 1e-10 * std::max(1.0, a.max_abs()));
    }
}

TEST(Theta, Inversion) {
    const cplx z{0.7, 0.9};
    EXPECT_LT(max_abs_diff(theta_series(1.0 / z, 10), theta_series(z, 10) * (-z)), 1e-12);
}

TEST(Theta, DerivativeAtOneByRichardson) {
    const std::size_t order = 6;
    auto quotient = [&](double h) { return (theta_series(1.0 + h, order) - theta_series(1.0 - h, order)) * cplx{1.0 / (2 * h)}; };
    const QSeries d1 = quotient(1e-3), d2 = quotient(5e-4);
    const QSeries richardson = (d2 * cplx{4.0} - d1) * cplx{1.0 / 3.0};
    EXPECT_LT(max_abs_diff(theta_prime_at_one(order), richardson), 1e-9);
}

TEST(Theta, CollapsedQDifference) {
    const cplx q0 = std::polar(0.2, 1.0);
    for (const cplx z : {cplx{0.6, 0.2}, cplx{-1.4, 0.9}, cplx{0.0, 1.9}}) {
        const cplx lhs = theta_value(q0 * z, q0, 20);
        const cplx rhs = -theta_value(z, q0, 20) / (q0 * z);
        EXPECT_LT(std::abs(lhs - rhs) / std::abs(rhs), 1e-8);
    }
}

TEST(Theta, ZeroArgumentThrows) { EXPECT_THROW(theta_series(0.0, 3), std::domain_error); }

TEST(Theta, SignedRootProducts) {
    const std::vector<SignedRoot> roots{{cplx{1.2, 0.1}, 1}, {cplx{0.8, -0.4}, -1}};
    const QSeries expect = theta_series(roots[0].value, 6) * qs_inv(theta_series(roots[1].value, 6));
    EXPECT_LT(max_abs_diff(theta_of_roots(roots, 6), expect), 1e-12);
    const QSeries pexpect = phi_series(roots[0].value, 6) * qs_inv(phi_series(roots[1].value, 6));
    EXPECT_LT(max_abs_diff(phi_of_roots(roots, 6), pexpect), 1e-12);
}
