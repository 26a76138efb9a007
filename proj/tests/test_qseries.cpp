// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "ellres/qseries.hpp"

using namespace ellres;

namespace {

void expect_series(const QSeries& s, std::initializer_list<cplx> want, double tol = 1e-14) {
    ASSERT_EQ(s.order() + 1, want.size());
    std::size_t k = 0;
    for (const cplx w : want) {
        EXPECT_NEAR(std::abs(s[k] - w), 0.0, tol) << "coefficient of q^" << k;
        ++k;
    }
}

} // namespace

TEST(QSeries, CauchyProductTruncates) {
    // (1 + q)(1 - q + q^2) = 1 + q^3, truncated at order 2.
    expect_series(QSeries(2, {1.0, 1.0}) * QSeries(2, {1.0, -1.0, 1.0}), {1.0, 0.0, 0.0});
    expect_series(QSeries(3, {1.0, 1.0}) * QSeries(3, {1.0, -1.0, 1.0}), {1.0, 0.0, 0.0, 1.0});
}

TEST(QSeries, InverseOfGeometric) {
    expect_series(qs_inv(QSeries(4, {1.0, -1.0})), {1.0, 1.0, 1.0, 1.0, 1.0});
    const cplx a{0.0, 2.0};
    // 1/(a + q) = a^-1 - a^-2 q + a^-3 q^2
    expect_series(qs_inv(QSeries(2, {a, 1.0})), {1.0 / a, -1.0 / (a * a), 1.0 / (a * a * a)});
}

TEST(QSeries, RingIdentities) {
    const QSeries f(3, {cplx{1, 2}, cplx{0, 1}, 3.0, cplx{-1, 0.5}});
    const QSeries g(3, {2.0, cplx{1, -1}, 0.0, 4.0});
    EXPECT_EQ(qs_add(f, g), qs_add(g, f));
    EXPECT_LT(max_abs_diff(qs_mul(f, g), qs_mul(g, f)), 1e-14);
    EXPECT_LT(max_abs_diff(f / g * g, f), 1e-12);
    EXPECT_EQ(qs_neg(qs_neg(f)), f);
    EXPECT_EQ(qs_scale(f, 2.0), f + f);
}

TEST(QSeries, EvaluateIsHorner) {
    const QSeries f(2, {1.0, 2.0, 3.0});
    EXPECT_NEAR(std::abs(f.evaluate(0.5) - cplx{2.75}), 0.0, 1e-15);
}

TEST(QSeries, OrderMismatchThrows) {
    EXPECT_THROW(QSeries(2) + QSeries(3), OrderMismatch);
    EXPECT_THROW(QSeries(2) * QSeries(3), OrderMismatch);
}

TEST(QSeries, NonUnitThrows) {
    EXPECT_THROW(qs_inv(QSeries(2, {0.0, 1.0})), NonUnitSeries);
    EXPECT_THROW(qs_inv(QSeries(2, {1e-14, 1.0})), NonUnitSeries);
    EXPECT_NO_THROW(qs_inv(QSeries(2, {1e-6, 1.0})));
}

TEST(QSeries, RejectsEmpty) { EXPECT_THROW(QSeries(std::vector<cplx>{}), std::invalid_argument); }
