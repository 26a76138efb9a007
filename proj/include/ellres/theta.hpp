// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Pochhammer and odd theta functions as truncated q-series:
//
//   phi(z)   = prod_{n>=1} (1 - q^n z)
//   theta(z) = (1 - 1/z) prod_{n>=1} (1 - q^n z)(1 - q^n / z)
//
// theta has a simple zero at z = 1 and obeys theta(qz) = -(qz)^{-1} theta(z),
// theta(1/z) = -z theta(z).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ellres/qseries.hpp"

namespace ellres {

/// A line-bundle Chern root with multiplicity sign +1 (genuine) or -1 (virtual).
struct SignedRoot {
    cplx value;
    int sign = 1;
};

namespace detail {

// s <- s * (1 - c q^n), in place.
inline void mul_linear_factor(QSeries& s, cplx c, std::size_t n) {
    const std::size_t order = s.order();
    if (n == 0 || n > order) {
        if (n == 0) s *= (1.0 - c);
        return;
    }
    for (std::size_t k = order; k >= n; --k) {
        s[k] -= c * s[k - n];
        if (k == n) break;
    }
}

} // namespace detail

inline QSeries phi_series(cplx z, std::size_t order) {
    QSeries out = QSeries::one(order);
    for (std::size_t n = 1; n <= order; ++n) detail::mul_linear_factor(out, z, n);
    return out;
}

inline QSeries theta_series(cplx z, std::size_t order) {
    if (z == cplx{0.0}) throw std::domain_error("theta_series: argument must be nonzero");
    const cplx zi = 1.0 / z;
    QSeries out = QSeries::constant(1.0 - zi, order);
    for (std::size_t n = 1; n <= order; ++n) {
        detail::mul_linear_factor(out, z, n);
        detail::mul_linear_factor(out, zi, n);
    }
    return out;
}

/// d theta / dz at z = 1, i.e. phi(1)^2 = prod_{n>=1} (1 - q^n)^2.
inline QSeries theta_prime_at_one(std::size_t order) {
    QSeries p = phi_series(cplx{1.0}, order);
    return p * p;
}

/// theta(z) summed at a numeric nome; converges for |q0| < 1 at every fixed z.
inline cplx theta_value(cplx z, cplx q0, std::size_t order) { return theta_series(z, order).evaluate(q0); }

namespace detail {

template <typename Factor>
QSeries signed_product(std::span<const SignedRoot> roots, std::size_t order, Factor&& factor) {
    QSeries num = QSeries::one(order);
    QSeries den = QSeries::one(order);
    bool any_den = false;
    for (const auto& r : roots) {
        if (r.sign == 1) {
            num = num * factor(r.value, order);
        } else if (r.sign == -1) {
            den = den * factor(r.value, order);
            any_den = true;
        } else {
            throw std::invalid_argument("root sign must be +1 or -1");
        }
    }
    return any_den ? num * qs_inv(den) : num;
}

} // namespace detail

/// prod theta(root)^sign; throws NonUnitSeries if a negative-sign factor vanishes.
inline QSeries theta_of_roots(std::span<const SignedRoot> roots, std::size_t order) {
    return detail::signed_product(roots, order, [](cplx z, std::size_t q) { return theta_series(z, q); });
}

inline QSeries phi_of_roots(std::span<const SignedRoot> roots, std::size_t order) {
    return detail::signed_product(roots, order, [](cplx z, std::size_t q) { return phi_series(z, q); });
}

} // namespace ellres
