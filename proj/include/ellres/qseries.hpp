// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellres {

using cplx = std::complex<double>;

/// Thrown when two series of different truncation orders meet in arithmetic.
class OrderMismatch : public std::invalid_argument {
  public:
    OrderMismatch(std::size_t lhs, std::size_t rhs)
        : std::invalid_argument("q-series order mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)),
          lhs_(lhs), rhs_(rhs) {}
    std::size_t lhs() const noexcept { return lhs_; }
    std::size_t rhs() const noexcept { return rhs_; }

  private:
    std::size_t lhs_;
    std::size_t rhs_;
};

/// Thrown by inversion when the constant term is indistinguishable from zero.
class NonUnitSeries : public std::domain_error {
  public:
    NonUnitSeries(double constant_magnitude, double floor)
        : std::domain_error("non-unit series: |c0| = " + std::to_string(constant_magnitude) +
                            " is below the inversion floor " + std::to_string(floor)),
          constant_magnitude_(constant_magnitude) {}
    double constant_magnitude() const noexcept { return constant_magnitude_; }

  private:
    double constant_magnitude_;
};

/// Relative size (w.r.t. the largest coefficient) below which a constant term counts as zero.
inline constexpr double kInversionFloor = 1e-12;

/// Power series in q with complex coefficients, truncated after q^order.
class QSeries {
  public:
    QSeries() : coeffs_(1, cplx{0.0}) {}

    /// Zero series carrying coefficients of q^0..q^order.
    explicit QSeries(std::size_t order) : coeffs_(order + 1, cplx{0.0}) {}

    /// Takes coefficients of q^0..q^{coeffs.size()-1}; an empty vector is rejected.
    explicit QSeries(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("QSeries needs at least one coefficient");
    }

    QSeries(std::size_t order, std::initializer_list<cplx> leading) : coeffs_(order + 1, cplx{0.0}) {
        if (leading.size() > coeffs_.size()) throw std::invalid_argument("QSeries: more coefficients than order allows");
        std::copy(leading.begin(), leading.end(), coeffs_.begin());
    }

    static QSeries constant(cplx c, std::size_t order) {
        QSeries s(order);
        s.coeffs_[0] = c;
        return s;
    }
    static QSeries one(std::size_t order) { return constant(cplx{1.0}, order); }

    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    std::span<const cplx> coeffs() const noexcept { return coeffs_; }
    const cplx& operator[](std::size_t k) const { return coeffs_.at(k); }
    cplx& operator[](std::size_t k) { return coeffs_.at(k); }

    double max_abs() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    /// Sums the truncated series at a numeric nome q0.
    cplx evaluate(cplx q0) const {
        cplx acc{0.0};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * q0 + *it;
        return acc;
    }

    QSeries& operator+=(const QSeries& rhs) {
        check_order(rhs);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
        return *this;
    }
    QSeries& operator-=(const QSeries& rhs) {
        check_order(rhs);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
        return *this;
    }
    QSeries& operator*=(cplx c) {
        for (auto& x : coeffs_) x *= c;
        return *this;
    }
    QSeries& operator*=(const QSeries& rhs) {
        *this = *this * rhs;
        return *this;
    }

    friend QSeries operator+(QSeries lhs, const QSeries& rhs) { return lhs += rhs; }
    friend QSeries operator-(QSeries lhs, const QSeries& rhs) { return lhs -= rhs; }
    friend QSeries operator-(QSeries s) {
        for (auto& x : s.coeffs_) x = -x;
        return s;
    }
    friend QSeries operator*(QSeries s, cplx c) { return s *= c; }
    friend QSeries operator*(cplx c, QSeries s) { return s *= c; }

    // Cauchy product truncated at the common order.
    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        a.check_order(b);
        const std::size_t n = a.coeffs_.size();
        QSeries out(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (a.coeffs_[i] == cplx{0.0}) continue;
            for (std::size_t j = 0; i + j < n; ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return out;
    }

    friend bool operator==(const QSeries&, const QSeries&) = default;

  private:
    void check_order(const QSeries& rhs) const {
        if (rhs.coeffs_.size() != coeffs_.size()) throw OrderMismatch(order(), rhs.order());
    }

    std::vector<cplx> coeffs_;
};

inline QSeries qs_add(const QSeries& a, const QSeries& b) { return a + b; }
inline QSeries qs_mul(const QSeries& a, const QSeries& b) { return a * b; }
inline QSeries qs_neg(const QSeries& a) { return -a; }
inline QSeries qs_scale(const QSeries& a, cplx c) { return a * c; }

/// Multiplicative inverse; throws NonUnitSeries when |c0| <= kInversionFloor * max|c_k|.
inline QSeries qs_inv(const QSeries& f) {
    const double c0 = std::abs(f[0]);
    const double floor = kInversionFloor * f.max_abs();
    if (!(c0 > floor)) throw NonUnitSeries(c0, floor);
    const std::size_t n = f.order();
    QSeries g(n);
    const cplx inv0 = 1.0 / f[0];
    g[0] = inv0;
    for (std::size_t k = 1; k <= n; ++k) {
        cplx acc{0.0};
        for (std::size_t j = 1; j <= k; ++j) acc += f[j] * g[k - j];
        g[k] = -acc * inv0;
    }
    return g;
}

inline QSeries operator/(const QSeries& a, const QSeries& b) { return a * qs_inv(b); }

/// Largest coefficient-wise deviation |a_k - b_k|.
inline double max_abs_diff(const QSeries& a, const QSeries& b) { return (a - b).max_abs(); }

} // namespace ellres
