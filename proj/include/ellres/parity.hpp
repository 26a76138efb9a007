// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Integer bookkeeping behind the parity conditions at walls. Flag representations of a type A
// quiver come first, then Riemann-Roch parity on surfaces.

#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ellres {

/// Dimension vector (dim V^0 = 0, dim V^1, ..., dim V^{K+1}) of a full flag; steps are 0 or 1.
class FullFlag {
  public:
    explicit FullFlag(std::vector<int> dims) : dims_(std::move(dims)) {
        if (dims_.empty() || dims_.front() != 0) throw std::invalid_argument("FullFlag: dims must start at 0");
        for (std::size_t k = 1; k < dims_.size(); ++k) {
            const int step = dims_[k] - dims_[k - 1];
            if (step != 0 && step != 1)
                throw std::invalid_argument("FullFlag: step " + std::to_string(k) + " is " + std::to_string(step) + ", not 0 or 1");
        }
    }

    const std::vector<int>& dims() const noexcept { return dims_; }
    std::size_t length() const noexcept { return dims_.size(); }
    int total() const noexcept { return dims_.back(); }

    /// Drops step k (the passage V^k -> V^{k+1}), i.e. removes entry k+1.
    FullFlag without_step(std::size_t k) const {
        std::vector<int> d = dims_;
        d.erase(d.begin() + static_cast<std::ptrdiff_t>(k + 1));
        return FullFlag(std::move(d));
    }

    friend bool operator==(const FullFlag&, const FullFlag&) = default;

  private:
    std::vector<int> dims_;
};

/// sum_i ( dim Hom(V1^i, V2^{i+1}) - dim Hom(V1^i, V2^i) ).
inline long ext_quiver(const FullFlag& v1, const FullFlag& v2) {
    if (v1.length() != v2.length()) throw std::invalid_argument("ext_quiver: flags have different lengths");
    const auto& a = v1.dims();
    const auto& b = v2.dims();
    long total = 0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) total += static_cast<long>(a[i]) * (b[i + 1] - b[i]);
    return total;
}

inline long ext_asymmetry(const FullFlag& v1, const FullFlag& v2) { return ext_quiver(v1, v2) - ext_quiver(v2, v1); }

/// The splitting of the shortest full flag of dimension d = |steps| encoded by the set of step
/// positions I (bit k-1 set for k in I) that belong to the first summand.
inline std::pair<FullFlag, FullFlag> splitting_from_subset(std::size_t d, std::uint32_t subset) {
    std::vector<int> first(d + 1, 0), second(d + 1, 0);
    for (std::size_t k = 1; k <= d; ++k) {
        const bool in_first = (subset >> (k - 1)) & 1u;
        first[k] = first[k - 1] + (in_first ? 1 : 0);
        second[k] = second[k - 1] + (in_first ? 0 : 1);
    }
    return {FullFlag(std::move(first)), FullFlag(std::move(second))};
}

inline constexpr int kSplittingBudget = 16;

/// All values of ext(V1, V2) - ext(V2, V1) over splittings with dim V_i = d_i, by enumeration.
inline std::set<long> splitting_diff_set(int d1, int d2) {
    if (d1 < 0 || d2 < 0) throw std::invalid_argument("splitting_diff_set: dimensions must be non-negative");
    if (d1 + d2 > kSplittingBudget) throw std::invalid_argument("splitting_diff_set: d1 + d2 exceeds the enumeration budget of 16");
    const std::size_t d = static_cast<std::size_t>(d1 + d2);
    std::set<long> out;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        if (__builtin_popcount(mask) != d1) continue;
        const auto [v1, v2] = splitting_from_subset(d, mask);
        out.insert(ext_asymmetry(v1, v2));
    }
    return out;
}

/// {-d1 d2, -d1 d2 + 2, ..., d1 d2}.
inline std::set<long> parity_progression(int d1, int d2) {
    std::set<long> out;
    const long m = static_cast<long>(d1) * d2;
    for (long v = -m; v <= m; v += 2) out.insert(v);
    return out;
}

// ---------------------------------------------------------------------------
// Surfaces

/// Intersection data of a surface S. In spin mode K = 2D and D^2 is the input.
struct SurfaceClass {
    bool spin = false;
    long K_squared = 0;
    long D_squared = 0;

    static SurfaceClass general(long k_squared) { return {false, k_squared, 0}; }
    static SurfaceClass with_spin(long d_squared) { return {true, 4 * d_squared, d_squared}; }
};

/// Rank and c_1 of a sheaf on S, paired against K (or against D in spin mode).
struct SheafClass {
    long rank = 0;
    long c1_dot_K = 0;
    long c1_dot_D = 0;
    bool spin = false;

    static SheafClass general(long rank, long c1_dot_k) { return {rank, c1_dot_k, 0, false}; }
    static SheafClass with_spin(long rank, long c1_dot_d) { return {rank, 2 * c1_dot_d, c1_dot_d, true}; }
};

class NonIntegral : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// dim chi(S, F) - dim chi(S, F (x) K_S) = (1 - rank F)/2 K^2 - c_1(F) K.
inline long hrr_parity_diff(const SurfaceClass& s, const SheafClass& f) {
    if (s.spin != f.spin) throw std::invalid_argument("hrr_parity_diff: surface and sheaf data disagree on spin mode");
    if (s.spin) return (1 - f.rank) * 2 * s.D_squared - 2 * f.c1_dot_D;
    const long twice = (1 - f.rank) * s.K_squared;
    if (twice % 2 != 0) throw NonIntegral("hrr_parity_diff: (1 - rank) K^2 is odd outside spin mode");
    return twice / 2 - f.c1_dot_K;
}

/// Class of F1^dual (x) F2: rank r1 r2 and c_1 = r1 c_1(F2) - r2 c_1(F1).
inline SheafClass hom_class(const SheafClass& f1, const SheafClass& f2) {
    if (f1.spin != f2.spin) throw std::invalid_argument("hom_class: mixed spin modes");
    SheafClass h;
    h.spin = f1.spin;
    h.rank = f1.rank * f2.rank;
    h.c1_dot_K = f1.rank * f2.c1_dot_K - f2.rank * f1.c1_dot_K;
    h.c1_dot_D = f1.rank * f2.c1_dot_D - f2.rank * f1.c1_dot_D;
    return h;
}

/// (chi_S(F1, F2) + chi_S(F2, F1)) mod 2, which is the parity of dim Ext_Y(E1, E2) on the local
/// surface Y = tot(K_S). Requires spin data, where the result is always 0.
inline int vw_ext_parity(const SurfaceClass& s, const SheafClass& f1, const SheafClass& f2) {
    if (!s.spin || !f1.spin || !f2.spin) throw std::invalid_argument("vw_ext_parity: requires spin-mode input");
    const long d = hrr_parity_diff(s, hom_class(f1, f2));
    return static_cast<int>(((d % 2) + 2) % 2);
}

} // namespace ellres
