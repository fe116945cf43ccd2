// Depth-first Schnorr-Euchner enumeration over a real upper-triangular
// system with positive diagonal.
//
// Complex kappa-dimensional systems are expanded to 2*kappa real coordinates
// ordered (Re s_1, Im s_1, ..., Re s_kappa, Im s_kappa): a complex upper
// triangular matrix with real positive diagonal stays upper triangular under
// this embedding, so enumeration runs one real layer at a time while the
// caller keeps the complex form.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "latticedmt/errors.hpp"
#include "latticedmt/gaussint.hpp"
#include "latticedmt/linalg.hpp"

namespace ldmt::detail {

struct EnumResult {
    std::vector<std::int64_t> x;  // integer solution
    double dist_sq = std::numeric_limits<double>::infinity();
    std::uint64_t nodes = 0;  // search-tree nodes visited
};

// Minimizes ||t - D x||^2 over integer vectors x, visiting candidates per
// level in non-decreasing distance order (zig-zag around the rounded
// center), so the first leaf is the Babai nearest-plane point.  When
// exclude_zero is set the all-zero solution is skipped (shortest-vector
// usage with t = 0); init then supplies a valid starting candidate.
inline EnumResult enumerate_uppertri(const RMat& d_mat, const RVec& target, bool exclude_zero,
                                     std::uint64_t node_budget,
                                     const EnumResult* init = nullptr) {
    const int n = static_cast<int>(d_mat.cols());
    EnumResult best;
    if (init) best = *init;

    std::vector<double> center(n, 0.0), partial(n + 1, 0.0);
    std::vector<std::int64_t> x(n, 0), step(n, 1);
    std::uint64_t nodes = 0;

    auto descend = [&](int i) {
        double dot = 0.0;
        for (int j = i + 1; j < n; ++j) dot += d_mat(i, j) * static_cast<double>(x[j]);
        center[i] = (target[i] - dot) / d_mat(i, i);
        x[i] = round_half_even(center[i]);
        step[i] = (center[i] - static_cast<double>(x[i]) >= 0.0) ? 1 : -1;
    };
    auto advance = [&](int i) {
        x[i] += step[i];
        step[i] = -step[i] - (step[i] > 0 ? 1 : -1);
    };

    int i = n - 1;
    descend(i);
    while (true) {
        if (++nodes > node_budget) throw BudgetExceeded("enumeration node budget exceeded");
        const double e = (center[i] - static_cast<double>(x[i])) * d_mat(i, i);
        const double dist = partial[i + 1] + e * e;
        if (dist < best.dist_sq) {
            if (i > 0) {
                partial[i] = dist;
                descend(--i);
                continue;
            }
            const bool zero = exclude_zero &&
                              std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; });
            if (!zero) {
                best.x = x;
                best.dist_sq = dist;
            }
            advance(0);
        } else {
            if (++i == n) break;
            advance(i);
        }
    }
    best.nodes = nodes;
    return best;
}

// Real embedding of a complex upper-triangular matrix whose diagonal has
// been phase-normalized to the positive real axis.
inline RMat realify_uppertri(const CMat& r) {
    const int n = static_cast<int>(r.cols());
    RMat d = RMat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            d(2 * i, 2 * j) = r(i, j).real();
            d(2 * i, 2 * j + 1) = -r(i, j).imag();
            d(2 * i + 1, 2 * j) = r(i, j).imag();
            d(2 * i + 1, 2 * j + 1) = r(i, j).real();
        }
    }
    return d;
}

inline RVec realify_vec(const CVec& z) {
    RVec t(2 * z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        t[2 * i] = z[i].real();
        t[2 * i + 1] = z[i].imag();
    }
    return t;
}

inline DataVector gaussify(const std::vector<std::int64_t>& x) {
    DataVector s(x.size() / 2);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = {x[2 * k], x[2 * k + 1]};
    return s;
}

// Multiplies each row of an upper-triangular R (and the matching entry of z)
// by a unit phase so the diagonal becomes real positive; the residual norm
// ||z - R s|| is unchanged.  Throws if a diagonal entry vanishes.
inline void phase_normalize_rows(CMat& r, CVec& z, double tol_scale) {
    const int n = static_cast<int>(r.cols());
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(r(i, i)));
    for (int i = 0; i < n; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag <= tol_scale * max_diag || mag == 0.0)
            throw SingularSystem("upper-triangular system has a vanishing pivot");
        const cxd phase = std::conj(r(i, i)) / mag;
        r.row(i) *= phase;
        r(i, i) = mag;  // exact real diagonal
        z[i] *= phase;
    }
}

}  // namespace ldmt::detail
