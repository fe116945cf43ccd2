// Complex (Gaussian-integer) LLL lattice reduction and exact shortest-vector
// search, plus the diagnostics used to sanity-check reduced bases.
//
// The reduction works directly over Z[i]: Gram-Schmidt coefficients are
// rounded to the nearest Gaussian integer and the Lovasz condition uses
// delta in (1/2, 1), as in Gan & Mow's complex LLL.  The unimodular
// transform T is carried in exact, overflow-checked integer arithmetic.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "latticedmt/enumerate.hpp"
#include "latticedmt/errors.hpp"
#include "latticedmt/gaussint.hpp"
#include "latticedmt/linalg.hpp"

namespace ldmt {

struct ReductionCertificate {
    bool size_reduced = false;
    bool lovasz_ok = false;

    bool ok() const { return size_reduced && lovasz_ok; }
};

// Shared by the reduction steps and the certificate so that a certified
// basis is a fixed point of the algorithm (idempotence): steps fire only on
// violations the certificate would also flag.
inline constexpr double kSizeReduceTol = 1e-8;
inline constexpr double kLovaszTol = 1e-10;

struct ReducedBasis {
    CMat B_tilde;  // reduced basis, = B * T
    GaussMat T;    // unimodular transform, exact
    double delta = 0.75;
    ReductionCertificate certificate;
    int swaps = 0;            // Lovasz swaps performed
    int size_reductions = 0;  // nonzero size-reduction steps
};

namespace detail {

// Classical Gram-Schmidt with one re-orthogonalization pass ("twice is
// enough"); robust for condition numbers well beyond the 1e8 this module
// is rated for.  mu(i, j) is the coefficient of column i on b*_j, j < i.
inline void gram_schmidt(const CMat& b, CMat& bstar, CMat& mu, RVec& bstar_sq) {
    const int n = static_cast<int>(b.cols());
    bstar = b;
    mu = CMat::Zero(n, n);
    bstar_sq.resize(n);
    double max_col_sq = 0.0;
    for (int i = 0; i < n; ++i) max_col_sq = std::max(max_col_sq, b.col(i).squaredNorm());
    for (int i = 0; i < n; ++i) {
        CVec v = b.col(i);
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < i; ++j) {
                const cxd c = bstar.col(j).dot(v) / bstar_sq[j];
                mu(i, j) += c;
                v -= c * bstar.col(j);
            }
        }
        bstar.col(i) = v;
        bstar_sq[i] = v.squaredNorm();
        if (!(bstar_sq[i] > 1e-26 * max_col_sq))
            throw SingularBasis("basis is numerically rank deficient");
    }
}

}  // namespace detail

namespace detail {

// One LLL sweep over the working basis; size-reduction and swap steps fire
// only on violations beyond the certificate tolerances, so a certified basis
// takes zero steps.  Returns the number of steps taken.
inline std::pair<int, int> lll_pass(CMat& bt, GaussMat& t, double delta, std::uint64_t max_iters,
                                    std::uint64_t& iters) {
    const int n = static_cast<int>(bt.cols());
    CMat bstar, mu;
    RVec bstar_sq;
    gram_schmidt(bt, bstar, mu, bstar_sq);
    int swaps = 0;
    int size_reductions = 0;
    int k = 1;
    while (k < n) {
        if (++iters > max_iters) throw NonConvergence("lll_reduce: iteration cap hit");
        bool changed = false;
        for (int j = k - 1; j >= 0; --j) {
            GaussInt q;
            if (std::abs(mu(k, j).real()) > 0.5 + kSizeReduceTol) q.re = round_half_even(mu(k, j).real());
            if (std::abs(mu(k, j).imag()) > 0.5 + kSizeReduceTol) q.im = round_half_even(mu(k, j).imag());
            if (q.is_zero()) continue;
            const cxd qc = q.to_complex();
            bt.col(k) -= qc * bt.col(j);
            t.axpy_col(q, j, k);
            for (int jj = 0; jj < j; ++jj) mu(k, jj) -= qc * mu(j, jj);
            mu(k, j) -= qc;
            changed = true;
            ++size_reductions;
        }
        if (changed) gram_schmidt(bt, bstar, mu, bstar_sq);
        const double lhs = bstar_sq[k];
        const double rhs = (delta - std::norm(mu(k, k - 1))) * bstar_sq[k - 1];
        if (lhs >= rhs * (1.0 - kLovaszTol)) {
            ++k;
        } else {
            bt.col(k).swap(bt.col(k - 1));
            t.swap_cols(k, k - 1);
            ++swaps;
            gram_schmidt(bt, bstar, mu, bstar_sq);
            k = std::max(k - 1, 1);
        }
    }
    return {swaps, size_reductions};
}

}  // namespace detail

// LLL reduction of a full-rank square complex basis (columns).  Returns the
// reduced basis, the exact unimodular transform, and a certificate.  Passes
// repeat on the exact B * T product until one takes no steps, which makes
// B_tilde = B * T hold to machine precision and the certificate an exact
// fixed-point statement (reducing a reduced basis takes zero steps).  The
// iteration cap exists only as a bug trap: LLL terminates for delta < 1.
inline ReducedBasis lll_reduce(const CMat& b, double delta = 0.75, std::uint64_t max_iters = 100'000) {
    const int n = static_cast<int>(b.cols());
    if (b.rows() != b.cols()) throw DimensionMismatch("lll_reduce: basis must be square");
    if (!(delta > 0.5 && delta < 1.0)) throw OutOfRange("lll_reduce: delta must be in (1/2, 1)");

    CMat bt = b;
    GaussMat t = GaussMat::identity(n);
    int swaps = 0;
    int size_reductions = 0;
    std::uint64_t iters = 0;
    CMat t_c(n, n);
    while (true) {
        const auto [sw, sz] = detail::lll_pass(bt, t, delta, max_iters, iters);
        swaps += sw;
        size_reductions += sz;
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) t_c(r, c) = t(r, c).to_complex();
        CMat exact = b * t_c;
        if (sw == 0 && sz == 0) {
            bt = std::move(exact);
            break;
        }
        bt = std::move(exact);  // drop float drift before the next pass
    }

    ReducedBasis out;
    out.delta = delta;
    out.T = t;
    out.swaps = swaps;
    out.size_reductions = size_reductions;
    out.B_tilde = std::move(bt);

    CMat bstar, mu;
    RVec bstar_sq;
    detail::gram_schmidt(out.B_tilde, bstar, mu, bstar_sq);
    bool size_ok = true;
    for (int i = 1; i < n && size_ok; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(mu(i, j).real()) > 0.5 + kSizeReduceTol ||
                std::abs(mu(i, j).imag()) > 0.5 + kSizeReduceTol) {
                size_ok = false;
                break;
            }
    bool lovasz = true;
    for (int i = 1; i < n; ++i)
        if (bstar_sq[i] < (delta - std::norm(mu(i, i - 1))) * bstar_sq[i - 1] * (1.0 - kLovaszTol)) {
            lovasz = false;
            break;
        }
    out.certificate = {size_ok, lovasz};
    return out;
}

struct ShortestVector {
    double lambda = 0.0;  // norm of a shortest nonzero lattice vector
    DataVector coeff;     // coefficients in the *input* basis
    std::uint64_t nodes = 0;
};

// Exact shortest nonzero vector of the lattice {B c : c in Z[i]^kappa} by
// Schnorr-Euchner enumeration on an LLL-reduced basis.  Oracle scale only
// (kappa <= 8).
inline ShortestVector shortest_vector(const CMat& b, std::uint64_t node_budget = 1'000'000'000) {
    const int n = static_cast<int>(b.cols());
    if (b.rows() != b.cols()) throw DimensionMismatch("shortest_vector: basis must be square");
    if (n > 8) throw DimensionTooLarge("shortest_vector: enumeration oracle limited to kappa <= 8");

    const ReducedBasis red = lll_reduce(b);
    Eigen::HouseholderQR<CMat> qr(red.B_tilde);
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    CVec z = CVec::Zero(n);
    detail::phase_normalize_rows(r, z, 1e-13);

    const RMat d = detail::realify_uppertri(r);
    // a reduced basis column is itself a candidate, so enumeration starts
    // from its norm rather than from an infinite radius
    detail::EnumResult init;
    int best_col = 0;
    double best_sq = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double c = red.B_tilde.col(j).squaredNorm();
        if (c < best_sq) {
            best_sq = c;
            best_col = j;
        }
    }
    init.x.assign(2 * static_cast<std::size_t>(n), 0);
    init.x[2 * static_cast<std::size_t>(best_col)] = 1;
    init.dist_sq = best_sq * (1.0 + 1e-12);

    auto res = detail::enumerate_uppertri(d, detail::realify_vec(z), /*exclude_zero=*/true,
                                          node_budget, &init);
    ShortestVector out;
    out.nodes = res.nodes;
    out.lambda = std::sqrt(res.dist_sq);
    out.coeff = red.T.apply(detail::gaussify(res.x));
    return out;
}

// prod ||b_i|| / |det B|; 1 exactly when the columns are orthogonal.
inline double orthogonality_defect(const CMat& b) {
    if (b.rows() != b.cols()) throw DimensionMismatch("orthogonality_defect: basis must be square");
    const double det_mag = std::abs(Eigen::PartialPivLU<CMat>(b).determinant());
    double prod = 1.0;
    for (Eigen::Index j = 0; j < b.cols(); ++j) prod *= b.col(j).norm();
    if (!(det_mag > 0.0) || !std::isfinite(prod / det_mag))
        throw SingularBasis("orthogonality_defect: determinant vanishes");
    return prod / det_mag;
}

// sigma_max(B_tilde^-1) <= K / lambda, i.e. lambda <= K * sigma_min(B_tilde).
inline bool check_sigma_bound(const ReducedBasis& reduced, double lambda, double k_const) {
    Eigen::JacobiSVD<CMat> svd(reduced.B_tilde);
    const double sigma_min = svd.singularValues().tail<1>()(0);
    if (sigma_min <= 0.0) return false;
    return lambda <= k_const * sigma_min;
}

}  // namespace ldmt
