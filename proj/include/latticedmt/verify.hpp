// Self-contained verification suite: brute-force reference oracles and the
// invariant checks behind the `verify` subcommand.
//
// The oracles here are deliberately naive and independent of the decoding
// and reduction paths they check: the CVP oracle scans every lattice point
// in a box, the SVP oracle scans a coefficient box.  Checks return worst
// observed values so callers can report margins, not just booleans.
#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "latticedmt/decoders.hpp"
#include "latticedmt/linalg.hpp"
#include "latticedmt/reduction.hpp"
#include "latticedmt/rng.hpp"

namespace ldmt::verify {

inline CMat random_cmat(int rows, int cols, Rng& rng) {
    CMat m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = rng.complex_normal();
    return m;
}

// Square matrix with prescribed condition number via SVD synthesis.
inline CMat random_cmat_with_cond(int n, double cond, Rng& rng) {
    const CMat a = random_cmat(n, n, rng);
    const CMat b = random_cmat(n, n, rng);
    const CMat q1 = Eigen::HouseholderQR<CMat>(a).householderQ();
    const CMat q2 = Eigen::HouseholderQR<CMat>(b).householderQ();
    RVec sv(n);
    for (int i = 0; i < n; ++i)
        sv[i] = std::pow(cond, -static_cast<double>(i) / std::max(n - 1, 1));
    return q1 * sv.asDiagonal() * q2.adjoint();
}

inline DataVector random_gauss_vec(int n, std::int64_t span, Rng& rng) {
    DataVector s(static_cast<std::size_t>(n));
    for (auto& g : s) {
        g.re = static_cast<std::int64_t>(rng.uniform_below(2 * span + 1)) - span;
        g.im = static_cast<std::int64_t>(rng.uniform_below(2 * span + 1)) - span;
    }
    return s;
}

// Upper-triangular R with positive real diagonal from the QR factor of a
// random complex matrix.
inline CMat random_uppertri(int n, Rng& rng) {
    const CMat a = random_cmat(n, n, rng);
    CMat r = Eigen::HouseholderQR<CMat>(a).matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const cxd d = r(i, i);
        const double mag = std::abs(d);
        r.row(i) *= std::conj(d) / mag;
        r(i, i) = mag;
    }
    return r;
}

struct BruteForceCvp {
    double dist_sq = std::numeric_limits<double>::infinity();
    DataVector s;  // in the original coordinates
};

namespace detail {

inline void brute_cvp_rec(const CMat& basis, const std::vector<std::int64_t>& base,
                          const CVec& residual, int k, std::int64_t box, std::vector<GaussInt>& cur,
                          double& best, std::vector<GaussInt>& best_red) {
    if (k == 0) {
        // ||residual - v b_0||^2 = a - 2 Re(conj(v) d) + |v|^2 c, v = x + iy
        const double a = residual.squaredNorm();
        const double c = basis.col(0).squaredNorm();
        const cxd d = basis.col(0).dot(residual);
        for (std::int64_t re = base[0] - box; re <= base[0] + box; ++re) {
            for (std::int64_t im = base[1] - box; im <= base[1] + box; ++im) {
                const auto x = static_cast<double>(re);
                const auto y = static_cast<double>(im);
                const double dist = a - 2.0 * (x * d.real() + y * d.imag()) + (x * x + y * y) * c;
                if (dist < best) {
                    best = dist;
                    cur[0] = {re, im};
                    best_red = cur;
                }
            }
        }
        return;
    }
    for (std::int64_t re = base[2 * k] - box; re <= base[2 * k] + box; ++re) {
        for (std::int64_t im = base[2 * k + 1] - box; im <= base[2 * k + 1] + box; ++im) {
            cur[static_cast<std::size_t>(k)] = {re, im};
            const CVec next =
                residual - cxd(static_cast<double>(re), static_cast<double>(im)) * basis.col(k);
            brute_cvp_rec(basis, base, next, k - 1, box, cur, best, best_red);
        }
    }
}

}  // namespace detail

// Exhaustive CVP oracle: reduce the basis, center a box of radius `box` per
// real component at the rounded least-squares solution in the reduced
// coordinates, and scan every point in the box.
inline BruteForceCvp brute_force_cvp(const CMat& r, const CVec& z, std::int64_t box = 4) {
    const int kappa = static_cast<int>(r.cols());
    const ReducedBasis red = lll_reduce(r);

    const CVec center = red.B_tilde.colPivHouseholderQr().solve(z);
    std::vector<std::int64_t> base(2 * static_cast<std::size_t>(kappa));
    for (int k = 0; k < kappa; ++k) {
        base[2 * k] = round_half_even(center[k].real());
        base[2 * k + 1] = round_half_even(center[k].imag());
    }

    std::vector<GaussInt> cur(static_cast<std::size_t>(kappa));
    std::vector<GaussInt> best_red;
    double best = std::numeric_limits<double>::infinity();
    detail::brute_cvp_rec(red.B_tilde, base, z, kappa - 1, box, cur, best, best_red);

    BruteForceCvp out;
    out.dist_sq = best;
    out.s = red.T.apply(best_red);
    return out;
}

// Exhaustive SVP oracle over a coefficient box after reduction.
inline double brute_force_shortest(const CMat& b, std::int64_t box = 5) {
    const int kappa = static_cast<int>(b.cols());
    const ReducedBasis red = lll_reduce(b);
    const auto side = static_cast<std::uint64_t>(2 * box + 1);
    std::uint64_t total = 1;
    for (int i = 0; i < 2 * kappa; ++i) total *= side;
    double best = std::numeric_limits<double>::infinity();
    CVec cand(kappa);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t rem = code;
        bool zero = true;
        for (int k = 0; k < kappa; ++k) {
            const auto re = static_cast<std::int64_t>(rem % side) - box;
            rem /= side;
            const auto im = static_cast<std::int64_t>(rem % side) - box;
            rem /= side;
            cand[k] = cxd(static_cast<double>(re), static_cast<double>(im));
            zero = zero && re == 0 && im == 0;
        }
        if (zero) continue;
        best = std::min(best, (red.B_tilde * cand).squaredNorm());
    }
    return std::sqrt(best);
}

// ---- invariant checks --------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    std::uint64_t instances = 0;
    std::uint64_t failures = 0;
    double worst = 0.0;  // check-specific worst observed value
    std::string detail;
    double seconds = 0.0;
};

// Square-completion identity on random (F, y, alpha, s-hat) with
// kappa in {2, 4}: both metric forms agree to 1e-8 relative, c >= -1e-9.
inline CheckResult check_metric_identity(std::uint64_t instances, std::uint64_t seed = 1001) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res{"metric-identity", true, instances, 0, 0.0, "", 0.0};
    double worst_rel = 0.0;
    double min_c = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    for (std::uint64_t i = 0; i < instances; ++i) {
        const int kappa = (i % 2 == 0) ? 2 : 4;
        const CMat f = random_cmat(kappa + 2, kappa, rng);
        const CVec y = 3.0 * random_cmat(kappa + 2, 1, rng).col(0);
        const double alpha = 0.001 + 10.0 * rng.uniform01();
        const RegularizedSystem sys = build_regularized(f, y, alpha);
        min_c = std::min(min_c, sys.c);
        const auto s = random_gauss_vec(kappa, (i % 7 == 0) ? 50 : 4, rng);
        const CVec sc = to_cvec(s);
        const double lhs = (y - f * sc).squaredNorm() + alpha * sc.squaredNorm();
        const double rhs = (sys.z - sys.R * sc).squaredNorm() + sys.c;
        const double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-8 || sys.c < -1e-9) ++res.failures;
    }
    res.pass = res.failures == 0;
    res.worst = worst_rel;
    res.detail = "worst rel err " + std::to_string(worst_rel) + ", min c " + std::to_string(min_c);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// LLL on random kappa=4 bases with condition numbers up to 1e6: certificate
// booleans, exact unimodularity, and shortest-vector invariance.
inline CheckResult check_lll_certificates(std::uint64_t instances, std::uint64_t seed = 2002) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res{"lll-certificates", true, instances, 0, 0.0, "", 0.0};
    double worst_lambda_rel = 0.0;
    Rng rng(seed);
    for (std::uint64_t i = 0; i < instances; ++i) {
        const double cond = std::pow(10.0, 6.0 * rng.uniform01());
        const CMat b = random_cmat_with_cond(4, cond, rng);
        const ReducedBasis red = lll_reduce(b, 0.75);
        bool ok = red.certificate.ok() && is_unimodular(red.T);
        const double l_b = shortest_vector(b).lambda;
        const double l_r = shortest_vector(red.B_tilde).lambda;
        const double rel = std::abs(l_b - l_r) / l_b;
        worst_lambda_rel = std::max(worst_lambda_rel, rel);
        ok = ok && rel <= 1e-9;
        if (!ok) ++res.failures;
    }
    res.pass = res.failures == 0;
    res.worst = worst_lambda_rel;
    res.detail = "worst lambda mismatch " + std::to_string(worst_lambda_rel);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// cvp_enumerate against the boxed brute-force oracle on random kappa <= 3
// instances: zero mismatches allowed.
inline CheckResult check_cvp_exactness(std::uint64_t instances, std::uint64_t seed = 3003) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res{"cvp-exactness", true, instances, 0, 0.0, "", 0.0};
    Rng rng(seed);
    for (std::uint64_t i = 0; i < instances; ++i) {
        const int kappa = 1 + static_cast<int>(i % 3);
        const CMat r = random_uppertri(kappa, rng);
        const CVec z =
            r * to_cvec(random_gauss_vec(kappa, 3, rng)) + 0.7 * random_cmat(kappa, 1, rng).col(0);
        const auto sol = cvp_enumerate(r, z);
        const auto oracle = brute_force_cvp(r, z, 4);
        if (sol.s != oracle.s) ++res.failures;
    }
    res.pass = res.failures == 0;
    res.worst = static_cast<double>(res.failures);
    res.detail = std::to_string(res.failures) + " mismatches";
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// sigma_max(reduced^-1) * lambda <= K on random kappa=4 bases (K = 2^kappa
// unless overridden); reports the empirical worst product.
inline CheckResult check_sigma_bound_suite(std::uint64_t instances, std::uint64_t seed = 4004,
                                           double k_const = 16.0) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res{"sigma-bound", true, instances, 0, 0.0, "", 0.0};
    double worst = 0.0;
    Rng rng(seed);
    for (std::uint64_t i = 0; i < instances; ++i) {
        const double cond = std::pow(10.0, 6.0 * rng.uniform01());
        const CMat b = random_cmat_with_cond(4, cond, rng);
        const ReducedBasis red = lll_reduce(b, 0.75);
        const double lambda = shortest_vector(b).lambda;
        Eigen::JacobiSVD<CMat> svd(red.B_tilde);
        const double product = lambda / svd.singularValues().tail<1>()(0);
        worst = std::max(worst, product);
        if (!(product <= k_const)) ++res.failures;
    }
    res.pass = res.failures == 0;
    res.worst = worst;
    res.detail = "sup sigma_max(inv) * lambda = " + std::to_string(worst) + " (K = " +
                 std::to_string(k_const) + ")";
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// The invariant suite behind `verify`.  Quick mode trims instance counts to
// stay well under a minute.
inline std::vector<CheckResult> run_verification(bool quick) {
    std::vector<CheckResult> out;
    out.push_back(check_metric_identity(quick ? 2000 : 10'000));
    out.push_back(check_lll_certificates(quick ? 150 : 1000));
    out.push_back(check_cvp_exactness(quick ? 1500 : 10'000));
    out.push_back(check_sigma_bound_suite(quick ? 150 : 1000));
    return out;
}

}  // namespace ldmt::verify
