// The decoder ladder for lattice space-time codes over y = F s + w:
//
//   ml_decode                   exhaustive search over the finite constellation
//   naive_lattice_decode        exact CVP over the unbounded lattice (alpha = 0)
//   regularized_lattice_decode  exact CVP for ||y - F s||^2 + alpha ||s||^2
//   codeword_regularized_decode same with the penalty on the codeword, rho^-1 ||theta G s||^2
//   linear_mmse_decode          componentwise rounding of R^-1 z
//   lr_mmse_decode              rounding after LLL reduction of R, mapped back through T
//
// The regularized decoders share one completing-the-squares reduction:
// ||y - F s||^2 + s' M s = ||z - R s||^2 + c with R'R = F'F + M,
// z = R^-adj F' y, and c = ||y||^2 - ||z||^2.
//
// Reported metrics are the decoder's own objective evaluated at the returned
// point; for the rounding decoders (mmse, lr_mmse) that is the regularized
// objective they approximate.  Tie-breaking is deterministic everywhere:
// rounding sends halves to even, and enumeration visits candidates
// Babai-first so the first of two equal-metric points wins.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "latticedmt/channel.hpp"
#include "latticedmt/codes.hpp"
#include "latticedmt/enumerate.hpp"
#include "latticedmt/errors.hpp"
#include "latticedmt/gaussint.hpp"
#include "latticedmt/linalg.hpp"
#include "latticedmt/reduction.hpp"

namespace ldmt {

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

// Theorem-prescribed regularization weight alpha = rho^(-rT/kappa).
inline double mmse_alpha(double rho, double r, int block_len, int kappa) {
    if (rho <= 0.0) throw OutOfRange("mmse_alpha: rho must be > 0");
    if (r < 0.0) throw OutOfRange("mmse_alpha: r must be >= 0");
    return std::pow(rho, -r * block_len / kappa);
}

struct RegularizedSystem {
    CMat R;     // upper triangular, real positive diagonal, R'R = F'F + M
    CVec z;     // R^-adj F' y
    double c;   // ||y||^2 - ||z||^2, residual constant of the square completion
    double alpha;
};

namespace detail {

inline RegularizedSystem build_regularized_gram(const CMat& f, const CVec& y, const CMat& gram_penalty,
                                                double alpha_label) {
    if (y.size() != f.rows()) throw DimensionMismatch("build_regularized: y length != rows of F");
    const Eigen::Index k = f.cols();
    CMat a = f.adjoint() * f + gram_penalty;
    Eigen::LLT<CMat> llt(a);
    if (llt.info() != Eigen::Success)
        throw SingularSystem("regularized Gram matrix is not positive definite");
    double max_piv = 0.0, min_piv = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i) {
        const double p = llt.matrixLLT()(i, i).real();
        max_piv = std::max(max_piv, p);
        min_piv = std::min(min_piv, p);
    }
    if (!(min_piv > 1e-13 * max_piv))
        throw SingularSystem("regularized Gram matrix is numerically singular");
    RegularizedSystem sys;
    sys.R = llt.matrixU();
    sys.z = llt.matrixL().solve(f.adjoint() * y);
    sys.c = y.squaredNorm() - sys.z.squaredNorm();
    sys.alpha = alpha_label;
    return sys;
}

}  // namespace detail

// Completing the squares for the alpha-regularized metric.  Requires
// alpha > 0, or alpha = 0 with F of full column rank.
inline RegularizedSystem build_regularized(const CMat& f, const CVec& y, double alpha) {
    if (alpha < 0.0) throw OutOfRange("build_regularized: alpha must be >= 0");
    const Eigen::Index k = f.cols();
    return detail::build_regularized_gram(f, y, alpha * CMat::Identity(k, k), alpha);
}

struct DecodeOutcome {
    DataVector s_hat;
    std::optional<bool> in_constellation;  // set when a constellation context is supplied
    double metric = 0.0;
    std::uint64_t work = 0;  // enumeration nodes (search decoders) or LLL swaps (lr_mmse)
};

// Optional constellation context used to flag boundary membership.
struct BoundaryContext {
    const CodeSpec* spec = nullptr;
    ConstellationSpec cset;

    std::optional<bool> membership(const DataVector& s) const {
        if (!spec) return std::nullopt;
        return in_constellation(*spec, cset, s);
    }
};

struct CvpSolution {
    DataVector s;
    double dist_sq = 0.0;
    std::uint64_t nodes = 0;
};

// Exact closest lattice point arg min ||z - R s||^2 over Z[i]^kappa for an
// upper-triangular R (entries below the diagonal are ignored).  Each complex
// coordinate is enumerated as two interleaved real Schnorr-Euchner layers.
inline CvpSolution cvp_enumerate(const CMat& r_upper, const CVec& z,
                                 std::uint64_t node_budget = kDefaultNodeBudget) {
    if (r_upper.rows() != r_upper.cols() || z.size() != r_upper.cols())
        throw DimensionMismatch("cvp_enumerate: shape mismatch");
    CMat r = r_upper.triangularView<Eigen::Upper>();
    CVec zz = z;
    detail::phase_normalize_rows(r, zz, 1e-13);
    const auto res = detail::enumerate_uppertri(detail::realify_uppertri(r), detail::realify_vec(zz),
                                                /*exclude_zero=*/false, node_budget);
    return {detail::gaussify(res.x), res.dist_sq, res.nodes};
}

// Babai nearest-plane point: back substitution with componentwise rounding.
inline DataVector babai_nearest_plane(const CMat& r_upper, const CVec& z) {
    if (r_upper.rows() != r_upper.cols() || z.size() != r_upper.cols())
        throw DimensionMismatch("babai_nearest_plane: shape mismatch");
    CMat r = r_upper.triangularView<Eigen::Upper>();
    CVec zz = z;
    detail::phase_normalize_rows(r, zz, 1e-13);
    const RMat d = detail::realify_uppertri(r);
    const RVec t = detail::realify_vec(zz);
    const int n = static_cast<int>(d.cols());
    std::vector<std::int64_t> x(n, 0);
    for (int i = n - 1; i >= 0; --i) {
        double dot = 0.0;
        for (int j = i + 1; j < n; ++j) dot += d(i, j) * static_cast<double>(x[j]);
        x[i] = round_half_even((t[i] - dot) / d(i, i));
    }
    return detail::gaussify(x);
}

// Exhaustive maximum-likelihood search over the supplied constellation;
// ties go to the earlier (lexicographically smaller) candidate.
inline DecodeOutcome ml_decode(const CMat& f, const CVec& y, const std::vector<DataVector>& constellation) {
    if (constellation.empty()) throw EmptyConstellation("ml_decode: empty constellation");
    DecodeOutcome out;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : constellation) {
        const double m = (y - f * to_cvec(s)).squaredNorm();
        if (m < best) {
            best = m;
            out.s_hat = s;
        }
    }
    out.metric = best;
    out.in_constellation = true;
    out.work = constellation.size();
    return out;
}

inline DecodeOutcome naive_lattice_decode(const CMat& f, const CVec& y,
                                          const BoundaryContext& ctx = {},
                                          std::uint64_t node_budget = kDefaultNodeBudget) {
    const RegularizedSystem sys = build_regularized(f, y, 0.0);
    const CvpSolution sol = cvp_enumerate(sys.R, sys.z, node_budget);
    DecodeOutcome out;
    out.s_hat = sol.s;
    out.metric = (y - f * to_cvec(sol.s)).squaredNorm();
    out.work = sol.nodes;
    out.in_constellation = ctx.membership(sol.s);
    return out;
}

inline DecodeOutcome regularized_lattice_decode(const CMat& f, const CVec& y, double alpha,
                                                const BoundaryContext& ctx = {},
                                                std::uint64_t node_budget = kDefaultNodeBudget) {
    if (!(alpha > 0.0)) throw OutOfRange("regularized_lattice_decode: alpha must be > 0");
    const RegularizedSystem sys = build_regularized(f, y, alpha);
    const CvpSolution sol = cvp_enumerate(sys.R, sys.z, node_budget);
    DecodeOutcome out;
    out.s_hat = sol.s;
    const CVec sc = to_cvec(sol.s);
    out.metric = (y - f * sc).squaredNorm() + alpha * sc.squaredNorm();
    out.work = sol.nodes;
    out.in_constellation = ctx.membership(sol.s);
    return out;
}

// Regularization applied to the vectorized codeword instead of the data
// vector: ||y - F s||^2 + rho^-1 ||theta G s||^2.  For unitary G this equals
// the alpha-regularized decoder with alpha = theta^2 / rho.
inline DecodeOutcome codeword_regularized_decode(const CMat& f, const CVec& y, const CodeSpec& spec,
                                                 double theta, double rho,
                                                 const BoundaryContext& ctx = {},
                                                 std::uint64_t node_budget = kDefaultNodeBudget) {
    if (rho <= 0.0) throw OutOfRange("codeword_regularized_decode: rho must be > 0");
    const double weight = theta * theta / rho;
    const RegularizedSystem sys =
        detail::build_regularized_gram(f, y, weight * (spec.G.adjoint() * spec.G), weight);
    const CvpSolution sol = cvp_enumerate(sys.R, sys.z, node_budget);
    DecodeOutcome out;
    out.s_hat = sol.s;
    const CVec sc = to_cvec(sol.s);
    out.metric = (y - f * sc).squaredNorm() + weight * (spec.G * sc).squaredNorm();
    out.work = sol.nodes;
    out.in_constellation = ctx.membership(sol.s);
    return out;
}

// Linear MMSE: round R^-1 z componentwise, which equals rounding
// (F'F + alpha I)^-1 F' y.
inline DecodeOutcome linear_mmse_decode(const CMat& f, const CVec& y, double alpha,
                                        const BoundaryContext& ctx = {}) {
    if (!(alpha > 0.0)) throw OutOfRange("linear_mmse_decode: alpha must be > 0");
    const RegularizedSystem sys = build_regularized(f, y, alpha);
    const CVec x = sys.R.triangularView<Eigen::Upper>().solve(sys.z);
    DecodeOutcome out;
    out.s_hat = round_to_gauss(x);
    const CVec sc = to_cvec(out.s_hat);
    out.metric = (y - f * sc).squaredNorm() + alpha * sc.squaredNorm();
    out.work = 0;
    out.in_constellation = ctx.membership(out.s_hat);
    return out;
}

// LLL-based LR-aided MMSE: round in the reduced basis, map back through the
// unimodular transform.  work records the LLL swap count.
inline DecodeOutcome lr_mmse_decode(const CMat& f, const CVec& y, double alpha, double delta_lll = 0.75,
                                    const BoundaryContext& ctx = {}) {
    if (!(alpha > 0.0)) throw OutOfRange("lr_mmse_decode: alpha must be > 0");
    const RegularizedSystem sys = build_regularized(f, y, alpha);
    const ReducedBasis red = lll_reduce(sys.R, delta_lll);
    const CVec v = Eigen::PartialPivLU<CMat>(red.B_tilde).solve(sys.z);
    const DataVector s_tilde = round_to_gauss(v);
    DecodeOutcome out;
    out.s_hat = red.T.apply(s_tilde);
    const CVec sc = to_cvec(out.s_hat);
    out.metric = (y - f * sc).squaredNorm() + alpha * sc.squaredNorm();
    out.work = static_cast<std::uint64_t>(red.swaps);
    out.in_constellation = ctx.membership(out.s_hat);
    return out;
}

// Empirical check behind the pairwise-separation lower bound: the smallest
// ||F (s1 - s2)||^2 over distinct candidates, relative to
// rho^((eps - zeta)/n - zeta*T/kappa).  The candidates are expected to come
// from the constellation at multiplexing gain r + zeta.
inline double separation_margin(const CMat& f, const ChannelRealization& ch, double r, double eps,
                                double zeta, int block_len, int kappa,
                                const std::vector<DataVector>& candidates,
                                std::size_t pair_cap = 2'000'000) {
    if (!(eps > 0.0) || !(zeta > 0.0) || !(zeta < eps))
        throw OutOfRange("separation_margin: need 0 < zeta < eps");
    if (candidates.size() < 2) throw EmptyPairSet("separation_margin: need at least two candidates");
    if (candidates.size() * (candidates.size() - 1) / 2 > pair_cap)
        throw ConstellationTooLarge("separation_margin: too many candidate pairs");
    if (!in_no_outage(ch, r, eps))
        throw PrematureOutage("separation_margin: channel is not in the eps-no-outage set");
    const int n = std::min(ch.n_tx(), ch.n_rx());
    const double exponent = (eps - zeta) / n - zeta * block_len / kappa;
    double min_sep = std::numeric_limits<double>::infinity();
    CVec diff(kappa);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            for (int k = 0; k < kappa; ++k)
                diff[k] = (candidates[i][static_cast<std::size_t>(k)] -
                           candidates[j][static_cast<std::size_t>(k)]).to_complex();
            min_sep = std::min(min_sep, (f * diff).squaredNorm());
        }
    }
    return min_sep / std::pow(ch.rho, exponent);
}

}  // namespace ldmt
