// Lattice space-time codes: generator matrices, constellation shaping,
// power normalization, encoding, and the effective channel matrix.
//
// A code maps a data vector s in Z[i]^kappa to the transmit block
// X = Mat(theta * G * s), where Mat de-stacks column by column into an
// n_tx x T matrix.  The generator G is fixed at construction and independent
// of SNR and multiplexing gain.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "latticedmt/errors.hpp"
#include "latticedmt/linalg.hpp"

namespace ldmt {

struct CodeSpec {
    std::string name;
    int n_tx = 0;       // transmit antennas
    int block_len = 0;  // T, channel uses per block
    int kappa = 0;      // complex symbol dimension
    CMat G;             // (n_tx * block_len) x kappa, full column rank

    bool is_unitary(double tol = 1e-10) const {
        return (G.adjoint() * G - CMat::Identity(kappa, kappa)).norm() <= tol;
    }
};

inline CodeSpec make_code_spec(std::string name, int n_tx, int block_len, CMat g) {
    if (n_tx < 1 || block_len < 1) throw DimensionMismatch("code spec: antennas and block length must be >= 1");
    const int kappa = static_cast<int>(g.cols());
    if (g.rows() != static_cast<Eigen::Index>(n_tx) * block_len)
        throw DimensionMismatch("code spec: G must have n_tx*T rows");
    if (kappa < 1 || kappa > n_tx * block_len)
        throw DimensionMismatch("code spec: need 1 <= kappa <= n_tx*T");
    if (Eigen::ColPivHouseholderQR<CMat>(g).rank() != kappa)
        throw SingularBasis("code spec: G is column rank deficient");
    return CodeSpec{std::move(name), n_tx, block_len, kappa, std::move(g)};
}

// Baseline V-BLAST-style code: identity generator, kappa = n_tx * T.
inline CodeSpec uncoded_spec(int n_tx, int block_len) {
    const int k = n_tx * block_len;
    return make_code_spec("uncoded" + std::to_string(n_tx) + "x" + std::to_string(block_len),
                          n_tx, block_len, CMat::Identity(k, k));
}

// The 2x2 Golden code (Oggier, Rekaya, Belfiore, Viterbo 2006).  The 1/sqrt(5)
// scale is folded into G so that G'G = I exactly; min |det Mat(G s)|^2 over
// nonzero s in Z[i]^4 is 1/5.
inline CodeSpec golden_code_spec() {
    const double root5 = std::sqrt(5.0);
    const double phi = (1.0 + root5) / 2.0;      // golden ratio
    const double phibar = (1.0 - root5) / 2.0;   // conjugate root
    const cxd alpha{1.0, phibar};                // 1 + i(1 - phi)
    const cxd alphabar{1.0, phi};                // 1 + i(1 - phibar)
    const cxd i_unit{0.0, 1.0};

    CMat g = CMat::Zero(4, 4);
    // rows follow vec(X) = (X11, X21, X12, X22) for s = (a, b, c, d)
    g(0, 0) = alpha;
    g(0, 1) = alpha * phi;
    g(1, 2) = i_unit * alphabar;
    g(1, 3) = i_unit * alphabar * phibar;
    g(2, 2) = alpha;
    g(2, 3) = alpha * phi;
    g(3, 0) = alphabar;
    g(3, 1) = alphabar * phibar;
    g /= root5;
    return make_code_spec("golden", 2, 2, std::move(g));
}

enum class Shape { Spherical, Cubic };

// Constellation S_r: Gaussian-integer vectors inside a sphere of squared
// radius rho^(rT/kappa), or a cube with per-axis bound rho^(rT/(2 kappa)).
struct ConstellationSpec {
    Shape shape = Shape::Spherical;
    double r = 0.0;    // multiplexing gain
    double rho = 1.0;  // SNR, linear scale
};

inline ConstellationSpec make_constellation_spec(Shape shape, double r, double rho) {
    if (r < 0.0) throw OutOfRange("constellation: multiplexing gain must be >= 0");
    if (rho <= 0.0) throw OutOfRange("constellation: SNR must be > 0");
    return {shape, r, rho};
}

// absorbs pow() representation slop on exact boundaries
inline constexpr double kBoundarySlack = 1e-9;

inline double sq_norm_bound(const CodeSpec& spec, const ConstellationSpec& cset) {
    return std::pow(cset.rho, cset.r * spec.block_len / spec.kappa);
}
inline double axis_bound(const CodeSpec& spec, const ConstellationSpec& cset) {
    return std::pow(cset.rho, cset.r * spec.block_len / (2.0 * spec.kappa));
}

inline bool in_constellation(const CodeSpec& spec, const ConstellationSpec& cset, const DataVector& s) {
    if (static_cast<int>(s.size()) != spec.kappa) throw DimensionMismatch("in_constellation: bad length");
    if (cset.shape == Shape::Spherical) return sq_norm(s) <= sq_norm_bound(spec, cset) + kBoundarySlack;
    const auto t = static_cast<std::int64_t>(std::floor(axis_bound(spec, cset) + kBoundarySlack));
    return std::all_of(s.begin(), s.end(), [t](const GaussInt& g) {
        return std::llabs(g.re) <= t && std::llabs(g.im) <= t;
    });
}

namespace detail {

inline void enumerate_sphere_rec(int kappa, double budget, DataVector& cur,
                                 std::vector<DataVector>& out, std::size_t cap) {
    const int k = static_cast<int>(cur.size());
    if (k == kappa) {
        if (out.size() >= cap) throw ConstellationTooLarge("constellation exceeds enumeration cap");
        out.push_back(cur);
        return;
    }
    const auto m_re = static_cast<std::int64_t>(std::floor(std::sqrt(std::max(budget, 0.0)) + kBoundarySlack));
    for (std::int64_t re = -m_re; re <= m_re; ++re) {
        const double rem = budget - static_cast<double>(re) * static_cast<double>(re);
        const auto m_im = static_cast<std::int64_t>(std::floor(std::sqrt(std::max(rem, 0.0)) + kBoundarySlack));
        for (std::int64_t im = -m_im; im <= m_im; ++im) {
            cur.push_back({re, im});
            enumerate_sphere_rec(kappa, rem - static_cast<double>(im) * static_cast<double>(im), cur, out, cap);
            cur.pop_back();
        }
    }
}

}  // namespace detail

// All data vectors in the constellation, in lexicographic order of the
// flattened tuple (re_1, im_1, re_2, im_2, ...).
inline std::vector<DataVector> enumerate_constellation(const CodeSpec& spec,
                                                       const ConstellationSpec& cset,
                                                       std::size_t cap = 1'000'000) {
    std::vector<DataVector> out;
    if (cset.shape == Shape::Spherical) {
        DataVector cur;
        cur.reserve(static_cast<std::size_t>(spec.kappa));
        detail::enumerate_sphere_rec(spec.kappa, sq_norm_bound(spec, cset) + kBoundarySlack, cur, out, cap);
        return out;
    }
    const auto t = static_cast<std::int64_t>(std::floor(axis_bound(spec, cset) + kBoundarySlack));
    const double per_axis = 2.0 * static_cast<double>(t) + 1.0;
    if (2.0 * spec.kappa * std::log(per_axis) > std::log(static_cast<double>(cap)) + 1e-12)
        throw ConstellationTooLarge("constellation exceeds enumeration cap");
    DataVector cur(static_cast<std::size_t>(spec.kappa), GaussInt{-t, -t});
    while (true) {
        out.push_back(cur);
        int k = spec.kappa - 1;
        // odometer over (re, im) pairs, least significant last, so the output
        // order is lexicographic in (re_1, im_1, re_2, im_2, ...)
        while (k >= 0) {
            if (cur[k].im < t) {
                ++cur[k].im;
                break;
            }
            if (cur[k].re < t) {
                ++cur[k].re;
                cur[k].im = -t;
                break;
            }
            cur[k] = {-t, -t};
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

// Largest codeword energy max_s ||G s||^2 over the constellation.  Cubic
// shapes use the box vertices (the max of a convex function over a box);
// spherical shapes with unitary G and kappa >= 2 use the largest integer
// below the radius bound (every such integer is a sum of 2*kappa squares).
// Everything else enumerates, subject to the cap.
inline double max_codeword_energy(const CodeSpec& spec, const ConstellationSpec& cset,
                                  std::size_t cap = 1'000'000) {
    if (cset.shape == Shape::Cubic) {
        const auto t = static_cast<std::int64_t>(std::floor(axis_bound(spec, cset) + kBoundarySlack));
        if (t == 0) return 0.0;
        const int k = spec.kappa;
        double best = 0.0;
        CVec s(k);
        const auto td = static_cast<double>(t);
        for (std::uint64_t combo = 0; combo < (1ull << (2 * k)); ++combo) {
            for (int j = 0; j < k; ++j) {
                const double re = (combo >> (2 * j)) & 1 ? td : -td;
                const double im = (combo >> (2 * j + 1)) & 1 ? td : -td;
                s[j] = {re, im};
            }
            best = std::max(best, (spec.G * s).squaredNorm());
        }
        return best;
    }
    const double bound = sq_norm_bound(spec, cset) + kBoundarySlack;
    if (spec.kappa >= 2 && spec.is_unitary()) return std::floor(bound);
    double best = 0.0;
    for (const auto& s : enumerate_constellation(spec, cset, cap))
        best = std::max(best, (spec.G * to_cvec(s)).squaredNorm());
    return best;
}

// Scale theta chosen so the maximum-energy codeword meets the per-codeword
// power constraint with equality: (1/T) * theta^2 * max||G s||^2 = rho.
inline double normalize_power(const CodeSpec& spec, const ConstellationSpec& cset,
                              std::size_t cap = 1'000'000) {
    const double max_energy = max_codeword_energy(spec, cset, cap);
    if (max_energy <= 0.0)
        throw EmptyConstellation("constellation has no nonzero codeword; theta undefined");
    return std::sqrt(cset.rho * spec.block_len / max_energy);
}

struct Codeword {
    CMat X;  // n_tx x T transmit block
};

inline Codeword encode(const CodeSpec& spec, double theta, const DataVector& s) {
    if (static_cast<int>(s.size()) != spec.kappa) throw DimensionMismatch("encode: data vector length != kappa");
    const CVec x = theta * (spec.G * to_cvec(s));
    return Codeword{unvec(x, spec.n_tx, spec.block_len)};
}

// F = theta * (I_T kron H) * G, so that vec(H * Mat(theta G s)) = F s.
inline CMat effective_channel(const CodeSpec& spec, double theta, const CMat& h) {
    if (h.cols() != spec.n_tx) throw DimensionMismatch("effective_channel: H needs n_tx columns");
    const Eigen::Index n_rx = h.rows();
    CMat f(n_rx * spec.block_len, spec.kappa);
    for (int t = 0; t < spec.block_len; ++t)
        f.middleRows(t * n_rx, n_rx) = h * spec.G.middleRows(static_cast<Eigen::Index>(t) * spec.n_tx, spec.n_tx);
    f *= theta;
    return f;
}

// Empirical approximate-universality margin: for each SNR in the grid,
// min over codeword pairs of prod_{i<=n} mu_i(Delta Delta') / rho^(n-r)
// with eigenvalues in ascending order and n = min(n_tx, n_rx).  A code whose
// margins stay bounded away from zero across the grid behaves as
// approximately universal at that multiplexing gain.
inline std::vector<double> universality_margin(const CodeSpec& spec, Shape shape, double r,
                                               const std::vector<double>& rho_grid, int n_rx = -1,
                                               std::size_t cap = 100'000,
                                               std::size_t pair_cap = 2'000'000) {
    if (n_rx <= 0) n_rx = spec.n_tx;
    const int n = std::min(spec.n_tx, n_rx);
    std::vector<double> margins;
    margins.reserve(rho_grid.size());
    for (const double rho : rho_grid) {
        const auto cset = make_constellation_spec(shape, r, rho);
        const auto points = enumerate_constellation(spec, cset, cap);
        if (points.size() < 2) throw EmptyPairSet("universality margin needs at least two codewords");
        const std::size_t pairs = points.size() * (points.size() - 1) / 2;
        if (pairs > pair_cap) throw ConstellationTooLarge("universality margin: too many codeword pairs");
        const double theta = normalize_power(spec, cset, cap);
        double min_prod = std::numeric_limits<double>::infinity();
        CVec diff(spec.kappa);
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t j = i + 1; j < points.size(); ++j) {
                for (int k = 0; k < spec.kappa; ++k)
                    diff[k] = (points[i][static_cast<std::size_t>(k)] - points[j][static_cast<std::size_t>(k)]).to_complex();
                const CMat delta = unvec(theta * (spec.G * diff), spec.n_tx, spec.block_len);
                Eigen::SelfAdjointEigenSolver<CMat> eig(delta * delta.adjoint());
                double prod = 1.0;
                for (int k = 0; k < n; ++k) prod *= std::max(eig.eigenvalues()[k], 0.0);
                min_prod = std::min(min_prod, prod);
            }
        }
        margins.push_back(min_prod / std::pow(rho, n - r));
    }
    return margins;
}

}  // namespace ldmt
