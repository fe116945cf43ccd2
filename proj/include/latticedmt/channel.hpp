// Quasi-static MIMO fading channel: Y = H X + W with unit-variance
// circularly symmetric complex Gaussian noise, plus mutual information and
// outage classification.  All rates are in bits (base-2 logs throughout).
#pragma once

#include <cmath>

#include "latticedmt/codes.hpp"
#include "latticedmt/linalg.hpp"
#include "latticedmt/rng.hpp"

namespace ldmt {

struct ChannelRealization {
    CMat H;            // n_rx x n_tx fading matrix
    double rho = 1.0;  // SNR, linear scale

    int n_rx() const { return static_cast<int>(H.rows()); }
    int n_tx() const { return static_cast<int>(H.cols()); }
};

// i.i.d. Rayleigh fading: entries CN(0, 1).
inline ChannelRealization sample_rayleigh(int n_rx, int n_tx, double rho, Rng& rng) {
    if (n_rx < 1 || n_tx < 1) throw DimensionMismatch("sample_rayleigh: dimensions must be >= 1");
    CMat h(n_rx, n_tx);
    for (int c = 0; c < n_tx; ++c)
        for (int r = 0; r < n_rx; ++r) h(r, c) = rng.complex_normal();
    return {std::move(h), rho};
}

// Rician fading with K-factor k: deterministic all-ones line-of-sight
// component plus scattered Rayleigh part, normalized to unit per-entry power.
inline ChannelRealization sample_rician(int n_rx, int n_tx, double k_factor, double rho, Rng& rng) {
    if (n_rx < 1 || n_tx < 1) throw DimensionMismatch("sample_rician: dimensions must be >= 1");
    if (k_factor < 0.0) throw OutOfRange("sample_rician: K-factor must be >= 0");
    const double los = std::sqrt(k_factor / (k_factor + 1.0));
    const double nlos = std::sqrt(1.0 / (k_factor + 1.0));
    CMat h(n_rx, n_tx);
    for (int c = 0; c < n_tx; ++c)
        for (int r = 0; r < n_rx; ++r) h(r, c) = los + nlos * rng.complex_normal();
    return {std::move(h), rho};
}

struct ReceivedBlock {
    CMat Y;  // n_rx x T received block
    CVec y;  // vec(Y), column by column
    CMat W;  // the noise actually added (test hook)
};

// Y = H X + noise_scale * W, W entries CN(0, 1); noise_scale 0 gives the
// noiseless test mode.
inline ReceivedBlock transmit(const ChannelRealization& ch, const Codeword& cw, Rng& rng,
                              double noise_scale = 1.0) {
    if (cw.X.rows() != ch.H.cols()) throw DimensionMismatch("transmit: X rows must match H columns");
    CMat w = CMat::Zero(ch.H.rows(), cw.X.cols());
    if (noise_scale != 0.0)
        for (Eigen::Index c = 0; c < w.cols(); ++c)
            for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = noise_scale * rng.complex_normal();
    CMat y_mat = ch.H * cw.X + w;
    CVec y_vec = vec(y_mat);
    return {std::move(y_mat), std::move(y_vec), std::move(w)};
}

// log2 det(I + rho H H'), in bits, via Cholesky of the (positive definite)
// Gram matrix.
inline double mutual_info(const ChannelRealization& ch) {
    const Eigen::Index n = ch.H.rows();
    const CMat a = CMat::Identity(n, n) + ch.rho * (ch.H * ch.H.adjoint());
    Eigen::LLT<CMat> llt(a);
    if (llt.info() != Eigen::Success) {
        // A >= I, so this only happens through roundoff; fall back to eigenvalues.
        Eigen::SelfAdjointEigenSolver<CMat> eig(a);
        double bits = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) bits += std::log2(std::max(eig.eigenvalues()[i], 1.0));
        return bits;
    }
    double bits = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) bits += 2.0 * std::log2(llt.matrixLLT()(i, i).real());
    return std::max(bits, 0.0);
}

// Membership in the epsilon-no-outage set: mutual information strictly above
// (r + eps) * log2(rho) bits.
inline bool in_no_outage(const ChannelRealization& ch, double r, double eps) {
    if (eps <= 0.0) throw OutOfRange("in_no_outage: eps must be > 0");
    if (ch.rho <= 1.0) throw OutOfRange("in_no_outage: needs rho > 1");
    return mutual_info(ch) > (r + eps) * std::log2(ch.rho);
}

}  // namespace ldmt
