// Exact Gaussian-integer arithmetic.
//
// Data vectors and LLL transform matrices live in Z[i] and must stay exact:
// unimodularity and round trips through T, T^-1 are integer statements, not
// floating-point ones.  Entries are overflow-checked 64-bit pairs; wide
// (128-bit) intermediates are used for determinants and inverses.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "latticedmt/errors.hpp"

namespace ldmt {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw NonConvergence("integer overflow in Z[i] add");
    return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw NonConvergence("integer overflow in Z[i] sub");
    return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw NonConvergence("integer overflow in Z[i] mul");
    return r;
}

}  // namespace detail

struct GaussInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    constexpr GaussInt() = default;
    constexpr GaussInt(std::int64_t re, std::int64_t im) : re(re), im(im) {}

    friend constexpr bool operator==(const GaussInt&, const GaussInt&) = default;

    GaussInt operator+(const GaussInt& o) const {
        return {detail::checked_add(re, o.re), detail::checked_add(im, o.im)};
    }
    GaussInt operator-(const GaussInt& o) const {
        return {detail::checked_sub(re, o.re), detail::checked_sub(im, o.im)};
    }
    GaussInt operator-() const { return {detail::checked_sub(0, re), detail::checked_sub(0, im)}; }
    GaussInt operator*(const GaussInt& o) const {
        using detail::checked_add;
        using detail::checked_mul;
        using detail::checked_sub;
        return {checked_sub(checked_mul(re, o.re), checked_mul(im, o.im)),
                checked_add(checked_mul(re, o.im), checked_mul(im, o.re))};
    }
    GaussInt& operator+=(const GaussInt& o) { return *this = *this + o; }
    GaussInt& operator-=(const GaussInt& o) { return *this = *this - o; }

    GaussInt conj() const { return {re, detail::checked_sub(0, im)}; }
    bool is_zero() const { return re == 0 && im == 0; }

    // |z|^2 as a double (exact for desk-scale entries).
    double sq_modulus() const {
        return static_cast<double>(re) * static_cast<double>(re) +
               static_cast<double>(im) * static_cast<double>(im);
    }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

// Data vector s in Z[i]^kappa.
using DataVector = std::vector<GaussInt>;

// Lexicographic order on (re_1, im_1, re_2, im_2, ...); used for the
// documented tie-break rule in decoders.
inline bool lex_less(const DataVector& a, const DataVector& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k].re != b[k].re) return a[k].re < b[k].re;
        if (a[k].im != b[k].im) return a[k].im < b[k].im;
    }
    return a.size() < b.size();
}

// Nearest integer with halves rounded to even, so rounding is deterministic
// and symmetric (matches the default FE_TONEAREST behaviour of llrint).
inline std::int64_t round_half_even(double x) { return std::llrint(x); }

inline GaussInt round_gauss(std::complex<double> z) {
    return {round_half_even(z.real()), round_half_even(z.imag())};
}

// Dense kappa x kappa matrix over Z[i], column-major by (row, col) accessor.
class GaussMat {
public:
    GaussMat() = default;
    GaussMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

    static GaussMat identity(int n) {
        GaussMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = {1, 0};
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    GaussInt& operator()(int r, int c) { return a_[static_cast<std::size_t>(c) * rows_ + r]; }
    const GaussInt& operator()(int r, int c) const {
        return a_[static_cast<std::size_t>(c) * rows_ + r];
    }

    friend bool operator==(const GaussMat&, const GaussMat&) = default;

    // col_dst -= q * col_src
    void axpy_col(const GaussInt& q, int col_src, int col_dst) {
        for (int r = 0; r < rows_; ++r) (*this)(r, col_dst) -= q * (*this)(r, col_src);
    }
    void swap_cols(int c1, int c2) {
        for (int r = 0; r < rows_; ++r) std::swap((*this)(r, c1), (*this)(r, c2));
    }

    DataVector apply(const DataVector& v) const {
        if (static_cast<int>(v.size()) != cols_) throw DimensionMismatch("GaussMat apply: size");
        DataVector out(static_cast<std::size_t>(rows_));
        for (int c = 0; c < cols_; ++c)
            for (int r = 0; r < rows_; ++r) out[r] += (*this)(r, c) * v[c];
        return out;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<GaussInt> a_;
};

namespace detail {

// Gaussian integer on 128-bit components; enough headroom for Bareiss
// elimination at desk-scale dimensions.
struct Gauss128 {
    __int128 re = 0;
    __int128 im = 0;

    static Gauss128 from(const GaussInt& g) { return {g.re, g.im}; }

    Gauss128 operator*(const Gauss128& o) const {
        check(*this);
        check(o);
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Gauss128 operator-(const Gauss128& o) const { return {re - o.re, im - o.im}; }
    bool is_zero() const { return re == 0 && im == 0; }

    // exact division (throws if not exact) - Bareiss divisions always are
    Gauss128 divexact(const Gauss128& d) const {
        const __int128 den = d.re * d.re + d.im * d.im;
        const __int128 nre = re * d.re + im * d.im;
        const __int128 nim = im * d.re - re * d.im;
        if (den == 0 || nre % den != 0 || nim % den != 0)
            throw NonConvergence("inexact division in Z[i] elimination");
        return {nre / den, nim / den};
    }

private:
    static void check(const Gauss128& g) {
        static const __int128 kLimit = static_cast<__int128>(1) << 62;
        if (g.re > kLimit || g.re < -kLimit || g.im > kLimit || g.im < -kLimit)
            throw NonConvergence("integer overflow in Z[i] elimination");
    }
};

// Fraction-free (Bareiss) determinant over Z[i].
inline Gauss128 det_bareiss(const GaussMat& m) {
    const int n = m.rows();
    if (n != m.cols()) throw DimensionMismatch("determinant of non-square matrix");
    if (n == 0) return {1, 0};
    std::vector<Gauss128> a(static_cast<std::size_t>(n) * n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) a[static_cast<std::size_t>(c) * n + r] = Gauss128::from(m(r, c));
    auto at = [&](int r, int c) -> Gauss128& { return a[static_cast<std::size_t>(c) * n + r]; };

    Gauss128 prev{1, 0};
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k).is_zero()) {
            int p = k + 1;
            while (p < n && at(p, k).is_zero()) ++p;
            if (p == n) return {0, 0};
            for (int c = 0; c < n; ++c) std::swap(at(k, c), at(p, c));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                at(i, j) = (at(k, k) * at(i, j) - at(i, k) * at(k, j)).divexact(prev);
        prev = at(k, k);
    }
    Gauss128 det = at(n - 1, n - 1);
    if (sign < 0) det = Gauss128{0, 0} - det;
    return det;
}

}  // namespace detail

// |det T|^2 computed exactly; throws on overflow of the 128-bit headroom.
inline double det_sq_modulus_exact(const GaussMat& t) {
    const auto d = detail::det_bareiss(t);
    const __int128 sq = d.re * d.re + d.im * d.im;
    return static_cast<double>(sq);
}

inline bool is_unimodular(const GaussMat& t) {
    if (t.rows() != t.cols()) throw DimensionMismatch("is_unimodular: non-square matrix");
    const auto d = detail::det_bareiss(t);
    return d.re * d.re + d.im * d.im == 1;
}

// Exact inverse of a unimodular matrix via the adjugate; each cofactor is a
// Bareiss determinant of a minor.  Intended for certificates and tests, not
// hot paths.
inline GaussMat inverse_unimodular(const GaussMat& t) {
    const int n = t.rows();
    if (n != t.cols()) throw DimensionMismatch("inverse_unimodular: non-square matrix");
    const auto det = detail::det_bareiss(t);
    if (det.re * det.re + det.im * det.im != 1)
        throw NonConvergence("inverse_unimodular: matrix is not unimodular");

    GaussMat inv(n, n);
    GaussMat minor(n - 1, n - 1);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            for (int i = 0, mi = 0; i < n; ++i) {
                if (i == r) continue;
                for (int j = 0, mj = 0; j < n; ++j) {
                    if (j == c) continue;
                    minor(mi, mj) = t(i, j);
                    ++mj;
                }
                ++mi;
            }
            auto cof = detail::det_bareiss(minor);
            if ((r + c) % 2 != 0) cof = detail::Gauss128{0, 0} - cof;
            // adj / det with det a unit: multiply by conj(det)
            const detail::Gauss128 val = cof * detail::Gauss128{det.re, -det.im};
            inv(c, r) = {static_cast<std::int64_t>(val.re), static_cast<std::int64_t>(val.im)};
        }
    }
    return inv;
}

}  // namespace ldmt
