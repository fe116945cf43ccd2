// Shared dense linear-algebra aliases and small helpers on top of Eigen.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "latticedmt/errors.hpp"
#include "latticedmt/gaussint.hpp"

namespace ldmt {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Column-by-column vectorization (Eigen storage is column-major, so this is
// exactly vec(A)).
inline CVec vec(const CMat& a) {
    return Eigen::Map<const CVec>(a.data(), a.size());
}

// Inverse of vec: de-stack x into consecutive rows-tuples, column by column.
inline CMat unvec(const CVec& x, Eigen::Index rows, Eigen::Index cols) {
    if (x.size() != rows * cols) throw DimensionMismatch("unvec: size mismatch");
    return Eigen::Map<const CMat>(x.data(), rows, cols);
}

inline CVec to_cvec(const DataVector& s) {
    CVec v(static_cast<Eigen::Index>(s.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = s[static_cast<std::size_t>(k)].to_complex();
    return v;
}

inline DataVector round_to_gauss(const CVec& v) {
    DataVector s(static_cast<std::size_t>(v.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k) s[static_cast<std::size_t>(k)] = round_gauss(v[k]);
    return s;
}

inline double sq_norm(const DataVector& s) {
    double acc = 0.0;
    for (const auto& g : s) acc += g.sq_modulus();
    return acc;
}

}  // namespace ldmt
