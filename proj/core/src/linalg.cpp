#include "ofr/linalg.hpp"

#include <complex>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ofr/error.hpp"

namespace ofr::linalg {

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a, bool vectors) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    SymmetricEigen out;
    Eigen::MatrixXd w = a;  // column major, overwritten by the vectors
    out.values.resize(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, w.data(), n,
                                     out.values.data());
    if (info != 0) throw NumericalError("dsyevd failed, info = " + std::to_string(info));
    if (vectors) out.vectors = std::move(w);
    return out;
}

GeneralEigen general_eigen(const Eigen::MatrixXcd& a, bool want_left) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    GeneralEigen out;
    Eigen::MatrixXcd w = a;
    out.values.resize(n);
    out.right.resize(n, n);
    if (want_left) out.left.resize(n, n);
    auto* vals = reinterpret_cast<lapack_complex_double*>(out.values.data());
    auto* vr = reinterpret_cast<lapack_complex_double*>(out.right.data());
    auto* vl = want_left ? reinterpret_cast<lapack_complex_double*>(out.left.data()) : nullptr;
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, want_left ? 'V' : 'N', 'V', n,
                                    reinterpret_cast<lapack_complex_double*>(w.data()), n, vals, vl,
                                    n, vr, n);
    if (info != 0) {
        double norm = a.cwiseAbs().maxCoeff();
        throw NumericalError("zgeev did not converge (info = " + std::to_string(info) +
                             ", n = " + std::to_string(n) + ", max |a_ij| = " + std::to_string(norm) +
                             ")");
    }
    return out;
}

std::pair<double, double> hermitian_bounds(const Eigen::MatrixXcd& a) {
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace ofr::linalg
