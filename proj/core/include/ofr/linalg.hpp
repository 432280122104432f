#pragma once

#include <Eigen/Dense>

namespace ofr::linalg {

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns, orthonormal
};

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a, bool vectors = true);

struct GeneralEigen {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd right;  // columns, unit 2-norm
    Eigen::MatrixXcd left;   // empty unless requested
};

// Complex non-Hermitian eigenproblem (LAPACK zgeev).
GeneralEigen general_eigen(const Eigen::MatrixXcd& a, bool want_left = false);

// extreme eigenvalues of the Hermitian part (A + A^H)/2
std::pair<double, double> hermitian_bounds(const Eigen::MatrixXcd& a);

}  // namespace ofr::linalg
