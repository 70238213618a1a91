// linalg.hpp: dense symmetric eigensolver front end

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

namespace spectra {

inline constexpr Eigen::Index kMaxDenseSize = 4096;

struct EigenDecomposition {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column j pairs with values[j]
};

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
inline EigenDecomposition diagonalize_symmetric(const Eigen::MatrixXd& matrix, bool want_vectors = true) {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("diagonalize_symmetric: matrix not square");
    if (matrix.rows() > kMaxDenseSize) throw std::invalid_argument("diagonalize_symmetric: matrix too large");
    if (!matrix.allFinite()) throw std::invalid_argument("diagonalize_symmetric: non-finite entries");
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("diagonalize_symmetric: matrix not symmetric");
    }
    if (matrix.rows() == 0) return {};

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        matrix, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("diagonalize_symmetric: eigensolver did not converge");
    }
    EigenDecomposition out;
    out.values = solver.eigenvalues();
    if (want_vectors) out.vectors = solver.eigenvectors();
    return out;
}

inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& matrix) {
    return diagonalize_symmetric(matrix, false).values;
}

}  // namespace spectra
