// oracles.hpp: brute-force references used only by the test suites

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace spectra::testing {

inline Eigen::MatrixXd annihilation(std::size_t K) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t n = 1; n < K; ++n) {
        a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

// Fock amplitudes of the coherent state |z>, real z, by the ratio recurrence.
inline Eigen::VectorXd coherent_real(double z, std::size_t K) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(K));
    v(0) = std::exp(-0.5 * z * z);
    for (std::size_t n = 1; n < K; ++n) {
        v(static_cast<Eigen::Index>(n)) = v(static_cast<Eigen::Index>(n - 1)) * z / std::sqrt(static_cast<double>(n));
    }
    return v;
}

// (1/sqrt(n!)) (a^dag + shift)^n |-shift>, applied step by step on a Fock cutoff K.
// shift = +g gives |n>_A, shift = -g gives |n>_B.
inline Eigen::VectorXd displaced_fock_bruteforce(std::size_t n, double shift, std::size_t K) {
    const Eigen::MatrixXd adag = annihilation(K).transpose();
    Eigen::VectorXd v = coherent_real(-shift, K);
    for (std::size_t j = 1; j <= n; ++j) {
        v = (adag * v + shift * v) / std::sqrt(static_cast<double>(j));
    }
    return v;
}

// exp[beta (a^dag - a)] from the truncated generator.
inline Eigen::MatrixXd displacement_expm(double beta, std::size_t K) {
    const Eigen::MatrixXd a = annihilation(K);
    const Eigen::MatrixXd gen = beta * (a.transpose() - a);
    return gen.exp();
}

// Complex coherent state amplitudes <n|z> by the ratio recurrence.
inline Eigen::VectorXcd coherent_complex(std::complex<double> z, std::size_t K) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(K));
    v(0) = std::exp(-0.5 * std::norm(z));
    for (std::size_t n = 1; n < K; ++n) {
        v(static_cast<Eigen::Index>(n)) = v(static_cast<Eigen::Index>(n - 1)) * z / std::sqrt(static_cast<double>(n));
    }
    return v;
}

// exp(-i H t) psi by the matrix exponential of the complex generator.
inline Eigen::VectorXcd propagate_expm(const Eigen::MatrixXd& H, const Eigen::VectorXcd& psi, double t) {
    const Eigen::MatrixXcd gen = std::complex<double>(0.0, -t) * H.cast<std::complex<double>>();
    return gen.exp() * psi;
}

// Characteristic polynomial E^4 + c3 E^3 + c2 E^2 + c1 E + c0 of a 4x4 block, by sampling
// det(E I - B) at five points and solving the Vandermonde system.
inline Eigen::Vector4d quartic_by_sampling(const Eigen::Matrix4d& block) {
    Eigen::Matrix<double, 5, 5> V;
    Eigen::Matrix<double, 5, 1> rhs;
    const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
    for (int i = 0; i < 5; ++i) {
        const double e = scale * (static_cast<double>(i) - 2.0);
        const double det = (e * Eigen::Matrix4d::Identity() - block).determinant();
        double pw = 1.0;
        for (int j = 0; j < 5; ++j) {
            V(i, j) = pw;
            pw *= e;
        }
        rhs(i) = det;
    }
    const Eigen::Matrix<double, 5, 1> c = V.fullPivLu().solve(rhs);
    return {c(3), c(2), c(1), c(0)};  // (delta, alpha, beta, gamma)
}

}  // namespace spectra::testing
