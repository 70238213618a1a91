// oracle.hpp: bare Fock x spin Hamiltonians, diagonalized directly as an independent reference

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectra/linalg.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {

inline constexpr std::size_t kMaxFockCutoff = 4096;

/// H = omega0 a^dag a + lambda (a^dag + a) sigma_z + (Omega/2) sigma_x on Fock states 0..K-1.
/// Basis order: |0,e> .. |K-1,e>, |0,g> .. |K-1,g>.
struct BareHamiltonian {
    ModelParams params;
    std::size_t fock_cutoff = 0;
    Eigen::MatrixXd matrix;
};

struct IonParams {
    double Omega0 = 1.0;   // Rabi frequency
    double nu = 1.0;       // trap frequency
    double g = 0.0;        // dimensionless coupling; the energy scale of the coupling is g * nu
    double epsilon = 0.0;  // detuning

    friend bool operator==(const IonParams&, const IonParams&) = default;
};

/// How spin labels of the mapped model relate to the ion frame.
struct FrameDescriptor {
    // The ion Hamiltonian carries -(Omega0/2) sigma_x; conjugating by sigma_z turns it into
    // +(Omega0/2) sigma_x and leaves sigma_z (and therefore sigma_z populations) unchanged.
    bool sigma_z_conjugated = false;

    std::string describe() const {
        return sigma_z_conjugated ? "ion frame = sigma_z-conjugated model frame" : "model frame";
    }
};

struct IonMapping {
    ModelParams model;
    double offset = 0.0;  // H' = (conjugated) H_model + offset
    FrameDescriptor frame;
};

namespace detail {

inline void check_cutoff(std::size_t K) {
    if (K < 8) throw std::invalid_argument("Fock cutoff must be >= 8");
    if (K > kMaxFockCutoff) throw std::invalid_argument("Fock cutoff exceeds " + std::to_string(kMaxFockCutoff));
}

// omega a^dag a + c_e (a^dag + a) on the e block, c_g (a^dag + a) on the g block,
// constant spin terms z sigma_z + x sigma_x.
inline Eigen::MatrixXd two_level_boson_matrix(std::size_t K, double omega, double c_e, double c_g, double z,
                                              double x) {
    const auto k = static_cast<Eigen::Index>(K);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    for (Eigen::Index n = 0; n < k; ++n) {
        h(n, n) = omega * static_cast<double>(n) + z;
        h(k + n, k + n) = omega * static_cast<double>(n) - z;
        h(n, k + n) = x;
        h(k + n, n) = x;
        if (n + 1 < k) {
            const double s = std::sqrt(static_cast<double>(n + 1));
            h(n, n + 1) = h(n + 1, n) = c_e * s;
            h(k + n, k + n + 1) = h(k + n + 1, k + n) = c_g * s;
        }
    }
    return h;
}

}  // namespace detail

inline BareHamiltonian build_bare_hamiltonian(const ModelParams& params, std::size_t K) {
    params.validate();
    detail::check_cutoff(K);
    return {params, K,
            detail::two_level_boson_matrix(K, params.omega0, params.lambda, -params.lambda, 0.0, 0.5 * params.Omega)};
}

/// H' = -(Omega0/2) sigma_x + nu a^dag a + g nu (a^dag + a) sigma_z + epsilon sigma_z + g^2 nu.
inline Eigen::MatrixXd build_ion_hamiltonian(const IonParams& ion, std::size_t K) {
    detail::check_cutoff(K);
    if (!(ion.nu > 0.0)) throw std::invalid_argument("IonParams: nu must be > 0");
    const double c = ion.g * ion.nu;
    Eigen::MatrixXd h = detail::two_level_boson_matrix(K, ion.nu, c, -c, ion.epsilon, -0.5 * ion.Omega0);
    h.diagonal().array() += ion.g * ion.g * ion.nu;
    return h;
}

/// Maps H' (epsilon = 0) onto the model: omega0 = nu, Omega = Omega0, lambda = g nu, offset g^2 nu.
inline IonMapping map_ion_to_model(const IonParams& ion) {
    if (ion.epsilon != 0.0) {
        throw std::invalid_argument(
            "map_ion_to_model: nonzero detuning breaks the parity decoupling d_n = +-(-1)^n c_n; only epsilon = 0 is "
            "supported");
    }
    if (!(ion.nu > 0.0)) throw std::invalid_argument("IonParams: nu must be > 0");
    if (!(ion.Omega0 >= 0.0) || !(ion.g >= 0.0)) {
        throw std::invalid_argument("IonParams: Omega0 and g must be >= 0");
    }
    IonMapping out;
    out.model = ModelParams{ion.nu, ion.Omega0, ion.g * ion.nu};
    out.model.validate();
    out.offset = ion.g * ion.g * ion.nu;
    out.frame.sigma_z_conjugated = true;
    return out;
}

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleSpectrum {
    std::vector<double> energies;  // lowest n_levels, ascending
    std::size_t K = 0;             // cutoff that passed the stability check
    double change = 0.0;           // max level shift between K and K + 20
};

/// Lowest n_levels eigenvalues of the bare Hamiltonian. Starting at K, the cutoff is doubled until
/// the levels move by less than `stability` when K grows by 20.
inline OracleSpectrum oracle_spectrum(const ModelParams& params, std::size_t K, std::size_t n_levels,
                                      double stability = 1e-8) {
    detail::check_cutoff(K);
    if (n_levels == 0 || n_levels > 2 * K) throw std::invalid_argument("oracle_spectrum: bad n_levels");
    auto lowest = [&](std::size_t cutoff) {
        const auto values = symmetric_eigenvalues(build_bare_hamiltonian(params, cutoff).matrix);
        return std::vector<double>(values.data(), values.data() + static_cast<Eigen::Index>(n_levels));
    };
    double last_change = 0.0;
    for (std::size_t cutoff = K; cutoff + 20 <= kMaxFockCutoff; cutoff *= 2) {
        const auto a = lowest(cutoff);
        const auto b = lowest(cutoff + 20);
        last_change = 0.0;
        for (std::size_t i = 0; i < n_levels; ++i) last_change = std::max(last_change, std::abs(a[i] - b[i]));
        if (last_change < stability) return {a, cutoff, last_change};
    }
    throw ConvergenceError("oracle_spectrum: cutoff did not converge (last change " + std::to_string(last_change) +
                           ")");
}

}  // namespace spectra
