// dynamics.hpp: spin population dynamics from exact or block-approximate eigenstates

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectra/linalg.hpp"
#include "spectra/oracle.hpp"
#include "spectra/overlaps.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {

enum class SpinState { lower, upper };

/// sigma_z: lower = |g> (sigma_z = -1). sigma_x: lower = the lower-energy eigenstate of the bare
/// spin term, which is (|e> - |g>)/sqrt(2) in model-frame coordinates, both for the model itself
/// and for a sigma_z-conjugated ion frame.
enum class ReadoutFrame { sigma_z, sigma_x };

struct InitialState {
    SpinState spin = SpinState::lower;
    std::complex<double> alpha = 0.0;  // coherent amplitude of the boson
    ReadoutFrame frame = ReadoutFrame::sigma_z;

    void validate() const {
        if (!(std::abs(alpha) <= 4.0)) throw std::invalid_argument("InitialState: |alpha| must be <= 4");
    }
};

struct GramError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReconstructOptions {
    TruncationPolicy truncation{};
    std::size_t fock_cutoff = 0;         // 0: chosen from N and g
    double max_gram_deviation = 0.05;    // order-p bases beyond this are rejected
};

/// Eigenstates written in the bare basis |0,e>..|K-1,e>, |0,g>..|K-1,g> (columns of `vectors`).
struct EigenBasis {
    ModelParams params;
    Method method = Method::exact;
    std::size_t N = 0;
    std::size_t K = 0;
    std::vector<double> energies;
    std::vector<Sector> sectors;
    Eigen::MatrixXd vectors;
    double gram_deviation = 0.0;       // max |V^T V - I| after renormalization
    double bare_norm_deficit = 0.0;    // largest 1 - |v|^2 lost to the Fock cutoff before renormalization
};

struct TimeSeries {
    std::vector<double> times;       // units of 1/omega0 (1/nu for ion parameters)
    std::vector<double> population;  // lower-level population
    std::vector<double> norm;        // filled when invariants are tracked
    std::vector<double> energy;      // <H>(t), filled when invariants are tracked
    Method method = Method::exact;
    std::string time_unit = "1/omega0";
    ModelParams params;
    std::size_t N = 0;
    std::size_t K = 0;
    ReadoutFrame frame = ReadoutFrame::sigma_z;
    double gram_deviation = 0.0;
    double projection_deficit = 0.0;  // 1 - |V^T psi0|^2
};

inline std::size_t default_fock_cutoff(std::size_t N, double g) {
    const double extra = 40.0 + 8.0 * g * std::sqrt(static_cast<double>(N + 1)) + 4.0 * g * g;
    return std::min<std::size_t>(kIndexCap, N + 1 + static_cast<std::size_t>(std::ceil(extra)));
}

namespace detail {

// <k|D(beta)|n>, k < K, n <= N.
inline Eigen::MatrixXd displacement_block(std::size_t K, std::size_t N, double beta) {
    Eigen::MatrixXd d(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(N + 1));
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t n = 0; n <= N; ++n) {
            d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) = displacement_element(k, n, beta);
        }
    }
    return d;
}

}  // namespace detail

/// Builds eigenstates sum_n c_n (|n>_A|e> +- (-1)^n |n>_B|g>)/sqrt(2) from sector eigenvectors c.
/// exact: full sector diagonalization. order-p: each level's block eigenvector, supported on that
/// block's rows only, with the closed-form block root as its energy.
inline EigenBasis reconstruct_eigenstates(const ModelParams& params, Method method,
                                          const ReconstructOptions& options = {}) {
    params.validate();
    const auto choice = choose_truncation(params, options.truncation);
    const std::size_t N = choice.N;
    const double g = params.g();
    const std::size_t K = options.fock_cutoff ? options.fock_cutoff : default_fock_cutoff(N, g);
    if (K > kIndexCap) throw std::invalid_argument("reconstruct_eigenstates: Fock cutoff above index cap");
    if (K < N + 1) throw std::invalid_argument("reconstruct_eigenstates: Fock cutoff must be at least N + 1");

    const Eigen::MatrixXd to_a = detail::displacement_block(K, N, -g);  // |n>_A = D(-g)|n>
    Eigen::MatrixXd to_b = detail::displacement_block(K, N, g);         // |n>_B = D(g)|n>
    for (std::size_t n = 1; n <= N; n += 2) to_b.col(static_cast<Eigen::Index>(n)) *= -1.0;

    EigenBasis out;
    out.params = params;
    out.method = method;
    out.N = N;
    out.K = K;

    std::vector<Eigen::VectorXd> coeffs;
    for (Sector s : {Sector::minus, Sector::plus}) {
        const SectorMatrix sm = build_sector_matrix(params, s, N);
        if (method == Method::exact) {
            const auto eig = diagonalize_symmetric(sm.matrix());
            for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
                out.energies.push_back(eig.values(j));
                out.sectors.push_back(s);
                coeffs.push_back(eig.vectors.col(j));
            }
            continue;
        }
        const int order = method_order(method);
        const auto dim = static_cast<std::size_t>(order + 1);
        for (std::size_t j = 0;; ++j) {
            const auto lab = block_for_level(order, s, j);
            if (lab.m + dim > N + 1) break;
            const auto eig = diagonalize_symmetric(sm.block(lab.m, dim));
            Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N + 1));
            c.segment(static_cast<Eigen::Index>(lab.m), static_cast<Eigen::Index>(dim)) =
                eig.vectors.col(static_cast<Eigen::Index>(lab.branch));
            out.energies.push_back(block_roots(params, s, lab.m, order).at(lab.branch));
            out.sectors.push_back(s);
            coeffs.push_back(std::move(c));
        }
    }

    const auto k = static_cast<Eigen::Index>(K);
    out.vectors.resize(2 * k, static_cast<Eigen::Index>(coeffs.size()));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        out.vectors.col(col).head(k) = inv_sqrt2 * (to_a * coeffs[j]);
        out.vectors.col(col).tail(k) = (sector_sign(out.sectors[j]) * inv_sqrt2) * (to_b * coeffs[j]);
        const double norm2 = out.vectors.col(col).squaredNorm();
        out.bare_norm_deficit = std::max(out.bare_norm_deficit, 1.0 - norm2);
        out.vectors.col(col) /= std::sqrt(norm2);
    }
    const Eigen::MatrixXd gram = out.vectors.transpose() * out.vectors;
    out.gram_deviation =
        (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (method != Method::exact && out.gram_deviation > options.max_gram_deviation) {
        throw GramError("order-" + std::string(to_string(method)) + " eigenvectors overlap by up to " +
                        std::to_string(out.gram_deviation) + " (limit " + std::to_string(options.max_gram_deviation) +
                        "); the block approximation is unusable at these parameters");
    }
    return out;
}

/// Spin part of |lower> / |upper> in model-frame coordinates (e, g).
inline std::array<double, 2> spin_vector(SpinState spin, ReadoutFrame frame) {
    const double r = 1.0 / std::sqrt(2.0);
    if (frame == ReadoutFrame::sigma_z) {
        return spin == SpinState::lower ? std::array<double, 2>{0.0, 1.0} : std::array<double, 2>{1.0, 0.0};
    }
    return spin == SpinState::lower ? std::array<double, 2>{r, -r} : std::array<double, 2>{r, r};
}

/// Spin state (x) coherent state in the bare basis of size 2K.
inline Eigen::VectorXcd initial_state_vector(const InitialState& init, std::size_t K) {
    init.validate();
    const auto spin = spin_vector(init.spin, init.frame);
    const auto k = static_cast<Eigen::Index>(K);
    Eigen::VectorXcd psi(2 * k);
    for (Eigen::Index n = 0; n < k; ++n) {
        const auto amp = coherent_amplitude(static_cast<std::size_t>(n), init.alpha);
        psi(n) = spin[0] * amp;
        psi(k + n) = spin[1] * amp;
    }
    return psi;
}

struct EvolveOptions {
    bool track_invariants = false;  // also record norm and <H>
};

/// P_lower(t) = sum_k |<k, lower| sum_j exp(-i E_j t) |psi_j><psi_j|psi_0>|^2.
inline TimeSeries evolve_population(const EigenBasis& basis, const InitialState& init,
                                    const std::vector<double>& times, const EvolveOptions& options = {}) {
    init.validate();
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("evolve_population: times must increase strictly");
    }
    const auto k = static_cast<Eigen::Index>(basis.K);
    const Eigen::VectorXcd psi0 = initial_state_vector(init, basis.K);
    const Eigen::VectorXcd amps = basis.vectors.cast<std::complex<double>>().adjoint() * psi0;
    const double deficit = std::max(0.0, 1.0 - amps.squaredNorm());

    TimeSeries ts;
    ts.times = times;
    ts.method = basis.method;
    ts.params = basis.params;
    ts.N = basis.N;
    ts.K = basis.K;
    ts.frame = init.frame;
    ts.gram_deviation = basis.gram_deviation;
    ts.projection_deficit = deficit;
    // Block vectors are not orthonormal, so the deficit is only a diagnostic for them.
    if (basis.method == Method::exact && deficit > 1e-3) {
        throw std::runtime_error("evolve_population: initial state projection deficit " + std::to_string(deficit) +
                                 " exceeds 1e-3; increase the truncation");
    }

    const auto lower = spin_vector(SpinState::lower, init.frame);
    std::optional<BareHamiltonian> hamiltonian;
    if (options.track_invariants) hamiltonian = build_bare_hamiltonian(basis.params, basis.K);

    const auto M = static_cast<Eigen::Index>(basis.energies.size());
    Eigen::VectorXd re(M), im(M);
    ts.population.reserve(times.size());
    for (double t : times) {
        for (Eigen::Index j = 0; j < M; ++j) {
            const std::complex<double> c = std::polar(1.0, -basis.energies[static_cast<std::size_t>(j)] * t) * amps(j);
            re(j) = c.real();
            im(j) = c.imag();
        }
        const Eigen::VectorXd psi_re = basis.vectors * re;
        const Eigen::VectorXd psi_im = basis.vectors * im;
        const Eigen::VectorXd proj_re = lower[0] * psi_re.head(k) + lower[1] * psi_re.tail(k);
        const Eigen::VectorXd proj_im = lower[0] * psi_im.head(k) + lower[1] * psi_im.tail(k);
        ts.population.push_back(proj_re.squaredNorm() + proj_im.squaredNorm());
        if (hamiltonian) {
            ts.norm.push_back(psi_re.squaredNorm() + psi_im.squaredNorm());
            ts.energy.push_back(psi_re.dot(hamiltonian->matrix * psi_re) + psi_im.dot(hamiltonian->matrix * psi_im));
        }
    }
    return ts;
}

/// n uniformly spaced samples on [0, horizon].
inline std::vector<double> uniform_times(double horizon, std::size_t n = 2000) {
    if (n < 2 || !(horizon > 0.0)) throw std::invalid_argument("uniform_times: need n >= 2 and horizon > 0");
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = horizon * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

struct DivergenceReport {
    Method method = Method::order1;
    double max_abs_diff = 0.0;
    std::optional<double> first_exceed_time;  // first t with |dP| > threshold
    double threshold = 0.05;
    double gram_deviation = 0.0;
};

struct MethodComparison {
    TimeSeries exact;
    std::vector<TimeSeries> approximate;
    std::vector<DivergenceReport> reports;
};

inline DivergenceReport divergence(const TimeSeries& exact, const TimeSeries& approx, double threshold = 0.05) {
    if (exact.times.size() != approx.times.size()) throw std::invalid_argument("divergence: mismatched grids");
    DivergenceReport r;
    r.method = approx.method;
    r.threshold = threshold;
    r.gram_deviation = approx.gram_deviation;
    for (std::size_t i = 0; i < exact.times.size(); ++i) {
        const double d = std::abs(exact.population[i] - approx.population[i]);
        r.max_abs_diff = std::max(r.max_abs_diff, d);
        if (!r.first_exceed_time && d > threshold) r.first_exceed_time = exact.times[i];
    }
    return r;
}

/// Exact and order-p traces on one grid, with max |dP| and first crossing of |dP| > 0.05.
inline MethodComparison compare_methods(const ModelParams& params, const InitialState& init,
                                        const std::vector<double>& times, const std::vector<int>& orders = {1, 3},
                                        const ReconstructOptions& options = {}) {
    MethodComparison out;
    out.exact = evolve_population(reconstruct_eigenstates(params, Method::exact, options), init, times);
    for (int order : orders) {
        auto series = evolve_population(reconstruct_eigenstates(params, method_from_order(order), options), init, times);
        out.reports.push_back(divergence(out.exact, series));
        out.approximate.push_back(std::move(series));
    }
    return out;
}

}  // namespace spectra
