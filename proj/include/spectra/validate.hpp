// validate.hpp: invariant suite behind `spectra validate`: each check reports measured vs allowed

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "spectra/dynamics.hpp"
#include "spectra/oracle.hpp"
#include "spectra/overlaps.hpp"
#include "spectra/polynomial.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {

struct InvariantResult {
    std::string name;
    double measured = 0.0;
    double allowed = 0.0;
    bool passed = false;
    double seconds = 0.0;
    std::string note;  // extra context printed under the result line
};

enum class Fault { none, overlap_sign };

struct ValidateOptions {
    bool full = false;
    Fault fault = Fault::none;
};

struct ValidationReport {
    std::vector<InvariantResult> results;
    bool passed() const {
        return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    }
};

namespace detail {

using OverlapFn = std::function<double(std::size_t, std::size_t, double)>;

inline OverlapFn overlap_provider(Fault fault) {
    if (fault == Fault::overlap_sign) {
        // Flips the sign of the upper-triangle odd-parity entries, as a transcription slip would.
        return [](std::size_t m, std::size_t n, double g) {
            const double d = overlap_D(m, n, g);
            return (m < n && (m + n) % 2 == 1) ? -d : d;
        };
    }
    return [](std::size_t m, std::size_t n, double g) { return overlap_D(m, n, g); };
}

inline const std::vector<double>& acceptance_g_grid() {
    static const std::vector<double> g{0.0, 0.25, 0.5, 0.8, 1.0};
    return g;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// Lowest n sorted values of {m*omega0 + c} for both constant shifts.
inline std::vector<double> two_ladders(double omega0, double c_minus, double c_plus, std::size_t n) {
    std::vector<double> v;
    for (std::size_t m = 0; m < n; ++m) {
        v.push_back(omega0 * static_cast<double>(m) + c_minus);
        v.push_back(omega0 * static_cast<double>(m) + c_plus);
    }
    std::sort(v.begin(), v.end());
    v.resize(n);
    return v;
}

}  // namespace detail

/// Runs the invariant suite. `quick` covers every module at a few points; `full` adds the
/// oracle doubling-convergence grid, long-horizon conservation and the direct-propagator check.
inline ValidationReport run_validation(const ValidateOptions& options = {}) {
    ValidationReport report;
    const auto D = detail::overlap_provider(options.fault);

    auto check = [&](std::string name, double allowed, const std::function<double()>& measure) {
        const auto start = std::chrono::steady_clock::now();
        InvariantResult r;
        r.name = std::move(name);
        r.allowed = allowed;
        try {
            r.measured = measure();
            r.passed = std::isfinite(r.measured) && r.measured <= allowed;
        } catch (const std::exception& e) {
            r.name += std::string(" [threw: ") + e.what() + "]";
            r.measured = INFINITY;
            r.passed = false;
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.results.push_back(std::move(r));
    };

    const ModelParams base{1.0, 1.0, 0.5};

    check("overlap symmetry |D_mn - D_nm|, m,n <= 60", 1e-12, [&] {
        double worst = 0.0;
        for (double g : {0.5, 1.5}) {
            for (std::size_t m = 0; m <= 60; ++m) {
                for (std::size_t n = 0; n < m; ++n) worst = std::max(worst, std::abs(D(m, n, g) - D(n, m, g)));
            }
        }
        return worst;
    });

    check("overlap series vs Laguerre recurrence, m,n <= 60, g <= 2", 1e-12, [&] {
        double worst = 0.0;
        for (double g : {0.25, 1.0, 2.0}) {
            for (std::size_t m = 0; m <= 60; ++m) {
                for (std::size_t n = 0; n <= 60; ++n) {
                    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                    worst = std::max(worst, std::abs(D(m, n, g) - sign * displacement_element(m, n, 2.0 * g)));
                }
            }
        }
        return worst;
    });

    check("overlap magnitude max |D_mn| - 1 (must not exceed 0)", 1e-12, [&] {
        double worst = -1.0;
        for (double g : {0.5, 1.5}) {
            for (std::size_t m = 0; m <= 60; ++m) {
                for (std::size_t n = 0; n <= 60; ++n) worst = std::max(worst, std::abs(D(m, n, g)) - 1.0);
            }
        }
        return std::max(0.0, worst);
    });

    check("sector matrix symmetry, N = 42", 1e-12, [&] {
        const double g = base.g();
        Eigen::MatrixXd h(43, 43);
        for (Eigen::Index m = 0; m < 43; ++m) {
            for (Eigen::Index n = 0; n < 43; ++n) {
                h(m, n) = 0.5 * base.Omega * D(static_cast<std::size_t>(m), static_cast<std::size_t>(n), g);
            }
            h(m, m) += base.omega0 * (static_cast<double>(m) - g * g);
        }
        const double own = (h - h.transpose()).cwiseAbs().maxCoeff();
        const double vs_library = (h - build_sector_matrix(base, Sector::plus, 42).matrix()).cwiseAbs().maxCoeff();
        return std::max(own, vs_library);
    });

    check("symmetric eigensolver residual / ||M||, N = 42", 1e-10, [&] {
        const auto m = build_sector_matrix(base, Sector::minus, 42).matrix();
        const auto e = diagonalize_symmetric(m);
        double worst = (e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(m.rows(), m.cols()))
                           .cwiseAbs()
                           .maxCoeff();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            worst = std::max(worst, (m * e.vectors.col(j) - e.values(j) * e.vectors.col(j)).norm() / m.norm());
        }
        return worst;
    });

    check("closed-form roots vs block eigenvalues, orders 1-3, m <= 10", 1e-9, [&] {
        double worst = 0.0;
        for (double Omega : {1.0, 4.0 / 3.0}) {
            for (double g : detail::acceptance_g_grid()) {
                const ModelParams p{1.0, Omega, g};
                for (Sector s : {Sector::minus, Sector::plus}) {
                    for (std::size_t m = 0; m <= 10; ++m) {
                        for (int order = 1; order <= 3; ++order) {
                            const auto dim = static_cast<std::size_t>(order + 1);
                            const auto ev = symmetric_eigenvalues(sector_block(p, s, m, dim));
                            const auto roots = block_roots(p, s, m, order);
                            for (std::size_t i = 0; i < dim; ++i) {
                                worst = std::max(worst, std::abs(roots[i] - ev(static_cast<Eigen::Index>(i))));
                            }
                        }
                    }
                }
            }
        }
        return worst;
    });

    check("quartic residual |P(r)| / max(1, r^4)", 1e-8, [&] {
        double worst = 0.0;
        for (double g : detail::acceptance_g_grid()) {
            const ModelParams p{1.0, 1.0, g};
            for (Sector s : {Sector::minus, Sector::plus}) {
                for (std::size_t m = 0; m <= 10; ++m) {
                    const auto k = order3_coeffs(p, s, m);
                    for (double r : solve_quartic(k).roots) {
                        worst = std::max(worst, std::abs(evaluate_quartic(k, r)) / std::max(1.0, std::pow(r, 4)));
                    }
                }
            }
        }
        return worst;
    });

    check("order-0 ground = -Omega D00/2 - lambda^2/omega0", 1e-12, [&] {
        double worst = 0.0;
        for (double g = 0.0; g <= 1.5 + 1e-9; g += 0.1) {
            const ModelParams p{0.75, 1.0, 0.75 * g};
            const double formula = -0.5 * p.Omega * std::exp(-2.0 * g * g) - p.lambda * p.lambda / p.omega0;
            worst = std::max(worst, std::abs(assemble_spectrum(p, 0, 1).entries[0].energy - formula));
        }
        return worst;
    });

    check("lambda = 0 limit m omega0 +- Omega/2, all orders and exact", 1e-10, [&] {
        const ModelParams p{1.0, 0.8, 0.0};
        const auto expected = detail::two_ladders(1.0, -0.4, 0.4, 10);
        double worst = detail::max_abs_diff(exact_spectrum(p).spectrum.energies(), expected, 10);
        for (int order = 0; order <= 3; ++order) {
            worst = std::max(worst, detail::max_abs_diff(assemble_spectrum(p, order, 10).energies(), expected, 10));
        }
        return worst;
    });

    check("Omega = 0 limit omega0 (m - g^2), doubly degenerate, all orders and exact", 1e-10, [&] {
        const ModelParams p{1.0, 0.0, 0.7};
        const auto expected = detail::two_ladders(1.0, -0.49, -0.49, 10);
        double worst = detail::max_abs_diff(exact_spectrum(p).spectrum.energies(), expected, 10);
        for (int order = 0; order <= 3; ++order) {
            worst = std::max(worst, detail::max_abs_diff(assemble_spectrum(p, order, 10).energies(), expected, 10));
        }
        return worst;
    });

    // order3_low_level(p, 1) is the lowest root of the minus block at m = 1. It tracks the second
    // minus-sector level; the global first excited level sits in the plus sector for g > 0 and is
    // taken from the plus block at m = 0. Both readings are measured against the global level.
    double global_used = 0.0, global_alternative = 0.0;
    check("third order, minus block m = 1 vs exact second minus-sector level", 0.05, [&] {
        double worst = 0.0;
        for (double omega0 : {1.0, 0.75}) {
            for (double g : detail::acceptance_g_grid()) {
                const ModelParams p{omega0, 1.0, g * omega0};
                const double minus1 = symmetric_eigenvalues(build_sector_matrix(p, Sector::minus, 42).matrix())(1);
                const double level1 = exact_spectrum(p).spectrum.energies().at(1);
                const double used = order3_low_level(p, 1);
                worst = std::max(worst, std::abs(used - minus1));
                global_used = std::max(global_used, std::abs(used - level1));
                global_alternative =
                    std::max(global_alternative, std::abs(energy_order3(p, Sector::plus, 0, 0) - level1));
            }
        }
        return worst;
    });
    {
        char note[160];
        std::snprintf(note, sizeof note,
                      "as the global first excited level: minus m = 1 max error %.3e, plus m = 0 max error %.3e",
                      global_used, global_alternative);
        report.results.back().note = note;
    }

    check("exact spectrum vs bare-Fock oracle, lowest 10, default params", 1e-6, [&] {
        return detail::max_abs_diff(exact_spectrum(base).spectrum.energies(), oracle_spectrum(base, 140, 10).energies,
                                    10);
    });

    check("dynamics g = 0: P(t) = cos^2(Omega0 t/2)", 1e-8, [&] {
        const ModelParams p{1.0, 1.0, 0.0};
        const auto times = uniform_times(50.0, 501);
        const auto ts = evolve_population(reconstruct_eigenstates(p, Method::exact), {SpinState::lower, 1.0}, times);
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            worst = std::max(worst, std::abs(ts.population[i] - std::pow(std::cos(0.5 * times[i]), 2)));
        }
        return worst;
    });

    auto conservation = [&](double horizon, std::size_t samples) {
        const auto mapping = map_ion_to_model({1.0, 1.0, 0.8, 0.0});
        const auto ts = evolve_population(reconstruct_eigenstates(mapping.model, Method::exact),
                                          {SpinState::lower, 1.0}, uniform_times(horizon, samples), {true});
        double worst = std::abs(ts.norm[0] - 1.0);
        for (std::size_t i = 0; i < ts.times.size(); ++i) {
            worst = std::max({worst, std::abs(ts.norm[i] - ts.norm[0]), std::abs(ts.energy[i] - ts.energy[0])});
        }
        return worst;
    };

    if (!options.full) {
        check("norm and <H> conservation, t in [0, 50]", 1e-8, [&] { return conservation(50.0, 500); });
        return report;
    }

    check("norm and <H> conservation, t in [0, 200], 2000 samples", 1e-8, [&] { return conservation(200.0, 2000); });

    check("overlap series vs Laguerre recurrence, m,n <= 200, g <= 3", 1e-9, [&] {
        double worst = 0.0;
        for (double g : {2.5, 3.0}) {
            for (std::size_t m = 0; m <= 200; m += 7) {
                for (std::size_t n = 0; n <= 200; n += 5) {
                    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                    worst = std::max(worst, std::abs(D(m, n, g) - sign * displacement_element(m, n, 2.0 * g)));
                }
            }
        }
        return worst;
    });

    check("truncation bound at N = 42, g <= 1.5 (relative to Omega)", 1e-6, [&] {
        double worst = 0.0;
        for (double g = 0.0; g <= 1.5 + 1e-9; g += 0.1) worst = std::max(worst, truncation_bound({1.0, 1.0, g}, 42));
        return worst;
    });

    check("exact spectrum vs doubling-converged oracle, Omega in {1, 4/3}, 5 couplings", 1e-6, [&] {
        double worst = 0.0;
        for (double Omega : {1.0, 4.0 / 3.0}) {
            for (double g : detail::acceptance_g_grid()) {
                const ModelParams p{1.0, Omega, g};
                worst = std::max(worst, detail::max_abs_diff(exact_spectrum(p).spectrum.energies(),
                                                             oracle_spectrum(p, 140, 10).energies, 10));
            }
        }
        return worst;
    });

    check("spectral dynamics vs direct exponentiation of H' (K = 40), t in [0, 20]", 1e-6, [&] {
        const IonParams ion{1.0, 1.0, 0.8, 0.0};
        const auto mapping = map_ion_to_model(ion);
        const InitialState init{SpinState::lower, 1.0};
        const auto times = uniform_times(20.0, 21);
        const auto ts = evolve_population(reconstruct_eigenstates(mapping.model, Method::exact), init, times);
        const std::size_t K = 40;
        const Eigen::MatrixXcd H = build_ion_hamiltonian(ion, K).cast<std::complex<double>>();
        const Eigen::VectorXcd psi0 = initial_state_vector(init, K);
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const Eigen::MatrixXcd U = (std::complex<double>(0.0, -times[i]) * H).exp();
            const Eigen::VectorXcd psi = U * psi0;
            const double p_lower = psi.tail(static_cast<Eigen::Index>(K)).squaredNorm();
            worst = std::max(worst, std::abs(p_lower - ts.population[i]));
        }
        return worst;
    });

    return report;
}

inline std::string format_report(const ValidationReport& report) {
    std::string out;
    char line[512];
    for (const auto& r : report.results) {
        std::snprintf(line, sizeof line, "%s  %-78s measured %.3e  allowed %.1e  (%.2f s)\n", r.passed ? "PASS" : "FAIL",
                      r.name.c_str(), r.measured, r.allowed, r.seconds);
        out += line;
        if (!r.note.empty()) out += "      " + r.note + "\n";
    }
    const auto failed = std::count_if(report.results.begin(), report.results.end(), [](const auto& r) { return !r.passed; });
    std::snprintf(line, sizeof line, "%zu invariants, %zu failed\n", report.results.size(), static_cast<std::size_t>(failed));
    out += line;
    return out;
}

}  // namespace spectra
