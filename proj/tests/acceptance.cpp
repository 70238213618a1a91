// Acceptance run: one PASS/FAIL line per criterion, followed by the measured quantities.
//
//   acceptance               all criteria
//   acceptance --criterion N one criterion (exit status 0 iff it passes)

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "spectra/spectra.hpp"

using namespace spectra;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void detail_line(const char* fmt, double a, double b) {
    std::printf("    ");
    std::printf(fmt, a, b);
    std::printf("\n");
}

const std::vector<double> kCouplings{0.0, 0.25, 0.5, 0.8, 1.0};
const std::vector<double> kSplittings{1.0, 4.0 / 3.0};

// Oracle equivalence of the displaced-basis spectrum.
bool criterion1() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t max_K = 0, max_N = 0;
    for (double Omega : kSplittings) {
        for (double g : kCouplings) {
            const ModelParams p{1.0, Omega, g};
            const auto ex = exact_spectrum(p);
            const auto oracle = oracle_spectrum(p, 140, 10);
            for (std::size_t i = 0; i < 10; ++i) {
                worst = std::max(worst, std::abs(ex.spectrum.entries[i].energy - oracle.energies[i]));
            }
            max_K = std::max(max_K, oracle.K);
            max_N = std::max(max_N, ex.N);
        }
    }
    const double t = since(t0);
    const bool ok = worst <= 1e-6 && t <= 30.0;
    std::printf("criterion 1 %s: exact spectrum vs bare-Fock oracle, lowest 10 levels\n", ok ? "PASS" : "FAIL");
    detail_line("max |dE| = %.3e (limit 1e-6), runtime %.2f s (limit 30 s)", worst, t);
    detail_line("largest N used = %.0f, largest converged oracle cutoff K = %.0f", static_cast<double>(max_N),
                static_cast<double>(max_K));
    return ok;
}

// Closed-form roots against direct block eigenvalues.
bool criterion2() {
    const auto t0 = Clock::now();
    double worst = 0.0, worst_paired = 0.0;
    for (double Omega : kSplittings) {
        for (double g : kCouplings) {
            const ModelParams p{1.0, Omega, g};
            for (Sector s : {Sector::minus, Sector::plus}) {
                for (std::size_t m = 0; m <= 10; ++m) {
                    for (int order = 1; order <= 3; ++order) {
                        const auto dim = static_cast<std::size_t>(order + 1);
                        const auto ev = symmetric_eigenvalues(build_sector_matrix(p, s, 42).block(m, dim));
                        const auto roots = block_roots(p, s, m, order);
                        for (std::size_t i = 0; i < dim; ++i) {
                            worst = std::max(worst, std::abs(roots[i] - ev(static_cast<Eigen::Index>(i))));
                        }
                    }
                }
            }
            // The explicit first-order expressions against their blocks.
            const auto b0 = symmetric_eigenvalues(build_sector_matrix(p, Sector::minus, 42).block(0, 2));
            worst_paired = std::max(worst_paired, std::abs(order1_ground(p) - b0(0)));
            for (std::size_t k = 0; k <= 9; ++k) {
                const auto ev = symmetric_eigenvalues(build_sector_matrix(p, order1_excited_sector(k), 42).block(k, 2));
                const auto pair = order1_excited(p, k);
                worst_paired = std::max({worst_paired, std::abs(pair[0] - ev(0)), std::abs(pair[1] - ev(1))});
            }
        }
    }
    const double t = since(t0);
    const bool ok = std::max(worst, worst_paired) <= 1e-9 && t <= 5.0;
    std::printf("criterion 2 %s: closed-form roots (orders 1-3, m <= 10, both sectors) vs block eigenvalues\n",
                ok ? "PASS" : "FAIL");
    detail_line("max |root - eigenvalue| = %.3e (limit 1e-9), runtime %.2f s (limit 5 s)", worst, t);
    detail_line("explicit first-order ground/excited expressions: max deviation %.3e, limit %.0e", worst_paired, 1e-9);
    return ok;
}

// Third-order spectrum tracking the exact one along the omega0 = Omega sweep.
bool criterion3() {
    constexpr std::size_t levels = 4;
    constexpr double bound = 0.02;  // fraction of omega0
    std::array<std::array<double, levels>, 4> worst{};  // [order][level]
    std::array<double, levels> worst_at{};
    for (int i = 0; i <= 50; ++i) {
        const double g = 0.02 * i;
        const ModelParams p{1.0, 1.0, g};
        const auto exact = exact_spectrum(p).spectrum.energies();
        for (int order : {0, 1, 3}) {
            const auto approx = assemble_spectrum(p, order, levels).energies();
            for (std::size_t j = 0; j < levels; ++j) {
                const double d = std::abs(approx[j] - exact[j]);
                if (order == 3 && d > worst[3][j]) worst_at[j] = g;
                worst[static_cast<std::size_t>(order)][j] = std::max(worst[static_cast<std::size_t>(order)][j], d);
            }
        }
    }
    bool within = true, ordered = true;
    for (std::size_t j = 0; j < levels; ++j) {
        within = within && worst[3][j] <= bound;
        ordered = ordered && worst[3][j] < worst[1][j] && worst[1][j] < worst[0][j];
    }
    const bool ok = within && ordered;
    std::printf("criterion 3 %s: order-3 lowest 4 levels within 2%% of omega0 on g in [0, 1], omega0 = Omega\n",
                ok ? "PASS" : "FAIL");
    std::printf("    bound sub-check %s, ordering sub-check (order 3 < order 1 < order 0, per level) %s\n",
                within ? "PASS" : "FAIL", ordered ? "PASS" : "FAIL");
    for (std::size_t j = 0; j < levels; ++j) {
        std::printf("    level %zu: grid-max |dE| order 0 = %.4f, order 1 = %.4f, order 3 = %.4f (at g = %.2f)\n", j,
                    worst[0][j], worst[1][j], worst[3][j], worst_at[j]);
    }
    return ok;
}

// Zeroth-order ground state equals the generalized-RWA expression.
bool criterion4() {
    double worst = 0.0;
    RunConfig c;
    c.omega0 = 0.75;
    c.Omega = 1.0;
    c.orders = {Method::order0, Method::order1};
    c.levels = 2;
    c.sweep_stop = 1.5;
    c.sweep_step = 0.01;
    std::size_t checked = 0;
    for (const auto& row : run_sweep(c).rows) {
        if (row.method != Method::order0 || row.level_index != 0) continue;
        const double g = row.lambda_over_omega0;
        const double lambda = c.omega0 * g;
        const double expected = -0.5 * c.Omega * std::exp(-2.0 * g * g) - lambda * lambda / c.omega0;
        worst = std::max(worst, std::abs(row.energy - expected));
        ++checked;
    }
    const bool ok = worst <= 1e-12 && checked == 151;
    std::printf("criterion 4 %s: order-0 ground = -Omega D00/2 - lambda^2/omega0 (omega0 = 0.75 Omega)\n",
                ok ? "PASS" : "FAIL");
    detail_line("max deviation %.3e (limit 1e-12) over %.0f sweep points", worst, static_cast<double>(checked));
    return ok;
}

std::vector<double> ladder(double omega0, double shift_a, double shift_b, std::size_t n) {
    std::vector<double> v;
    for (std::size_t m = 0; m < n; ++m) {
        v.push_back(omega0 * static_cast<double>(m) + shift_a);
        v.push_back(omega0 * static_cast<double>(m) + shift_b);
    }
    std::sort(v.begin(), v.end());
    v.resize(n);
    return v;
}

// Trivial limits of every method.
bool criterion5() {
    constexpr std::size_t n = 12;
    double worst_lambda = 0.0, worst_Omega = 0.0;
    auto compare = [&](const ModelParams& p, const std::vector<double>& expected, double& worst) {
        const auto ex = exact_spectrum(p).spectrum.energies();
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(ex[i] - expected[i]));
        for (int order = 0; order <= 3; ++order) {
            const auto e = assemble_spectrum(p, order, n).energies();
            for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(e[i] - expected[i]));
        }
    };
    for (auto [omega0, Omega] : {std::pair{1.0, 1.0}, std::pair{0.75, 1.0}, std::pair{1.0, 0.3}}) {
        compare({omega0, Omega, 0.0}, ladder(omega0, -0.5 * Omega, 0.5 * Omega, n), worst_lambda);
    }
    for (double g : {0.3, 0.8, 1.5}) {
        compare({1.0, 0.0, g}, ladder(1.0, -g * g, -g * g, n), worst_Omega);
    }
    const bool ok = worst_lambda <= 1e-10 && worst_Omega <= 1e-10;
    std::printf("criterion 5 %s: trivial limits, orders 0-3 and exact, lowest %zu levels\n", ok ? "PASS" : "FAIL", n);
    detail_line("lambda = 0: max |E - (m omega0 +- Omega/2)| = %.3e; Omega = 0: max |E - omega0 (m - g^2)| = %.3e",
                worst_lambda, worst_Omega);
    return ok;
}

// Unitarity, the free-spin limit and agreement with direct propagation.
bool criterion6() {
    const auto t0 = Clock::now();
    const IonParams ion{1.0, 1.0, 0.8, 0.0};
    const auto mapping = map_ion_to_model(ion);
    const InitialState init{SpinState::lower, 1.0};
    const auto basis = reconstruct_eigenstates(mapping.model, Method::exact);

    const auto long_run = evolve_population(basis, init, uniform_times(200.0, 2000), {true});
    double drift = std::abs(long_run.norm[0] - 1.0);
    for (std::size_t i = 0; i < long_run.times.size(); ++i) {
        drift = std::max({drift, std::abs(long_run.norm[i] - long_run.norm[0]),
                          std::abs(long_run.energy[i] - long_run.energy[0])});
    }

    const auto free_map = map_ion_to_model({1.0, 1.0, 0.0, 0.0});
    const auto free_times = uniform_times(200.0, 2000);
    const auto free_run = evolve_population(reconstruct_eigenstates(free_map.model, Method::exact), init, free_times);
    double free_dev = 0.0;
    for (std::size_t i = 0; i < free_times.size(); ++i) {
        free_dev = std::max(free_dev, std::abs(free_run.population[i] - std::pow(std::cos(0.5 * free_times[i]), 2)));
    }

    // Direct exponentiation of the ion Hamiltonian on a 40-state Fock cutoff.
    const std::size_t K = 40;
    const Eigen::MatrixXcd H = build_ion_hamiltonian(ion, K).cast<std::complex<double>>();
    const Eigen::VectorXcd psi0 = initial_state_vector(init, K);
    const auto times = uniform_times(20.0, 81);
    const auto spectral = evolve_population(basis, init, times);
    double prop_dev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Eigen::VectorXcd psi = (std::complex<double>(0.0, -times[i]) * H).exp() * psi0;
        prop_dev = std::max(prop_dev, std::abs(psi.tail(static_cast<Eigen::Index>(K)).squaredNorm() -
                                               spectral.population[i]));
    }
    const double t = since(t0);
    const bool ok = drift <= 1e-8 && free_dev <= 1e-8 && prop_dev <= 1e-6 && t <= 60.0;
    std::printf("criterion 6 %s: dynamics unitarity, g = 0 limit, spectral vs direct propagation\n",
                ok ? "PASS" : "FAIL");
    detail_line("norm/<H> drift on [0, 200] = %.3e (limit 1e-8); g = 0 vs cos^2(Omega0 t/2) = %.3e (limit 1e-8)", drift,
                free_dev);
    detail_line("spectral vs exp(-iH't), K = 40, t <= 20: %.3e (limit 1e-6); runtime %.2f s (limit 60 s)", prop_dev, t);
    return ok;
}

// Unexplained variance fraction of the best single sinusoid (free frequency, phase and offset).
double sinusoid_residual(const std::vector<double>& t, const std::vector<double>& y) {
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    const double var = (yv.array() - yv.mean()).square().sum();
    double best = INFINITY;
    for (int k = 1; k <= 8000; ++k) {
        const double w = 4.0 * k / 8000.0;
        Eigen::MatrixXd A(n, 3);
        for (Eigen::Index i = 0; i < n; ++i) {
            A(i, 0) = 1.0;
            A(i, 1) = std::cos(w * t[static_cast<std::size_t>(i)]);
            A(i, 2) = std::sin(w * t[static_cast<std::size_t>(i)]);
        }
        const Eigen::Vector3d c = (A.transpose() * A).ldlt().solve(A.transpose() * yv);
        best = std::min(best, (A * c - yv).squaredNorm());
    }
    return best / var;
}

// Trapped-ion traces: structure, order-1 vs order-3 divergence, frozen exact samples.
bool criterion7() {
    // numpy reference: |g> population under H' with K = 160, at t = 0, 5, ..., 50.
    const std::vector<double> frozen_1{1.0000000000000002, 0.5103548677797151, 0.16079115536671415,
                                       0.2919943753613643, 0.6572489503918064, 0.9306544292450376,
                                       0.4544012348500136, 0.12978672016938794, 0.31955258347562726,
                                       0.7086437164935553, 0.9149900698261618};
    const std::vector<double> frozen_075{1.0, 0.6669319951520964, 0.2920424880223018, 0.13864075488099434,
                                         0.18025142634845742, 0.6652431172459292, 0.9392522166516065,
                                         0.746222066470103, 0.4713882068201236, 0.10261771900496747,
                                         0.12076979339026389};
    bool ok = true;
    std::vector<std::string> lines;
    for (double Omega0 : {1.0, 0.75}) {
        RunConfig c;
        c.model = ModelKind::ion;
        c.Omega0 = Omega0;
        c.g = 0.8;
        c.alpha = 1.0;
        c.horizon = 50.0;
        c.samples = 1001;
        c.max_gram_deviation = 0.5;
        const auto run = run_dynamics(c);
        const auto& col = run.columns;
        const auto& frozen = Omega0 == 1.0 ? frozen_1 : frozen_075;
        double fixture_dev = 0.0;
        for (std::size_t k = 0; k < frozen.size(); ++k) {
            fixture_dev = std::max(fixture_dev, std::abs(col.exact[100 * k] - frozen[k]));
        }
        const double residual = sinusoid_residual(col.t, col.exact);
        const auto& r1 = run.comparison.reports.at(0);
        const auto& r3 = run.comparison.reports.at(1);
        const bool pass = fixture_dev <= 1e-6 && residual > 0.005 && r1.max_abs_diff > r3.max_abs_diff;
        ok = ok && pass;
        char buf[512];
        std::snprintf(buf, sizeof buf,
                      "    Omega0/nu = %.2f %s: max |dP| order 1 = %.4f > order 3 = %.4f; frozen exact samples "
                      "max dev %.2e (limit 1e-6);\n      best single sinusoid leaves %.2f%% of variance (must exceed "
                      "0.5%%); first |dP| > 0.05 at t = %.2f (order 1), %.2f (order 3); eigenvector overlap %.3f / %.3f",
                      Omega0, pass ? "PASS" : "FAIL", r1.max_abs_diff, r3.max_abs_diff, fixture_dev, 100.0 * residual,
                      r1.first_exceed_time.value_or(NAN), r3.first_exceed_time.value_or(NAN), r1.gram_deviation,
                      r3.gram_deviation);
        lines.emplace_back(buf);
    }
    std::printf("criterion 7 %s: trapped-ion traces at g = 0.8, alpha = 1, Omega0/nu in {1, 3/4}, horizon 50/nu\n",
                ok ? "PASS" : "FAIL");
    for (const auto& l : lines) std::printf("%s\n", l.c_str());
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<bool()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                      criterion5, criterion6, criterion7};
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
            return 2;
        }
    }
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
        return 2;
    }
    bool all = true;
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) {
        if (only && k != only) continue;
        try {
            all = criteria[static_cast<std::size_t>(k - 1)]() && all;
        } catch (const std::exception& e) {
            std::printf("criterion %d FAIL: threw %s\n", k, e.what());
            all = false;
        }
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
