// run.hpp: sweep and dynamics drivers behind the CLI (computation only, no file I/O)

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "spectra/config.hpp"
#include "spectra/csv.hpp"
#include "spectra/dynamics.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {

struct SweepResult {
    std::vector<SweepRow> rows;          // grid point, then level, then method in config order
    std::vector<std::string> warnings;   // unmet truncation bounds, one per affected grid point
};

inline std::size_t worker_count(std::size_t requested, std::size_t jobs) {
    std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(n, jobs));
}

/// Runs f(i) for i in [0, count) on a small pool. Results must be written to per-index slots;
/// the first exception (lowest index) is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& f) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

inline SweepResult run_sweep(const RunConfig& config) {
    config.validate();
    const auto grid = config.sweep_grid();
    const auto policy = config.truncation();

    struct Point {
        std::vector<SweepRow> rows;
        std::string warning;
    };
    std::vector<Point> points(grid.size());

    parallel_for(grid.size(), worker_count(config.threads, grid.size()), [&](std::size_t i) {
        const double x = grid[i];
        double offset = 0.0;
        ModelParams p;
        if (config.model == ModelKind::ion) {
            const auto mapping = map_ion_to_model({config.Omega0, config.nu, x, config.epsilon});
            p = mapping.model;
            offset = mapping.offset;
        } else {
            p = config.model_at(x);
        }
        std::vector<std::vector<SpectrumEntry>> per_method;
        for (Method m : config.orders) {
            if (m == Method::exact) {
                auto ex = exact_spectrum(p, policy);
                if (ex.spectrum.entries.size() < config.levels) {
                    throw ConfigError("levels exceeds the size of the truncated spectrum at N = " +
                                      std::to_string(ex.N));
                }
                if (!ex.warnings.empty()) points[i].warning = "lambda_over_omega0=" + format_double(x) + ": " + ex.warnings[0];
                per_method.push_back(std::move(ex.spectrum.entries));
            } else {
                per_method.push_back(assemble_spectrum(p, method_order(m), config.levels).entries);
            }
        }
        auto& rows = points[i].rows;
        rows.reserve(config.levels * per_method.size());
        for (std::size_t j = 0; j < config.levels; ++j) {
            for (std::size_t k = 0; k < per_method.size(); ++k) {
                const auto& e = per_method[k][j];
                rows.push_back({x, j, config.orders[k], e.sector, e.energy + offset});
            }
        }
    });

    SweepResult out;
    for (auto& pt : points) {
        out.rows.insert(out.rows.end(), pt.rows.begin(), pt.rows.end());
        if (!pt.warning.empty()) out.warnings.push_back(std::move(pt.warning));
    }
    return out;
}

struct DynamicsResult {
    DynamicsColumns columns;
    MethodComparison comparison;
    IonMapping mapping;
};

/// Exact, order-1 and order-3 lower-level populations on a uniform grid over [0, horizon].
inline DynamicsResult run_dynamics(const RunConfig& config) {
    config.validate();
    DynamicsResult out;
    out.mapping = config.dynamics_model();
    ReconstructOptions options;
    options.truncation = config.truncation();
    options.fock_cutoff = config.K;
    options.max_gram_deviation = config.max_gram_deviation;
    const auto times = uniform_times(config.horizon, config.samples);
    out.comparison = compare_methods(out.mapping.model, config.initial_state(), times, {1, 3}, options);
    out.columns.t = times;
    out.columns.exact = out.comparison.exact.population;
    out.columns.order1 = out.comparison.approximate.at(0).population;
    out.columns.order3 = out.comparison.approximate.at(1).population;
    return out;
}

}  // namespace spectra
