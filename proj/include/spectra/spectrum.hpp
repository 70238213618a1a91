// spectrum.hpp: parity-sector matrices and their spectra: closed-form block orders 0-3 and exact
//
// The ansatz sum_n c_n |n>_A|e> + d_n |n>_B|g> with d_n = +-(-1)^n c_n reduces the
// Schroedinger equation to one real symmetric matrix per parity sector,
//   H^+-_{mn} = omega0 (m - g^2) delta_mn +- (Omega/2) D_mn.
// An order-p approximation keeps a contiguous (p+1)x(p+1) principal block.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spectra/linalg.hpp"
#include "spectra/overlaps.hpp"
#include "spectra/polynomial.hpp"

namespace spectra {

struct ModelParams {
    double omega0 = 1.0;  // boson frequency
    double Omega = 1.0;   // spin splitting
    double lambda = 0.0;  // spin-boson coupling

    double g() const { return lambda / omega0; }

    void validate() const {
        if (!(std::isfinite(omega0) && omega0 > 0.0)) throw std::invalid_argument("ModelParams: omega0 must be > 0");
        if (!(std::isfinite(Omega) && Omega >= 0.0)) throw std::invalid_argument("ModelParams: Omega must be >= 0");
        if (!(std::isfinite(lambda) && lambda >= 0.0)) throw std::invalid_argument("ModelParams: lambda must be >= 0");
        if (!std::isfinite(g())) throw std::invalid_argument("ModelParams: lambda/omega0 not finite");
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class Sector { minus, plus };

inline double sector_sign(Sector s) { return s == Sector::plus ? 1.0 : -1.0; }
inline std::string_view to_string(Sector s) { return s == Sector::plus ? "plus" : "minus"; }

enum class Method { order0, order1, order2, order3, exact };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::order0: return "0";
        case Method::order1: return "1";
        case Method::order2: return "2";
        case Method::order3: return "3";
        case Method::exact: return "exact";
    }
    return "?";
}

inline int method_order(Method m) {
    if (m == Method::exact) throw std::invalid_argument("exact method has no block order");
    return static_cast<int>(m);
}

inline Method method_from_order(int order) {
    if (order < 0 || order > 3) throw std::invalid_argument("order must be in 0..3");
    return static_cast<Method>(order);
}

inline Method parse_method(std::string_view s) {
    if (s == "exact") return Method::exact;
    if (s == "0") return Method::order0;
    if (s == "1") return Method::order1;
    if (s == "2") return Method::order2;
    if (s == "3") return Method::order3;
    throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

class SectorMatrix {
public:
    SectorMatrix(Sector sector, Eigen::MatrixXd matrix) : sector_(sector), matrix_(std::move(matrix)) {}

    Sector sector() const { return sector_; }
    /// N + 1
    std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }
    double diag(std::size_t m) const { return matrix_(idx(m), idx(m)); }
    double offdiag(std::size_t m, std::size_t n) const { return matrix_(idx(m), idx(n)); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    /// Contiguous principal block of `dim` rows starting at m.
    Eigen::MatrixXd block(std::size_t m, std::size_t dim) const {
        if (m + dim > size()) throw std::out_of_range("SectorMatrix::block outside matrix");
        return matrix_.block(idx(m), idx(m), idx(dim), idx(dim));
    }

private:
    static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
    Sector sector_;
    Eigen::MatrixXd matrix_;
};

namespace detail {

inline Eigen::MatrixXd sector_entries(const ModelParams& p, Sector s, const OverlapTable& table, std::size_t first,
                                      std::size_t dim) {
    const double half = 0.5 * sector_sign(s) * p.Omega;
    const double g2 = p.g() * p.g();
    Eigen::MatrixXd out(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = half * table(first + i, first + j);
        }
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +=
            p.omega0 * (static_cast<double>(first + i) - g2);
    }
    return out;
}

}  // namespace detail

inline SectorMatrix build_sector_matrix(const ModelParams& params, Sector sector, std::size_t N) {
    params.validate();
    if (N < 3) throw std::invalid_argument("build_sector_matrix: N must be >= 3");
    const auto table = cached_overlap_table(DisplacementParam(params.g()), N);
    return SectorMatrix(sector, detail::sector_entries(params, sector, *table, 0, N + 1));
}

/// Principal block of the sector matrix, rows/cols m .. m+dim-1, without building the full matrix.
inline Eigen::MatrixXd sector_block(const ModelParams& params, Sector sector, std::size_t m, std::size_t dim) {
    params.validate();
    if (dim == 0) throw std::invalid_argument("sector_block: empty block");
    // Table sizes are rounded up so neighbouring blocks share one cached table.
    const std::size_t last = m + dim - 1;
    const std::size_t table_N = (last / 16 + 1) * 16 - 1;
    const auto table = cached_overlap_table(DisplacementParam(params.g()), std::min(table_N, kIndexCap));
    return detail::sector_entries(params, sector, *table, m, dim);
}

// ---------------------------------------------------------------------------
// Closed-form block energies

/// Zeroth order: E^+-_m = m omega0 - lambda^2/omega0 +- Omega D_mm / 2.
inline double energy_order0(const ModelParams& p, Sector s, std::size_t m) {
    p.validate();
    const double g = p.g();
    return static_cast<double>(m) * p.omega0 - p.lambda * g + sector_sign(s) * 0.5 * p.Omega * overlap_D(m, m, g);
}

/// Both roots (ascending) of the 2x2 block of sector s starting at m.
inline std::array<double, 2> energy_order1(const ModelParams& p, Sector s, std::size_t m) {
    const Eigen::MatrixXd b = sector_block(p, s, m, 2);
    const double mean = 0.5 * (b(0, 0) + b(1, 1));
    const double half_gap = 0.5 * std::hypot(b(1, 1) - b(0, 0), 2.0 * b(0, 1));
    return {mean - half_gap, mean + half_gap};
}

/// First-order ground state,
/// E_0 = omega0 (1/2 - g^2) - (Omega/4)(D00 + D11) - (1/2) sqrt([omega0 + (Omega/2)(D00 - D11)]^2 + Omega^2 D01^2).
inline double order1_ground(const ModelParams& p) {
    p.validate();
    const double g = p.g();
    const double d00 = overlap_D(0, 0, g), d11 = overlap_D(1, 1, g), d01 = overlap_D(0, 1, g);
    const double w = p.omega0 + 0.5 * p.Omega * (d00 - d11);
    return p.omega0 * (0.5 - g * g) - 0.25 * p.Omega * (d00 + d11) -
           0.5 * std::sqrt(w * w + p.Omega * p.Omega * d01 * d01);
}

/// First-order excited pair E^-_{k+1}, E^+_{k+1} (lower, upper): the 2x2 block at k of sector (-1)^k,
/// E = omega0 (1/2 + k - g^2) + (-1)^k (Omega/4)(Dkk + Dk+1k+1)
///     +- (1/2) sqrt([omega0 - (-1)^k (Omega/2)(Dkk - Dk+1k+1)]^2 + Omega^2 Dkk+1^2).
inline std::array<double, 2> order1_excited(const ModelParams& p, std::size_t k) {
    p.validate();
    const double g = p.g();
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double dkk = overlap_D(k, k, g), dll = overlap_D(k + 1, k + 1, g), dkl = overlap_D(k, k + 1, g);
    const double centre = p.omega0 * (0.5 + static_cast<double>(k) - g * g) + sign * 0.25 * p.Omega * (dkk + dll);
    const double w = p.omega0 - sign * 0.5 * p.Omega * (dkk - dll);
    const double half = 0.5 * std::sqrt(w * w + p.Omega * p.Omega * dkl * dkl);
    return {centre - half, centre + half};
}

/// Sector whose 2x2 block at k carries the first-order excited pair E^+-_{k+1}.
inline Sector order1_excited_sector(std::size_t k) { return (k % 2 == 0) ? Sector::plus : Sector::minus; }

/// Three roots (ascending) of the 3x3 block of sector s starting at m.
inline std::array<double, 3> energy_order2(const ModelParams& p, Sector s, std::size_t m) {
    const Eigen::Matrix3d b = sector_block(p, s, m, 3);
    return solve_cubic(cubic_char_coeffs(b));
}

/// Quartic coefficients of the 4x4 block of sector s starting at m.
inline QuarticCoeffs order3_coeffs(const ModelParams& p, Sector s, std::size_t m) {
    const Eigen::Matrix4d b = sector_block(p, s, m, 4);
    return quartic_char_coeffs(b);
}

/// Four roots (ascending) of the 4x4 block of sector s starting at m.
inline std::array<double, 4> order3_roots(const ModelParams& p, Sector s, std::size_t m) {
    const Eigen::Matrix4d b = sector_block(p, s, m, 4);
    const auto roots = solve_quartic(quartic_char_coeffs(b)).roots;
#ifndef NDEBUG
    // Debug builds cross-check every closed-form solve against direct diagonalization.
    const Eigen::VectorXd ev = symmetric_eigenvalues(b);
    for (int i = 0; i < 4; ++i) {
        if (std::abs(roots[static_cast<std::size_t>(i)] - ev(i)) > 1e-8 * std::max(1.0, std::abs(ev(i)))) {
            throw std::logic_error("order3_roots: closed-form root disagrees with block eigenvalue");
        }
    }
#endif
    return roots;
}

/// Root of rank `branch` (0 = lowest) of the 4x4 block of sector s starting at m.
inline double energy_order3(const ModelParams& p, Sector s, std::size_t m, std::size_t branch) {
    if (branch > 3) throw std::invalid_argument("energy_order3: branch must be 0..3");
    return order3_roots(p, s, m)[branch];
}

/// Ground (m = 0) and first excited (m = 1) levels of the third-order form: lowest root of the
/// minus-sector block at m. m = 1 is the next level of the minus sector; for g > 0 the overall first
/// excited level lies in the plus sector (lowest root of the plus block at 0).
inline double order3_low_level(const ModelParams& p, std::size_t m) {
    if (m > 1) throw std::invalid_argument("order3_low_level: m must be 0 or 1");
    return energy_order3(p, Sector::minus, m, 0);
}

/// Higher third-order levels E^+-_{m+2}; the branch rank within the block is explicit,
/// default 1 (second lowest root).
inline double order3_excited_level(const ModelParams& p, Sector s, std::size_t m, std::size_t branch = 1) {
    return energy_order3(p, s, m, branch);
}

/// Closed-form roots (ascending) of the (order+1)-dimensional block of sector s starting at m.
inline std::vector<double> block_roots(const ModelParams& p, Sector s, std::size_t m, int order) {
    switch (order) {
        case 0: return {energy_order0(p, s, m)};
        case 1: {
            const auto r = energy_order1(p, s, m);
            return {r.begin(), r.end()};
        }
        case 2: {
            const auto r = energy_order2(p, s, m);
            return {r.begin(), r.end()};
        }
        case 3: {
            const auto r = order3_roots(p, s, m);
            return {r.begin(), r.end()};
        }
        default: throw std::invalid_argument("block_roots: order must be 0..3");
    }
}

// ---------------------------------------------------------------------------
// Level labelling and spectra

/// Which block (start m) and root rank approximate the j-th level of a sector at a given order.
///
/// order 0: the diagonal entry m = j.
/// order 1: the pairing of the closed-form ground/excited expressions: minus-sector ground from the
///          block at 0, then the 2x2 block at k in sector (-1)^k supplies that sector's levels k and k+1.
/// orders 2, 3: the block that holds level j one row in from its top edge (m = j - 1, rank 1),
///          ground from the block at 0.
struct BlockLabel {
    std::size_t m = 0;
    std::size_t branch = 0;
    friend bool operator==(const BlockLabel&, const BlockLabel&) = default;
};

inline BlockLabel block_for_level(int order, Sector s, std::size_t j) {
    switch (order) {
        case 0: return {j, 0};
        case 1: {
            if (s == Sector::minus) {
                if (j == 0) return {0, 0};
                const std::size_t k = (j % 2 == 1) ? j : j - 1;
                return {k, j - k};
            }
            const std::size_t k = (j % 2 == 0) ? j : j - 1;
            return {k, j - k};
        }
        case 2:
        case 3: {
            const std::size_t m = j == 0 ? 0 : j - 1;
            return {m, j - m};
        }
        default: throw std::invalid_argument("block_for_level: order must be 0..3");
    }
}

struct SpectrumEntry {
    Method method = Method::exact;
    Sector sector = Sector::minus;
    std::size_t block_start = 0;  // block m for orders 0-3; level index within the sector for exact
    std::size_t branch = 0;       // root rank within the block (0 for exact)
    double energy = 0.0;
};

struct SpectrumResult {
    ModelParams params;
    std::vector<SpectrumEntry> entries;  // ascending energy

    std::vector<double> energies() const {
        std::vector<double> e;
        e.reserve(entries.size());
        for (const auto& x : entries) e.push_back(x.energy);
        return e;
    }
};

namespace detail {

// Ascending energy; exact ties broken by sector (minus first), then block, then branch.
inline void sort_entries(std::vector<SpectrumEntry>& entries) {
    std::stable_sort(entries.begin(), entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.sector != b.sector) return a.sector == Sector::minus;
        if (a.block_start != b.block_start) return a.block_start < b.block_start;
        return a.branch < b.branch;
    });
}

}  // namespace detail

/// Lowest n_levels approximate energies at the given order, both sectors merged.
inline SpectrumResult assemble_spectrum(const ModelParams& p, int order, std::size_t n_levels) {
    p.validate();
    if (n_levels == 0) throw std::invalid_argument("assemble_spectrum: n_levels must be >= 1");
    const Method method = method_from_order(order);
    SpectrumResult out{p, {}};
    for (Sector s : {Sector::minus, Sector::plus}) {
        // Blocks are shared between neighbouring levels; evaluate each once.
        std::vector<std::pair<std::size_t, std::vector<double>>> memo;
        for (std::size_t j = 0; j < n_levels; ++j) {
            const auto lab = block_for_level(order, s, j);
            auto it = std::find_if(memo.begin(), memo.end(), [&](const auto& e) { return e.first == lab.m; });
            if (it == memo.end()) {
                memo.emplace_back(lab.m, block_roots(p, s, lab.m, order));
                it = std::prev(memo.end());
            }
            out.entries.push_back({method, s, lab.m, lab.branch, it->second.at(lab.branch)});
        }
    }
    detail::sort_entries(out.entries);
    out.entries.resize(n_levels);
    return out;
}

struct TruncationPolicy {
    std::size_t initial_N = 42;
    double tolerance = 1e-6;   // bound on dropped off-diagonal couplings |Omega^+-_{m,n}|
    std::size_t watch_rows = 0;  // rows m = 0..watch_rows whose couplings to n > N are inspected
    std::size_t window = 20;   // dropped columns inspected: N < n <= N + window
    std::size_t max_N = 256;
    bool auto_extend = true;
};

/// Largest |(Omega/2) D_mn| with m <= watch_rows and N < n <= N + window.
inline double truncation_bound(const ModelParams& p, std::size_t N, std::size_t watch_rows = 0,
                               std::size_t window = 20) {
    p.validate();
    const double g = p.g();
    double worst = 0.0;
    for (std::size_t m = 0; m <= watch_rows; ++m) {
        for (std::size_t n = N + 1; n <= N + window; ++n) {
            worst = std::max(worst, std::abs(0.5 * p.Omega * overlap_D(m, n, g)));
        }
    }
    return worst;
}

struct ExactSpectrum {
    SpectrumResult spectrum;
    std::size_t N = 0;
    double truncation_bound = 0.0;
    bool bound_satisfied = true;
    std::vector<std::string> warnings;
};

struct TruncationChoice {
    std::size_t N = 0;
    double bound = 0.0;
    bool satisfied = true;
};

/// N starts at policy.initial_N and grows (step 8) until the dropped couplings fall below
/// policy.tolerance or max_N is reached.
inline TruncationChoice choose_truncation(const ModelParams& p, const TruncationPolicy& policy = {}) {
    p.validate();
    std::size_t N = std::max<std::size_t>(policy.initial_N, 3);
    double bound = truncation_bound(p, N, policy.watch_rows, policy.window);
    while (policy.auto_extend && bound >= policy.tolerance && N < policy.max_N) {
        N = std::min(policy.max_N, N + 8);
        bound = truncation_bound(p, N, policy.watch_rows, policy.window);
    }
    return {N, bound, bound < policy.tolerance};
}

/// Merged eigenvalues of both sector matrices at the size picked by choose_truncation.
/// An unmet truncation bound is reported as a warning, not an error.
inline ExactSpectrum exact_spectrum(const ModelParams& p, const TruncationPolicy& policy = {}) {
    const auto choice = choose_truncation(p, policy);
    ExactSpectrum out;
    out.N = choice.N;
    out.truncation_bound = choice.bound;
    out.bound_satisfied = choice.satisfied;
    if (!out.bound_satisfied) {
        out.warnings.push_back("dropped couplings reach " + std::to_string(choice.bound) + " at N = " +
                               std::to_string(choice.N) + " (tolerance " + std::to_string(policy.tolerance) + ")");
    }
    out.spectrum.params = p;
    for (Sector s : {Sector::minus, Sector::plus}) {
        const auto values = symmetric_eigenvalues(build_sector_matrix(p, s, choice.N).matrix());
        for (Eigen::Index j = 0; j < values.size(); ++j) {
            out.spectrum.entries.push_back({Method::exact, s, static_cast<std::size_t>(j), 0, values(j)});
        }
    }
    detail::sort_entries(out.spectrum.entries);
    return out;
}

inline ExactSpectrum exact_spectrum(const ModelParams& p, std::size_t N) {
    TruncationPolicy policy;
    policy.initial_N = N;
    return exact_spectrum(p, policy);
}

}  // namespace spectra
