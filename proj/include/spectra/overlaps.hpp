// overlaps.hpp: displaced-Fock overlap coefficients and displacement matrix elements

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace spectra {

/// Largest Fock / displaced-level index accepted anywhere in the library.
inline constexpr std::size_t kIndexCap = 512;

namespace detail {

inline void check_index(std::size_t idx, const char* what) {
    if (idx > kIndexCap) {
        throw std::out_of_range(std::string(what) + " index " + std::to_string(idx) +
                                " exceeds cap " + std::to_string(kIndexCap));
    }
}

inline double log_factorial(std::size_t n) {
    static const auto table = [] {
        std::array<double, kIndexCap + 1> t{};
        for (std::size_t i = 0; i <= kIndexCap; ++i) t[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return t;
    }();
    return table.at(n);
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
        else comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

template <class Float>
double overlap_series_mp(std::size_t m, std::size_t n, double g) {
    const Float x = Float(2) * Float(g);
    const Float x2 = x * x;
    Float fm = 1, fn = 1;
    for (std::size_t i = 2; i <= m; ++i) fm *= static_cast<unsigned>(i);
    for (std::size_t i = 2; i <= n; ++i) fn *= static_cast<unsigned>(i);
    Float term = pow(x, static_cast<int>(m + n)) / sqrt(fm * fn);
    Float sum = term;
    const std::size_t kmax = std::min(m, n);
    for (std::size_t k = 0; k < kmax; ++k) {
        term *= -Float(static_cast<unsigned>((m - k) * (n - k)));
        term /= Float(static_cast<unsigned>(k + 1)) * x2;
        sum += term;
    }
    sum *= exp(-Float(2) * Float(g) * Float(g));
    return static_cast<double>(sum);
}

// L_n^{(alpha)}(x) as mantissa * exp(log_scale); forward three-term recurrence.
struct ScaledValue {
    double mantissa = 1.0;
    double log_scale = 0.0;
};

inline ScaledValue laguerre_scaled(std::size_t n, double alpha, double x) {
    if (n == 0) return {1.0, 0.0};
    constexpr double kBig = 1e150;
    const double kLogBig = std::log(kBig);
    double prev = 1.0;
    double cur = 1.0 + alpha - x;
    double log_scale = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        const double jd = static_cast<double>(j);
        const double next = ((2.0 * jd + 1.0 + alpha - x) * cur - (jd + alpha) * prev) / (jd + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            log_scale += kLogBig;
        }
    }
    return {cur, log_scale};
}

}  // namespace detail

/// Dimensionless displacement g = lambda / omega0. Restricted to g >= 0.
class DisplacementParam {
public:
    DisplacementParam() = default;
    explicit DisplacementParam(double g) : g_(g) {
        if (!std::isfinite(g) || g < 0.0) {
            throw std::invalid_argument("displacement g must be finite and non-negative");
        }
    }
    double value() const { return g_; }
    friend bool operator==(const DisplacementParam&, const DisplacementParam&) = default;

private:
    double g_ = 0.0;
};

/// Number of decimal digits lost to cancellation when summing the D_mn series in double.
inline double overlap_cancellation_digits(std::size_t m, std::size_t n, double g) {
    if (g == 0.0) return 0.0;
    const double half = 0.5 * (detail::log_factorial(m) + detail::log_factorial(n));
    const double lx = std::log(2.0 * g);
    double max_log = -INFINITY;
    const std::size_t kmax = std::min(m, n);
    for (std::size_t k = 0; k <= kmax; ++k) {
        const double lt = half + static_cast<double>(m + n - 2 * k) * lx - detail::log_factorial(m - k) -
                          detail::log_factorial(n - k) - detail::log_factorial(k);
        max_log = std::max(max_log, lt);
    }
    const double log_abs_sum = max_log + std::log(static_cast<double>(kmax + 1)) - 2.0 * g * g;
    return std::max(0.0, log_abs_sum / std::log(10.0));
}

/// Overlap coefficient D_mn between the two displaced Fock ladders,
///   (-1)^n D_mn = A<m|n>B,  D_mn = e^{-2g^2} sum_k (-1)^k sqrt(m!n!) (2g)^{m+n-2k} / ((m-k)!(n-k)!k!).
///
/// The alternating series is summed in double with compensation when the
/// terms stay within an order of magnitude of the result; otherwise the
/// terms are regenerated exactly by their ratio recurrence in a binary
/// floating type wide enough to absorb the cancellation (up to ~180 lost
/// digits, which covers every index up to the cap for g <= 3).
inline double overlap_D(std::size_t m, std::size_t n, DisplacementParam gp) {
    detail::check_index(m, "overlap_D row");
    detail::check_index(n, "overlap_D column");
    const double g = gp.value();
    if (g == 0.0) return m == n ? 1.0 : 0.0;

    const double lost = overlap_cancellation_digits(m, n, g);
    if (lost <= 1.0) {
        const double half = 0.5 * (detail::log_factorial(m) + detail::log_factorial(n));
        const double lx = std::log(2.0 * g);
        detail::CompensatedSum acc;
        const std::size_t kmax = std::min(m, n);
        for (std::size_t k = 0; k <= kmax; ++k) {
            const double lt = half + static_cast<double>(m + n - 2 * k) * lx - detail::log_factorial(m - k) -
                              detail::log_factorial(n - k) - detail::log_factorial(k) - 2.0 * g * g;
            const double t = std::exp(lt);
            acc.add((k % 2 == 0) ? t : -t);
        }
        return acc.value();
    }
    namespace mp = boost::multiprecision;
    if (lost <= 30.0) return detail::overlap_series_mp<mp::cpp_bin_float_50>(m, n, g);
    if (lost <= 80.0) return detail::overlap_series_mp<mp::cpp_bin_float_100>(m, n, g);
    if (lost <= 180.0) {
        using Float200 = mp::number<mp::cpp_bin_float<200>>;
        return detail::overlap_series_mp<Float200>(m, n, g);
    }
    throw std::domain_error("overlap_D: cancellation beyond supported precision (m=" + std::to_string(m) +
                            ", n=" + std::to_string(n) + ", g=" + std::to_string(g) + ")");
}

inline double overlap_D(std::size_t m, std::size_t n, double g) { return overlap_D(m, n, DisplacementParam(g)); }

/// <k| exp[beta (a^dagger - a)] |n> for real beta, via the associated-Laguerre form
/// sqrt(lo!/hi!) s^{hi-lo} e^{-beta^2/2} L_lo^{(hi-lo)}(beta^2), s = beta if k >= n else -beta.
inline double displacement_element(std::size_t k, std::size_t n, double beta) {
    detail::check_index(k, "displacement_element row");
    detail::check_index(n, "displacement_element column");
    if (!std::isfinite(beta)) throw std::invalid_argument("displacement_element: beta must be finite");
    if (beta == 0.0) return k == n ? 1.0 : 0.0;

    const std::size_t hi = std::max(k, n);
    const std::size_t lo = std::min(k, n);
    const std::size_t diff = hi - lo;
    const double s = (k >= n) ? beta : -beta;
    const double x = beta * beta;

    const auto lag = detail::laguerre_scaled(lo, static_cast<double>(diff), x);
    if (lag.mantissa == 0.0) return 0.0;
    const double log_mag = -0.5 * x + 0.5 * (detail::log_factorial(lo) - detail::log_factorial(hi)) +
                           static_cast<double>(diff) * std::log(std::abs(s)) + lag.log_scale +
                           std::log(std::abs(lag.mantissa));
    double sign = (lag.mantissa < 0.0) ? -1.0 : 1.0;
    if (s < 0.0 && diff % 2 == 1) sign = -sign;
    return sign * std::exp(log_mag);
}

enum class DisplacedBasis { A, B };

/// Fock amplitude <n|z> of a coherent state.
inline std::complex<double> coherent_amplitude(std::size_t n, std::complex<double> z) {
    detail::check_index(n, "coherent_amplitude");
    const double r = std::abs(z);
    if (r == 0.0) return n == 0 ? 1.0 : 0.0;
    const double log_mag = -0.5 * r * r + static_cast<double>(n) * std::log(r) - 0.5 * detail::log_factorial(n);
    return std::polar(std::exp(log_mag), static_cast<double>(n) * std::arg(z));
}

/// A<n|alpha> (basis A, |n>_A = D(-g)|n>) or B<n|alpha> (basis B, |n>_B = D(g)|n>).
inline std::complex<double> coherent_in_displaced_basis(std::size_t n, DisplacementParam gp,
                                                        std::complex<double> alpha,
                                                        DisplacedBasis basis = DisplacedBasis::A) {
    detail::check_index(n, "coherent_in_displaced_basis");
    const double g = gp.value();
    // D(+-g) D(alpha) = exp(-+ i g Im alpha) D(alpha +- g)
    const double sgn = (basis == DisplacedBasis::A) ? 1.0 : -1.0;
    const std::complex<double> phase = std::polar(1.0, -sgn * g * alpha.imag());
    return phase * coherent_amplitude(n, alpha + sgn * g);
}

/// Immutable (N+1)x(N+1) table of D_mn for one g.
class OverlapTable {
public:
    OverlapTable(DisplacementParam g, std::size_t N) : g_(g), entries_(N + 1, N + 1) {
        detail::check_index(N, "OverlapTable size");
        for (std::size_t m = 0; m <= N; ++m) {
            for (std::size_t n = m; n <= N; ++n) {
                const double d = overlap_D(m, n, g);
                entries_(m, n) = d;
                entries_(n, m) = d;
            }
        }
    }

    DisplacementParam g() const { return g_; }
    std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
    double operator()(std::size_t m, std::size_t n) const {
        return entries_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    }
    const Eigen::MatrixXd& matrix() const { return entries_; }

private:
    DisplacementParam g_;
    Eigen::MatrixXd entries_;
};

/// Shared cache keyed by (g, N). Tables are rebuilt, never patched, when either changes.
inline std::shared_ptr<const OverlapTable> cached_overlap_table(DisplacementParam g, std::size_t N) {
    static std::mutex mutex;
    static std::map<std::pair<std::uint64_t, std::size_t>, std::shared_ptr<const OverlapTable>> cache;
    constexpr std::size_t kMaxEntries = 64;

    std::uint64_t bits = 0;
    const double gv = g.value();
    std::memcpy(&bits, &gv, sizeof bits);
    const auto key = std::make_pair(bits, N);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto table = std::make_shared<const OverlapTable>(g, N);
    std::lock_guard lock(mutex);
    if (cache.size() >= kMaxEntries) cache.clear();
    cache.emplace(key, table);
    return table;
}

}  // namespace spectra
