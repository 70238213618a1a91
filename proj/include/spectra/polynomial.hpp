// polynomial.hpp: characteristic polynomials of small symmetric blocks and their real roots
//
// Quartic roots follow Ferrari's construction: a root chi of the resolvent
// cubic (written in depressed form u^3 + p u + q = 0, chi = u + alpha/6)
// splits E^4 + delta E^3 + alpha E^2 + beta E + gamma into two quadratics
//   E^2 + (delta/2 +- R) E + chi +- (delta chi - beta)/(2R),  R^2 = delta^2/4 - alpha + 2 chi.
// With S = 2R the "+" factor has roots
//   -(delta + S)/4 -+ (1/4) sqrt((delta + S)^2 - 16 (chi + (delta chi - beta)/S)).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace spectra {

/// E^3 + c2 E^2 + c1 E + c0.
struct CubicCoeffs {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
};

/// E^4 + delta E^3 + alpha E^2 + beta E + gamma.
struct QuarticCoeffs {
    double delta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// Intermediate quantities of the Ferrari solve, kept for inspection.
struct ResolventState {
    double p = 0.0;
    double q = 0.0;
    double chi = 0.0;
    double S = 0.0;  // sqrt(8 chi + delta^2 - 4 alpha)
};

struct QuarticSolution {
    std::array<double, 4> roots{};  // ascending
    ResolventState resolvent;
};

namespace detail {

inline double det3(const Eigen::Matrix3d& m) { return m.determinant(); }

// Real roots of a depressed cubic u^3 + p u + q that is known to have three
// real roots (up to roundoff); returned ascending.
inline std::array<double, 3> depressed_cubic_real_roots(double p, double q) {
    if (p >= 0.0) {
        // Only a triple root at zero is compatible with three real roots.
        const double u = std::cbrt(-q);
        return {u, u, u};
    }
    const double r = std::sqrt(-p / 3.0);
    double c = (3.0 * q) / (2.0 * p * r);  // cos(3 theta)
    c = std::clamp(c, -1.0, 1.0);
    const double theta = std::acos(c) / 3.0;
    std::array<double, 3> u{};
    for (int k = 0; k < 3; ++k) {
        u[static_cast<std::size_t>(k)] = 2.0 * r * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
    }
    std::sort(u.begin(), u.end());
    return u;
}

// Largest real root of the depressed cubic; Cardano when the discriminant
// admits one real root, trigonometric otherwise.
inline double depressed_cubic_largest_root(double p, double q) {
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0) {
        const double sd = std::sqrt(disc);
        return std::cbrt(-q / 2.0 + sd) + std::cbrt(-q / 2.0 - sd);
    }
    return depressed_cubic_real_roots(p, q)[2];
}

// Roots of x^2 + b x + c; tiny negative discriminants are clamped, larger ones rejected.
inline std::array<double, 2> real_quadratic_roots(double b, double c, double scale) {
    double disc = b * b - 4.0 * c;
    if (disc < 0.0) {
        if (disc < -1e-8 * std::max(1.0, scale * scale)) {
            throw std::domain_error("quartic has a complex root pair; input is not from a symmetric block");
        }
        disc = 0.0;
    }
    const double sd = std::sqrt(disc);
    // Avoid cancellation between -b and sd.
    const double t = -0.5 * (b + std::copysign(sd, b));
    if (t == 0.0) return {0.0, 0.0};
    const double r1 = t;
    const double r2 = c / t;
    return {std::min(r1, r2), std::max(r1, r2)};
}

}  // namespace detail

inline CubicCoeffs cubic_char_coeffs(const Eigen::Matrix3d& block) {
    const auto& b = block;
    CubicCoeffs c;
    c.c2 = -b.trace();
    c.c1 = (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)) + (b(0, 0) * b(2, 2) - b(0, 2) * b(2, 0)) +
           (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1));
    c.c0 = -b.determinant();
    return c;
}

/// Three real roots, ascending, of a cubic that comes from a real symmetric 3x3 block.
inline std::array<double, 3> solve_cubic(const CubicCoeffs& c) {
    const double shift = c.c2 / 3.0;
    const double p = c.c1 - c.c2 * c.c2 / 3.0;
    const double q = 2.0 * c.c2 * c.c2 * c.c2 / 27.0 - c.c2 * c.c1 / 3.0 + c.c0;
    auto u = detail::depressed_cubic_real_roots(p, q);
    for (auto& x : u) x -= shift;
    return u;
}

/// Characteristic-polynomial coefficients of a 4x4 block from its principal minors.
inline QuarticCoeffs quartic_char_coeffs(const Eigen::Matrix4d& block) {
    QuarticCoeffs k;
    k.delta = -block.trace();
    double minors2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) minors2 += block(i, i) * block(j, j) - block(i, j) * block(j, i);
    }
    k.alpha = minors2;
    double minors3 = 0.0;
    for (int skip = 0; skip < 4; ++skip) {
        Eigen::Matrix3d sub;
        int r = 0;
        for (int i = 0; i < 4; ++i) {
            if (i == skip) continue;
            int s = 0;
            for (int j = 0; j < 4; ++j) {
                if (j == skip) continue;
                sub(r, s++) = block(i, j);
            }
            ++r;
        }
        minors3 += detail::det3(sub);
    }
    k.beta = -minors3;
    k.gamma = block.determinant();
    return k;
}

inline double evaluate_quartic(const QuarticCoeffs& k, double x) {
    return (((x + k.delta) * x + k.alpha) * x + k.beta) * x + k.gamma;
}

/// Four real roots, ascending, of a quartic whose roots are known to be real.
inline QuarticSolution solve_quartic(const QuarticCoeffs& k) {
    const double a = k.delta, b = k.alpha, c = k.beta, d = k.gamma;
    QuarticSolution out;
    auto& rs = out.resolvent;
    rs.p = -b * b / 12.0 + a * c / 4.0 - d;
    rs.q = -b * b * b / 108.0 + a * b * c / 24.0 + b * d / 3.0 - a * a * d / 8.0 - c * c / 8.0;
    // Largest resolvent root keeps R^2 = a^2/4 - b + 2 chi as far from zero as possible.
    rs.chi = detail::depressed_cubic_largest_root(rs.p, rs.q) + b / 6.0;

    const double scale = std::max({1.0, std::abs(a), std::sqrt(std::abs(b)), std::cbrt(std::abs(c)),
                                   std::sqrt(std::sqrt(std::abs(d)))});
    double R2 = a * a / 4.0 - b + 2.0 * rs.chi;
    if (R2 < 0.0) R2 = 0.0;
    const double R = std::sqrt(R2);
    rs.S = 2.0 * R;

    double c_plus, c_minus;
    if (R > 1e-7 * scale) {
        const double t = (a * rs.chi - c) / (2.0 * R);
        c_plus = rs.chi + t;
        c_minus = rs.chi - t;
    } else {
        const double w = std::sqrt(std::max(0.0, rs.chi * rs.chi - d));
        c_plus = rs.chi + w;
        c_minus = rs.chi - w;
    }
    const auto r1 = detail::real_quadratic_roots(a / 2.0 + R, c_plus, scale);
    const auto r2 = detail::real_quadratic_roots(a / 2.0 - R, c_minus, scale);
    out.roots = {r1[0], r1[1], r2[0], r2[1]};
    // Newton polish on the quartic itself; kept only while it shrinks the residual.
    for (double& x : out.roots) {
        for (int it = 0; it < 4; ++it) {
            const double f = evaluate_quartic(k, x);
            const double df = ((4.0 * x + 3.0 * a) * x + 2.0 * b) * x + c;
            if (f == 0.0 || df == 0.0) break;
            const double next = x - f / df;
            if (!(std::abs(evaluate_quartic(k, next)) < std::abs(f))) break;
            x = next;
        }
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

/// Roots of the "+S" quadratic factor in the closed form
///   E = -(delta + S)/4 -+ (1/4) sqrt((delta + S)^2 - 16 (chi + (delta chi - beta)/S)),
/// lower sign first. Requires S > 0.
inline std::array<double, 2> ferrari_plus_pair(const QuarticCoeffs& k, const ResolventState& rs) {
    if (!(rs.S > 0.0)) throw std::domain_error("ferrari_plus_pair: degenerate resolvent (S = 0)");
    const double base = k.delta + rs.S;
    double inner = base * base - 16.0 * (rs.chi + (k.delta * rs.chi - k.beta) / rs.S);
    if (inner < 0.0) inner = 0.0;
    const double sq = std::sqrt(inner);
    return {-0.25 * base - 0.25 * sq, -0.25 * base + 0.25 * sq};
}

}  // namespace spectra
