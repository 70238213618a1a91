// csv.hpp: shortest round-trip number formatting and the two CSV layouts written by the CLI

#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "spectra/spectrum.hpp"

namespace spectra {

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("format_double: non-finite value");
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s) {
    double x = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last) {
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    }
    return x;
}

inline constexpr std::string_view kSweepHeader = "lambda_over_omega0,level_index,order,sector,energy";
inline constexpr std::string_view kDynamicsHeader = "t,population_exact,population_order1,population_order3";

struct SweepRow {
    double lambda_over_omega0 = 0.0;
    std::size_t level_index = 0;
    Method method = Method::exact;
    Sector sector = Sector::minus;
    double energy = 0.0;
};

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepHeader << '\n';
    for (const auto& r : rows) {
        out << format_double(r.lambda_over_omega0) << ',' << r.level_index << ',' << to_string(r.method) << ','
            << to_string(r.sector) << ',' << format_double(r.energy) << '\n';
    }
}

struct DynamicsColumns {
    std::vector<double> t, exact, order1, order3;
};

inline void write_dynamics_csv(std::ostream& out, const DynamicsColumns& c) {
    const std::size_t n = c.t.size();
    if (c.exact.size() != n || c.order1.size() != n || c.order3.size() != n) {
        throw std::invalid_argument("write_dynamics_csv: column lengths differ");
    }
    out << kDynamicsHeader << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << format_double(c.t[i]) << ',' << format_double(c.exact[i]) << ',' << format_double(c.order1[i]) << ','
            << format_double(c.order3[i]) << '\n';
    }
}

/// gnuplot script that draws the dynamics CSV next to it. Plain text; any plotter can read the CSV instead.
inline std::string dynamics_plot_script(const std::string& csv_name, const std::string& title) {
    std::string s;
    s += "# Renders " + csv_name + " with gnuplot:  gnuplot -p <this file>\n";
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += "set title '" + title + "'\n";
    s += "set xlabel 't'\n";
    s += "set ylabel 'lower-level population'\n";
    s += "set yrange [0:1]\n";
    s += "plot '" + csv_name + "' using 1:2 with lines lw 2, \\\n";
    s += "     '' using 1:3 with lines dt 2, \\\n";
    s += "     '' using 1:4 with lines dt 3\n";
    return s;
}

/// gnuplot script for a sweep CSV: one curve per (order, level).
inline std::string sweep_plot_script(const std::string& csv_name, const std::vector<Method>& orders,
                                     std::size_t levels) {
    std::string s;
    s += "# Renders " + csv_name + " with gnuplot:  gnuplot -p <this file>\n";
    s += "set datafile separator ','\n";
    s += "set xlabel 'lambda/omega0'\n";
    s += "set ylabel 'E/omega0'\n";
    s += "plot ";
    bool first = true;
    for (Method m : orders) {
        for (std::size_t j = 0; j < levels; ++j) {
            if (!first) s += ", \\\n     ";
            first = false;
            const std::string ord(to_string(m));
            s += "'" + csv_name + "' using 1:(stringcolumn(3) eq '" + ord + "' && $2 == " + std::to_string(j) +
                 " ? $5 : NaN) with lines title '" + ord + " #" + std::to_string(j) + "'";
        }
    }
    s += "\n";
    return s;
}

}  // namespace spectra
