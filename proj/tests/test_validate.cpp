#include <chrono>
#include <string>

#include <gtest/gtest.h>

#include "spectra/validate.hpp"

namespace spectra {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TEST(Validate, QuickSuitePasses) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = run_validation();
    EXPECT_LT(seconds_since(t0), 10.0);
    EXPECT_TRUE(report.passed()) << format_report(report);
    EXPECT_GE(report.results.size(), 12u);
    for (const auto& r : report.results) EXPECT_LE(r.measured, r.allowed) << r.name;
}

TEST(Validate, FullSuitePasses) {
    const auto t0 = std::chrono::steady_clock::now();
    ValidateOptions options;
    options.full = true;
    const auto report = run_validation(options);
    EXPECT_LT(seconds_since(t0), 300.0);
    EXPECT_TRUE(report.passed()) << format_report(report);
    EXPECT_GT(report.results.size(), run_validation().results.size());
}

TEST(Validate, CorruptedOverlapSignIsCaught) {
    ValidateOptions options;
    options.fault = Fault::overlap_sign;
    const auto report = run_validation(options);
    EXPECT_FALSE(report.passed());
    int failures = 0;
    for (const auto& r : report.results) {
        if (r.passed) continue;
        ++failures;
        EXPECT_TRUE(r.name.find("overlap") != std::string::npos || r.name.find("sector matrix") != std::string::npos)
            << r.name;
    }
    EXPECT_GE(failures, 3);
    const auto text = format_report(report);
    EXPECT_NE(text.find("FAIL  overlap symmetry"), std::string::npos) << text;
    EXPECT_NE(text.find("PASS  closed-form roots"), std::string::npos) << text;
}

}  // namespace
}  // namespace spectra
