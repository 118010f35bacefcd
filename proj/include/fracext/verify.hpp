/** \file    verify.hpp
    \brief   Self-checks of the library against closed forms and structural identities
*/
#pragma once
#include <string>
#include <vector>

namespace fracext {

/// One verified quantity: the measured deviation and the tolerance it is held to.
struct CheckResult {
    std::string name;
    double value = 0;      ///< measured deviation (or measured quantity for one-sided checks)
    double tolerance = 0;
    bool pass = false;
    std::string detail;
};

/// Result of a suite: all its checks plus the wall time against the budget.
struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0;
    double budget_seconds = 0;
    bool pass() const;
};

/// kernel-mass, closed-form, maximizer, invariance, transfer, sphere-integrals, boundary-value,
/// harmonics, funk-hecke, sobolev, theta
std::vector<std::string> suite_names();

/// Runs a suite by name; "unknown suite" for other names.
SuiteResult run_suite(const std::string& name);

}  // namespace fracext
