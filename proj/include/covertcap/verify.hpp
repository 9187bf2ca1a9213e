#pragma once

#include <string>
#include <vector>

namespace covertcap {

/// Outcome of one verification check, printable as
/// "name: PASS observed=... expected=... tol=...".
struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

enum class VerifyLevel { fast, full };

/// Run the oracle cross-check suite. Fast level covers the spot identity,
/// QPSK endpoints, receiver halving, and symplectic invariants; full level
/// runs every check including the Fock-oracle variance equivalence and the
/// moment-scaling laws.
std::vector<CheckResult> run_verify(VerifyLevel level);

/// Individual criterion runners (1-based ids used by the acceptance suite).
std::vector<CheckResult> run_criterion(int id);

constexpr int kCriterionCount = 10;

/// Name used in reports for a criterion id.
std::string criterion_name(int id);

/// Render one result line.
std::string format_check(const CheckResult& r);

}  // namespace covertcap
