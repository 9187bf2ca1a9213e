#pragma once

#include <stdexcept>
#include <string>

namespace covertcap {

/// Covertness requires nonzero environment noise; thrown when nbar_B = 0.
struct CovertnessError : std::domain_error {
    explicit CovertnessError(const std::string& msg) : std::domain_error(msg) {}
};

/// Small-photon-number expansion requested outside its domain.
struct ExpansionDomainError : std::domain_error {
    explicit ExpansionDomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// Gibbs-matrix construction hit a symplectic eigenvalue at the pure-state
/// boundary 1/2 where arccoth(2*lambda) diverges.
struct SingularStateError : std::domain_error {
    explicit SingularStateError(const std::string& msg) : std::domain_error(msg) {}
};

/// Covariance matrix does not have the two-mode block form the closed-form
/// symplectic routines support.
struct StructureError : std::invalid_argument {
    explicit StructureError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Matrix fails a physicality requirement (bona fide covariance matrix,
/// positive semidefinite state, ...).
struct NonPhysicalError : std::domain_error {
    explicit NonPhysicalError(const std::string& msg) : std::domain_error(msg) {}
};

/// Fock-space truncation cannot represent the requested object accurately.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Relative entropy is infinite: support of rho leaks outside support of sigma.
struct SupportError : std::runtime_error {
    explicit SupportError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Lemma-style bound requested with zero variance away from the median.
struct DegenerateVarianceError : std::domain_error {
    explicit DegenerateVarianceError(const std::string& msg) : std::domain_error(msg) {}
};

/// An internal algebraic identity failed beyond rounding tolerance.
struct ConsistencyError : std::logic_error {
    explicit ConsistencyError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace covertcap
