#pragma once

// Covariance matrices in (q_1, p_1, ..., q_m, p_m) ordering and the
// Robertson-Schrodinger test V + i Omega >= 0.

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "cvpq/behaviors.hpp"

namespace cvpq {

inline constexpr double kSymmetryTolerance = 1e-12;

/// 2m x 2m real symmetric covariance matrix plus the 2m first moments.
class CovarianceMatrix {
public:
    /// Throws InvalidParameter unless entries is 2m x 2m, symmetric to
    /// kSymmetryTolerance, with a nonnegative diagonal.
    CovarianceMatrix(Eigen::MatrixXd entries, Eigen::VectorXd means);

    std::size_t modes() const noexcept { return static_cast<std::size_t>(entries_.rows() / 2); }
    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    const Eigen::VectorXd& means() const noexcept { return means_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Eigen::MatrixXd entries_;
    Eigen::VectorXd means_;
};

/// Block diagonal [[0, 1], [-1, 0]] per mode.
class SymplecticForm {
public:
    explicit SymplecticForm(std::size_t modes);

    std::size_t modes() const noexcept { return static_cast<std::size_t>(entries_.rows() / 2); }
    const Eigen::MatrixXd& entries() const noexcept { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

SymplecticForm symplectic_form(std::size_t modes);

/// Value of the symmetrized single-mode cross covariance
/// (1/2)<{q, p}> - <q><p>, shared by all modes. 0 is the product choice.
class JointChoice {
public:
    explicit JointChoice(double c = 0.0);
    double c() const noexcept { return c_; }

private:
    double c_;
};

/// Means, variances and cross-mode covariances from one- and two-mode
/// correlators; the within-mode q-p entry is jc.c(). Requires the behavior
/// to be no-signaling (IllDefinedCovariance otherwise).
CovarianceMatrix covariance_matrix(const BellBehavior& behavior, const JointChoice& jc);

/// Smallest eigenvalue of the Hermitian matrix V + i Omega, computed with a
/// complex self-adjoint eigensolver on the 2m x 2m matrix.
double rs_min_eigenvalue(const CovarianceMatrix& v);

/// Same, for a raw matrix. Throws InvalidParameter if it is not square,
/// even-sized and symmetric.
double rs_min_eigenvalue(const Eigen::MatrixXd& v);

/// 1e-9 * (1 + largest diagonal entry).
double rs_tolerance(const Eigen::MatrixXd& v);
inline double rs_tolerance(const CovarianceMatrix& v) { return rs_tolerance(v.entries()); }

enum class RsVerdict {
    /// V + i Omega has a negative eigenvalue: not quantum-realizable under
    /// the assumed covariance matrix.
    Violated,
    /// Necessary condition satisfied; says nothing about quantum realizability.
    Inconclusive,
};

RsVerdict rs_verdict(double min_eigenvalue, double tolerance);
std::string to_string(RsVerdict verdict);

/// Family with m >= 3 violates RS iff l^2 + sigma^2 < sqrt(1 + c^2).
double rs_threshold_family(std::size_t modes, double c);

/// Two-mode behavior violates RS iff l^2 + sigma^2 < sqrt(1 + l^4 + (l^2 + |c|)^2).
double rs_threshold_2mode(double l, double c);

/// Closed-form smallest eigenvalue of V + i Omega for the family CMs:
/// (l^2 + sigma^2) - threshold, with the m = 2 threshold for two modes.
double rs_min_eigenvalue_family(std::size_t modes, double l, double sigma, double c);

}  // namespace cvpq
