#include "cvpq/rswitness.hpp"

#include <cmath>
#include <algorithm>
#include <complex>
#include <tuple>

#include "cvpq/errors.hpp"

namespace cvpq {

namespace {

void require_symmetric(const Eigen::MatrixXd& v) {
    if (v.rows() != v.cols() || v.rows() == 0 || v.rows() % 2 != 0)
        throw InvalidParameter("covariance matrix must be square with even, nonzero size");
    if (!v.allFinite()) throw InvalidParameter("covariance matrix has non-finite entries");
    const double asym = (v - v.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance)
        throw InvalidParameter("covariance matrix is not symmetric (max asymmetry " +
                               std::to_string(asym) + ")");
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries, Eigen::VectorXd means)
    : entries_(std::move(entries)), means_(std::move(means)) {
    require_symmetric(entries_);
    if (means_.size() != entries_.rows())
        throw InvalidParameter("covariance matrix means have the wrong length");
    if ((entries_.diagonal().array() < 0.0).any())
        throw InvalidParameter("covariance matrix has a negative variance");
}

SymplecticForm::SymplecticForm(std::size_t modes) {
    if (modes == 0) throw InvalidParameter("symplectic form needs m >= 1");
    const auto n = static_cast<Eigen::Index>(2 * modes);
    entries_ = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; k += 2) {
        entries_(k, k + 1) = 1.0;
        entries_(k + 1, k) = -1.0;
    }
}

SymplecticForm symplectic_form(std::size_t modes) { return SymplecticForm(modes); }

JointChoice::JointChoice(double c) : c_(c) {
    if (!std::isfinite(c_)) throw InvalidParameter("joint choice c must be finite");
}

CovarianceMatrix covariance_matrix(const BellBehavior& behavior, const JointChoice& jc) {
    const auto ns = check_no_signaling(behavior);
    if (!ns.ok)
        throw IllDefinedCovariance("behavior is signaling (worst discrepancy " +
                                   std::to_string(ns.worst_violation) +
                                   "); covariance matrix is not well defined");

    const std::size_t m = behavior.modes();
    const auto n = static_cast<Eigen::Index>(2 * m);

    // Settings of modes with exponent 0 are irrelevant under no-signaling; use 0.
    auto query = [m](std::initializer_list<std::tuple<std::size_t, std::uint8_t, unsigned>> factors) {
        MonomialQuery q;
        q.factors.assign(m, MonomialQuery::Factor{0, 0});
        for (const auto& [mode, setting, exponent] : factors) q.factors[mode] = {setting, exponent};
        return q;
    };

    Eigen::VectorXd means(n);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::uint8_t s = 0; s < 2; ++s) {
            const auto a = static_cast<Eigen::Index>(2 * i + s);
            means(a) = correlator(behavior, query({{i, s, 1}}));
            const double var = correlator(behavior, query({{i, s, 2}})) - means(a) * means(a);
            v(a, a) = std::max(var, 0.0);  // clamp round-off on exact zero variances
        }

    for (std::size_t i = 0; i < m; ++i) {
        const auto q = static_cast<Eigen::Index>(2 * i);
        v(q, q + 1) = v(q + 1, q) = jc.c();
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::uint8_t s = 0; s < 2; ++s)
                for (std::uint8_t t = 0; t < 2; ++t) {
                    const auto a = static_cast<Eigen::Index>(2 * i + s);
                    const auto b = static_cast<Eigen::Index>(2 * j + t);
                    const double cov = correlator(behavior, query({{i, s, 1}, {j, t, 1}})) - means(a) * means(b);
                    v(a, b) = v(b, a) = cov;
                }
    }
    return CovarianceMatrix(std::move(v), std::move(means));
}

double rs_tolerance(const Eigen::MatrixXd& v) {
    return 1e-9 * (1.0 + v.diagonal().maxCoeff());
}

double rs_min_eigenvalue(const Eigen::MatrixXd& v) {
    require_symmetric(v);
    const auto omega = symplectic_form(static_cast<std::size_t>(v.rows() / 2)).entries();
    Eigen::MatrixXcd h(v.rows(), v.cols());
    h.real() = v;
    h.imag() = omega;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw OracleMismatch("rs_min_eigenvalue: eigensolver failed");
    return solver.eigenvalues().minCoeff();
}

double rs_min_eigenvalue(const CovarianceMatrix& v) { return rs_min_eigenvalue(v.entries()); }

RsVerdict rs_verdict(double min_eigenvalue, double tolerance) {
    return min_eigenvalue < -tolerance ? RsVerdict::Violated : RsVerdict::Inconclusive;
}

std::string to_string(RsVerdict verdict) {
    return verdict == RsVerdict::Violated
               ? "not quantum-realizable under the stated covariance assumptions"
               : "inconclusive";
}

double rs_threshold_family(std::size_t modes, double c) {
    if (modes < 3) throw InvalidParameter("rs_threshold_family needs m >= 3; use rs_threshold_2mode");
    return std::sqrt(1.0 + c * c);
}

double rs_threshold_2mode(double l, double c) {
    const double l2 = l * l;
    const double cross = l2 + std::abs(c);
    return std::sqrt(1.0 + l2 * l2 + cross * cross);
}

double rs_min_eigenvalue_family(std::size_t modes, double l, double sigma, double c) {
    if (modes < 2) throw InvalidParameter("rs_min_eigenvalue_family needs m >= 2");
    const double v = l * l + sigma * sigma;
    return v - (modes == 2 ? rs_threshold_2mode(l, c) : rs_threshold_family(modes, c));
}

}  // namespace cvpq
