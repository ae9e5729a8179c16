#include "fluctsim/gaussian_state.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "fluctsim/errors.hpp"

namespace fluctsim {

namespace {

double min_eig_sym(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace

GaussianState::GaussianState(SymplecticSpace space, Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : space_(std::move(space)), mean_(std::move(mean)), cov_(std::move(cov)) {
    const int n = space_.dim();
    if (mean_.size() != n || cov_.rows() != n || cov_.cols() != n)
        throw argument_error("GaussianState: mean/cov dimensions must match the space");
    const double symtol = 1e-12 * std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > symtol)
        throw argument_error("GaussianState: covariance must be symmetric");
    cov_ = 0.5 * (cov_ + cov_.transpose().eval());
    // absolute tolerances hold for O(1) covariances; the eigenvalue roundoff
    // floor scales with ||V||
    const double vmax = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    const double floor = 50.0 * n * 2.2e-16 * vmax;
    if (cov_margin() < -std::max(kPsdTol, floor))
        throw argument_error("GaussianState: covariance not positive semidefinite");
    if (uncertainty_margin() < -std::max(kUncertaintyTol, floor))
        throw argument_error("GaussianState: uncertainty condition V + (i/2)sigma >= 0 violated");
}

double GaussianState::uncertainty_margin() const {
    const int n = space_.dim();
    Eigen::MatrixXcd h(n, n);
    h.real() = cov_;
    h.imag() = 0.5 * space_.form();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double GaussianState::cov_margin() const { return min_eig_sym(cov_); }

std::complex<double> char_fn(const GaussianState& state, const Eigen::VectorXd& beta) {
    if (beta.size() != state.dim())
        throw argument_error("char_fn: beta dimension mismatch");
    if (!beta.allFinite())
        throw argument_error("char_fn: beta must be finite");
    const double phase = beta.dot(state.mean());
    const double quad = beta.dot(state.cov() * beta);
    return std::exp(std::complex<double>(-0.5 * quad, phase));
}

GaussianState marginal(const GaussianState& state, const std::vector<int>& keep) {
    if (keep.empty()) throw argument_error("marginal: empty generator subset");
    SymplecticSpace sub = state.space().restrict(keep);
    const auto m = static_cast<Eigen::Index>(keep.size());
    Eigen::VectorXd mean(m);
    Eigen::MatrixXd cov(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        mean(i) = state.mean()(keep[static_cast<size_t>(i)]);
        for (Eigen::Index j = 0; j < m; ++j)
            cov(i, j) = state.cov()(keep[static_cast<size_t>(i)], keep[static_cast<size_t>(j)]);
    }
    return GaussianState(std::move(sub), std::move(mean), std::move(cov));
}

GaussianState marginal(const GaussianState& state, const std::vector<std::string>& keep_labels) {
    std::vector<int> keep;
    keep.reserve(keep_labels.size());
    for (const auto& l : keep_labels) keep.push_back(state.space().index(l));
    return marginal(state, keep);
}

double variance(const GaussianState& state, const Eigen::VectorXd& combo) {
    if (combo.size() != state.dim())
        throw argument_error("variance: combo dimension mismatch");
    if (combo.cwiseAbs().maxCoeff() == 0.0)
        throw argument_error("variance: combo must be nonzero");
    return combo.dot(state.cov() * combo);
}

} // namespace fluctsim
