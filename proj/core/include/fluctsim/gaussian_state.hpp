#ifndef FLUCTSIM_GAUSSIAN_STATE_HPP
#define FLUCTSIM_GAUSSIAN_STATE_HPP

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fluctsim/symplectic.hpp"

namespace fluctsim {

/* Gaussian state over a SymplecticSpace: mean vector m and real symmetric
 * covariance V of the centered generators,
 *
 *   omega(e^{i beta.Q}) = exp(i beta.m - beta^T V beta / 2).
 *
 * Validity: V = V^T, V >= 0 (within 1e-12) and the uncertainty condition
 * V + (i/2) sigma >= 0 as a Hermitian matrix (within 1e-10).  The latter
 * constrains only the non-central block. */
class GaussianState {
public:
    GaussianState(SymplecticSpace space, Eigen::VectorXd mean, Eigen::MatrixXd cov);

    const SymplecticSpace& space() const { return space_; }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& cov() const { return cov_; }
    int dim() const { return space_.dim(); }

    // Smallest eigenvalue of the Hermitian matrix V + (i/2) sigma.
    double uncertainty_margin() const;
    // Smallest eigenvalue of V.
    double cov_margin() const;

    static constexpr double kPsdTol = 1e-12;
    static constexpr double kUncertaintyTol = 1e-10;

private:
    SymplecticSpace space_;
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

// omega(e^{i beta.Q}) for the state; |result| <= 1, result(0) = 1.
std::complex<double> char_fn(const GaussianState& state, const Eigen::VectorXd& beta);

// Restriction of the state to a subset of generators.
GaussianState marginal(const GaussianState& state, const std::vector<int>& keep);
GaussianState marginal(const GaussianState& state, const std::vector<std::string>& keep_labels);

// Variance of the linear combination combo.Q.
double variance(const GaussianState& state, const Eigen::VectorXd& combo);

} // namespace fluctsim

#endif
