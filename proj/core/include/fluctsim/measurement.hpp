#ifndef FLUCTSIM_MEASUREMENT_HPP
#define FLUCTSIM_MEASUREMENT_HPP

#include <vector>

#include <Eigen/Dense>

#include "fluctsim/gaussian_state.hpp"

namespace fluctsim {

/* Gaussian measurement on a subset of generators with resolution covariance
 * W on the measured block.
 *
 * kind::abelian_density  -- classical Gaussian smearing of mutually commuting
 *   generators (their sigma sub-block must vanish).  Measuring one quadrature
 *   of a mode with noise is the W->diag limit of a general-dyne measurement
 *   and is admissible here as well; the commuting requirement applies to the
 *   measured set among themselves.
 * kind::pure_projector   -- projection onto a pure Gaussian of a full mode
 *   pair; W is the seed covariance and must satisfy det W = 1/4 per pair.
 */
struct GaussianMeasurement {
    enum class Kind { abelian_density, pure_projector };

    std::vector<int> measured;
    Eigen::MatrixXd resolution; // W
    Kind kind = Kind::abelian_density;

    static constexpr double kPureDetTol = 1e-9;
};

/* Conditional state given the outcome, on the generators that commute with
 * the measured block:
 *   V_B' = V_B - V_BA (V_A + W)^-1 V_AB
 *   m_B' = m_B + V_BA (V_A + W)^-1 (outcome - m_A)
 * For commuting measured generators this is the classical Bayes update with
 * Gaussian likelihood N(outcome; m_A, V_A + W), followed by marginalization
 * over the measured block.  V_B' <= V_B in the Loewner order, and the
 * uncertainty condition is preserved on the surviving block.
 *
 * Generators conjugate to a measured one (nonzero sigma against the measured
 * block) are removed along with it: measurement back-action disturbs them,
 * and retaining their classically-conditioned correlations would produce an
 * unphysical covariance.  Measuring a full mode (the pure-projector kind)
 * never triggers this. */
GaussianState condition(const GaussianState& state,
                        const GaussianMeasurement& meas,
                        const Eigen::VectorXd& outcome);

} // namespace fluctsim

#endif
