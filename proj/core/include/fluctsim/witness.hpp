#ifndef FLUCTSIM_WITNESS_HPP
#define FLUCTSIM_WITNESS_HPP

#include <Eigen/Dense>

#include "fluctsim/gaussian_state.hpp"
#include "fluctsim/quadratic_flow.hpp"

namespace fluctsim {

enum class PptVerdict { separable_ppt, entangled_npt };

/* Sum of the collective quadrature variances,
 *   delta(J_y^+ + J_y^-)^2 + delta(J_z^+ + J_z^-)^2,
 * on a state over the four generators J_y^+, J_z^+, J_y^-, J_z^- in canonical
 * units [J_y^+,J_z^+] = i, [J_y^-,J_z^-] = -i.  A value below 2 certifies
 * entanglement of the two modes; >= 2 is inconclusive. */
double variance_witness(const GaussianState& two_cloud_state);

/* Simon's positivity test for a 1x1-mode split: flip the momentum sign of
 * the second mode, then check the uncertainty condition of the transposed
 * covariance.  Necessary and sufficient here, so the verdict is definitive.
 * `split_second_mode` names the two generators forming the transposed mode. */
PptVerdict ppt_check(const GaussianState& two_mode_state);

// Smallest symplectic eigenvalue of the partially transposed covariance
// (entangled iff < 1/2).
double ppt_min_symplectic_eigenvalue(const GaussianState& two_mode_state);

// Symplectic spectrum of a covariance on a nondegenerate form (eigendecomp
// of sigma V; values come in +/- pairs, the positive ones are returned).
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& form);

/* Applies two local symplectic maps, one per mode, to a two-cloud state.
 * Both maps are given on the full four-generator space and must be the
 * identity outside their own mode (disjoint supports).  The PPT verdict is
 * invariant under this operation. */
GaussianState local_symplectic(const GaussianState& state,
                               const AffineSymplecticMap& mapB,
                               const AffineSymplecticMap& mapC);

// Embeds a 2x2 symplectic block (det = 1) plus shift as a full-space map
// acting on mode B (which_mode = 0) or mode C (which_mode = 1).
AffineSymplecticMap embed_mode_map(const SymplecticSpace& two_cloud,
                                   const Eigen::Matrix2d& block,
                                   const Eigen::Vector2d& shift,
                                   int which_mode);

/* The canonical two-cloud symplectic space used by the witnesses:
 * generators (J_y^+, J_z^+, J_z^-, J_y^-); mode B = (J_y^+, J_z^+) and
 * mode C = (J_z^-, J_y^-), both in canonical orientation. */
SymplecticSpace two_cloud_space();

} // namespace fluctsim

#endif
