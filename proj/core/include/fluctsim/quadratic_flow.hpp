#ifndef FLUCTSIM_QUADRATIC_FLOW_HPP
#define FLUCTSIM_QUADRATIC_FLOW_HPP

#include <Eigen/Dense>

#include "fluctsim/gaussian_state.hpp"
#include "fluctsim/symplectic.hpp"

namespace fluctsim {

/* H = Q^T G Q / 2 + f.Q with G real symmetric.  Generates the Heisenberg
 * flow dQ/dt = sigma (G Q + f). */
struct QuadraticHamiltonian {
    SymplecticSpace space;
    Eigen::MatrixXd quad; // G, symmetric
    Eigen::VectorXd lin;  // f

    QuadraticHamiltonian(SymplecticSpace sp, Eigen::MatrixXd G, Eigen::VectorXd f);
};

/* Affine map Q -> S Q + c with S sigma S^T = sigma (within 1e-10), zero sigma
 * rows included. */
class AffineSymplecticMap {
public:
    AffineSymplecticMap(SymplecticSpace space, Eigen::MatrixXd linear, Eigen::VectorXd shift);

    const SymplecticSpace& space() const { return space_; }
    const Eigen::MatrixXd& linear() const { return linear_; }
    const Eigen::VectorXd& shift() const { return shift_; }

    // this after other: Q -> S_this (S_other Q + c_other) + c_this.
    AffineSymplecticMap compose(const AffineSymplecticMap& inner) const;

    static AffineSymplecticMap identity(const SymplecticSpace& space);

    static constexpr double kFormTol = 1e-10;

private:
    SymplecticSpace space_;
    Eigen::MatrixXd linear_;
    Eigen::VectorXd shift_;
};

/* Solves dQ/dt = sigma (G Q + f) for time t:
 *   S = exp(t sigma G),  c = (int_0^t exp(u sigma G) du) sigma f,
 * by one Pade exponential of the augmented matrix [[sigma G, sigma f],[0,0]]. */
AffineSymplecticMap flow(const QuadraticHamiltonian& h, double t);

// Pushforward of a Gaussian state: mean -> S m + c, cov -> S V S^T.
GaussianState apply(const AffineSymplecticMap& map, const GaussianState& state);

} // namespace fluctsim

#endif
