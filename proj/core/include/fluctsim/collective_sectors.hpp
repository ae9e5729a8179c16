#ifndef FLUCTSIM_COLLECTIVE_SECTORS_HPP
#define FLUCTSIM_COLLECTIVE_SECTORS_HPP

#include <vector>

#include <Eigen/Dense>

#include "fluctsim/mean_field.hpp"

namespace fluctsim {
namespace mf {

/* Exact propagation of the laser + two-cloud model for the standard initial
 * state (laser +x, clouds +-x), using the conservation of the combined-cloud
 * total spin: H couples the laser only to D^plus + D^minus, so each total
 * spin J of the cloud pair evolves independently in a block of size
 * (N+1) x (2J+1).  The initial cloud pair |+x>|-x> decomposes over J with
 * weights obtained from the tridiagonal total-spin problem on the M_x = 0
 * subspace; sectors below `weight_cut` in probability are dropped (their
 * total contribution to second moments is negligible and checked against
 * the retained-mass sum rule). */
class SectorModel {
public:
    SectorModel(int n_sites, const Couplings& a, double weight_cut = 1e-10);

    // advance all sectors by dt (incremental in time)
    void advance(double dt);
    double time() const { return time_; }

    // first/second moments of collective operators in the current state
    double laser_dy_mean() const;
    double laser_dy_second() const;
    double bc_dy_mean() const;
    double bc_dy_second() const;
    double bc_dz_mean() const;
    double bc_dz_second() const;

    double retained_mass() const { return retained_mass_; }
    int n_sectors() const { return static_cast<int>(sectors_.size()); }

    // weights |C_J|^2 of the cloud-pair total-spin decomposition, index J
    static Eigen::VectorXd pair_spin_weights(int n_sites);

private:
    struct Sector {
        int total_spin;
        double weight; // |C_J|^2
        // state as (2J+1) x (N+1) matrix: column = laser index, row = cloud index
        Eigen::MatrixXcd psi;
        Eigen::VectorXd ladder; // cached ladder amplitudes for this spin
    };

    void h_apply(const Sector& s, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& tmp,
                 Eigen::MatrixXcd& tmp2, Eigen::Map<Eigen::MatrixXcd>& out) const;
    void advance_sector(Sector& s, double dt) const;

    int n_;
    Couplings a_;
    double time_ = 0.0;
    double retained_mass_ = 0.0;
    // banded laser-side collective operators (size N+1)
    Eigen::VectorXd laser_dx_diag_;
    Eigen::VectorXd ladder_; // spin ladder amplitudes for the laser factor
    std::vector<Sector> sectors_;
};

} // namespace mf
} // namespace fluctsim

#endif
