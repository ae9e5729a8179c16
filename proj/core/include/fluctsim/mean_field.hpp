#ifndef FLUCTSIM_MEAN_FIELD_HPP
#define FLUCTSIM_MEAN_FIELD_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fluctsim/dicke.hpp"
#include "fluctsim/lanczos.hpp"

namespace fluctsim {
namespace mf {

enum class Rep { full_tensor, dicke };
enum class Ensemble { laser, plus, minus };
enum class Axis { x, y, z };
enum class OpKind { mean, fluctuation, total };

struct Couplings {
    double ax = 1.0;
    double ay = 0.0;
    double az = 0.0;
};

/* Three equal ensembles of N spin-1/2 sites each (laser chain and the two
 * clouds), with pure product initial states given by unit Bloch vectors.
 * Site operators are Pauli matrices (sigma^2 = 1) throughout; the Dicke
 * representation keeps each ensemble in its maximal-spin symmetric sector,
 * valid because the initial states are permutation-symmetric products and
 * the interaction is permutation-symmetric per ensemble. */
struct ModelSpec {
    int n_sites = 1;
    Rep rep = Rep::dicke;
    Eigen::Vector3d pol_laser{1, 0, 0};
    Eigen::Vector3d pol_plus{1, 0, 0};
    Eigen::Vector3d pol_minus{-1, 0, 0};

    static constexpr int kMaxFullTensorSpins = 20; // 3N <= 20
    static constexpr int kMaxDickeSites = 64;      // (N+1)^3 state vectors

    long factor_dim() const;
    long dim() const;
    void validate() const;
};

struct TripartiteState {
    Rep rep = Rep::dicke;
    int n_sites = 1;
    Eigen::VectorXcd vec; // unit norm, ordering laser (slowest) x plus x minus
};

// Product initial state in the chosen representation.
TripartiteState initial_state(const ModelSpec& spec);

/* Mean-field coupling of the laser chain to the two clouds,
 *   H_N = (1/2N) sum_alpha a_alpha D_alpha^laser (D_alpha^plus + D_alpha^minus),
 * with D the collective Pauli sums.  Hermitian; conserves the total
 * D_alpha = D^laser + D^plus + D^minus for isotropic couplings. */
SparseC build_hamiltonian(const ModelSpec& spec, const Couplings& a);

/* Collective operator of one ensemble embedded in the tripartite space.
 * kind::mean divides by N, kind::fluctuation subtracts `center` per site and
 * divides by sqrt(N), kind::total is the bare sum. */
SparseC collective_operator(const ModelSpec& spec, Ensemble e, Axis axis, OpKind kind,
                            double center = 0.0);

/* e^{-iHt} by dense eigendecomposition (dim <= dense_threshold) or Lanczos.
 * The dense decomposition is cached, so repeated times are cheap. */
class Propagator {
public:
    Propagator(SparseC h, int dense_threshold = 1024);
    Eigen::VectorXcd advance(const Eigen::VectorXcd& psi, double dt) const;
    const SparseC& hamiltonian() const { return h_; }

private:
    SparseC h_;
    bool dense_ = false;
    Eigen::VectorXd evals_;
    Eigen::MatrixXcd evecs_;
};

/* Propagates and enforces the contract: norm preserved within 1e-10 and
 * <H> conserved within 1e-9, else convergence_error. */
TripartiteState evolve_exact(const TripartiteState& state, const Propagator& prop, double t);

/* Operator norm of [H_BCS, sum_k sigma_x,k / sqrt(N)] for the single-chain
 * mean-field Hamiltonian H = (1/N) sum_{i,j} sum_alpha a_alpha
 * sigma_alpha,i sigma_alpha,j, in the full tensor representation (N <= 10).
 * Vanishes identically for isotropic couplings. */
double bcs_commutator_norm(int n_sites, const Couplings& a);

struct MicroLimitPoint {
    double t;
    Ensemble ensemble;
    Axis axis;
    double exact_mean; // <sigma_alpha> per site at time t, exact dynamics
    double limit_mean; // N -> infinity single-site prediction
};

/* Single-site expectations under the exact dynamics vs the microscopic
 * N -> infinity automorphism (laser and cloud x-components invariant, the
 * rotating y/z expectations identically zero for the model's initial state).
 * Uses the Dicke representation. */
std::vector<MicroLimitPoint> micro_limit_curve(const ModelSpec& spec, const Couplings& a,
                                               const std::vector<double>& t_grid);

struct MesoVariancePoint {
    int n_sites;
    double t;
    std::string observable; // var_sigma_y | var_Jy_sum | var_Jz_sum
    double exact_var;
};

/* Exact collective fluctuation variances for the model's standard initial
 * state (laser +x, clouds +-x):
 *   var_sigma_y : Var( sum_l sigma_y,l / sqrt(N) ) on the laser chain
 *   var_Jy_sum  : Var( (D_y^plus + D_y^minus) / sqrt(N) )
 *   var_Jz_sum  : Var( (D_z^plus + D_z^minus) / sqrt(N) )
 * Computed in a representation that block-diagonalizes over the total spin
 * of the combined clouds, exact up to the stated weight cutoff; validated
 * against the plain Dicke representation in the tests. */
std::vector<MesoVariancePoint> meso_variance_curve(const Couplings& a,
                                                   const std::vector<int>& n_list,
                                                   const std::vector<double>& t_grid);

} // namespace mf
} // namespace fluctsim

#endif
