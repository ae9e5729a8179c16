#ifndef FLUCTSIM_SPIN_CHAIN_HPP
#define FLUCTSIM_SPIN_CHAIN_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fluctsim/gaussian_state.hpp"
#include "fluctsim/symplectic.hpp"

namespace fluctsim {
namespace chain {

/* One site of a shift-invariant product chain: a d x d density matrix.
 * Spin sites use genuine Pauli matrices (sigma^2 = 1); block observables on
 * a composite site model several parallel chains at once. */
class SingleSiteState {
public:
    explicit SingleSiteState(Eigen::MatrixXcd rho);

    const Eigen::MatrixXcd& rho() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }

    double expectation(const Eigen::MatrixXcd& obs) const;

private:
    Eigen::MatrixXcd rho_;
};

struct LocalObservable {
    Eigen::MatrixXcd matrix;
    std::string label;

    LocalObservable(Eigen::MatrixXcd m, std::string l);
};

/* Chain of 2N+1 sites (|j| <= N) with per-site fluctuation normalization
 * 1/sqrt(2N+1). */
struct FluctuationSpec {
    SingleSiteState state;
    std::vector<LocalObservable> observables;
    long N = 0;

    FluctuationSpec(SingleSiteState s, std::vector<LocalObservable> obs, long n);
};

// Pauli matrices and common single-site states.
Eigen::MatrixXcd pauli_x();
Eigen::MatrixXcd pauli_y();
Eigen::MatrixXcd pauli_z();
Eigen::MatrixXcd pauli_id();
// (1 + p.sigma)/2 for a Bloch vector p, |p| <= 1.
SingleSiteState bloch_state(const Eigen::Vector3d& p);
SingleSiteState all_up();

/* Commutator form of the fluctuation algebra on a product state: only the
 * j = 0 shift contributes, so s(q1,q2) = omega([q1,q2]).  The value is
 * purely imaginary; the real coefficient of i is returned. */
double s_form(const SingleSiteState& omega, const LocalObservable& q1, const LocalObservable& q2);

// Anticommutator form on centered observables, omega([q1-<q1>, q2-<q2>]_+).
double t_form(const SingleSiteState& omega, const LocalObservable& q1, const LocalObservable& q2);

/* omega(e^{i sum_k beta_k q_k,<N>}) evaluated exactly as
 * [tr rho e^{i beta.(q - <q>)/sqrt(2N+1)}]^(2N+1). */
std::complex<double> finite_N_char_fn(const FluctuationSpec& spec, const Eigen::VectorXd& beta);

/* Limit of the ordered product prod_k e^{i beta_k q_k,<N>}:
 * exp(-i/2 sum_{k<l} beta_k beta_l s(q_k,q_l) - beta^T V beta / 2) with
 * V = t/2.  For a single observable the phase is absent and this is also the
 * limit of the single exponential. */
std::complex<double> limit_char_fn(const SingleSiteState& omega,
                                   const std::vector<LocalObservable>& observables,
                                   const Eigen::VectorXd& beta);

/* Weyl-algebra data of the fluctuations: sigma_kl = Im omega([q_k,q_l]),
 * V_kl = t(q_k,q_l)/2, mean 0.  Observables must stay linearly independent
 * after centering. */
std::pair<SymplecticSpace, GaussianState> weyl_map(const SingleSiteState& omega,
                                                   const std::vector<LocalObservable>& observables);

struct ConvergenceRow {
    long N;
    double abs_error;
};

/* |finite_N - limit| along an ascending N list (single-exponential reading,
 * i.e. compared against exp(-beta^T V beta / 2)). */
std::vector<ConvergenceRow> convergence_profile(const FluctuationSpec& spec,
                                                const Eigen::VectorXd& beta,
                                                const std::vector<long>& n_list);

// Least-squares slope of log(err) vs log(N); rows with err < floor are
// dropped.  Returns the decay exponent p in err ~ C / N^p.
double fitted_decay_exponent(const std::vector<ConvergenceRow>& rows, double floor = 1e-14);

} // namespace chain
} // namespace fluctsim

#endif
