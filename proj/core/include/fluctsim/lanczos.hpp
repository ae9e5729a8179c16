#ifndef FLUCTSIM_LANCZOS_HPP
#define FLUCTSIM_LANCZOS_HPP

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace fluctsim {
namespace mf {

using MatVec = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

struct LanczosOptions {
    int krylov_dim = 30;
    double tol = 1e-12;     // accumulated norm-error budget for the whole interval
    int max_substeps = 100000;
};

/* e^{-i t H} v for Hermitian H given as a matvec, by Lanczos with full
 * reorthogonalization and adaptive substepping (Saad's residual estimate).
 * Throws convergence_error if the budget cannot be met. */
Eigen::VectorXcd lanczos_expv(const MatVec& h, const Eigen::VectorXcd& v, double t,
                              const LanczosOptions& opts = {});

} // namespace mf
} // namespace fluctsim

#endif
