#include "fluctsim/lanczos.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fluctsim/errors.hpp"

namespace fluctsim {
namespace mf {

using cd = std::complex<double>;

namespace {

// exp(-i dt T) e_1 for the j x j tridiagonal section
Eigen::VectorXcd small_exp_e1(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, int j,
                              double dt) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j, j);
    for (int k = 0; k < j; ++k) {
        t(k, k) = alpha(k);
        if (k + 1 < j) t(k, k + 1) = t(k + 1, k) = beta(k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXcd phases(j);
    for (int k = 0; k < j; ++k) phases(k) = std::exp(cd(0, -dt * es.eigenvalues()(k)));
    return es.eigenvectors() *
           (phases.array() * es.eigenvectors().row(0).transpose().cast<cd>().array()).matrix();
}

} // namespace

Eigen::VectorXcd lanczos_expv(const MatVec& h, const Eigen::VectorXcd& v, double t,
                              const LanczosOptions& opts) {
    if (v.size() == 0) throw argument_error("lanczos_expv: empty vector");
    if (t == 0.0) return v;

    const Eigen::Index n = v.size();
    const int m = static_cast<int>(std::min<Eigen::Index>(opts.krylov_dim, n));
    const double total = std::abs(t);
    const double sign = (t >= 0) ? 1.0 : -1.0;

    Eigen::VectorXcd cur = v;
    Eigen::MatrixXcd basis(n, m);
    Eigen::VectorXd alpha(m), beta(m);
    Eigen::VectorXcd w(n);

    double done = 0.0;
    int outer = 0;
    while (done < total) {
        if (++outer > opts.max_substeps)
            throw convergence_error("lanczos_expv: exceeded substep limit");
        const double remaining = total - done;
        const double vnorm = cur.norm();
        if (vnorm == 0.0) return cur;

        // Build the Krylov basis for the current vector.  The basis is
        // independent of the step size, so the step is chosen afterwards
        // from the tridiagonal error model alone.  Building stops early if
        // the full remaining interval is already converged.
        basis.col(0) = cur / vnorm;
        int j = 0;
        bool breakdown = false;
        bool whole_interval = false;
        while (j < m) {
            h(basis.col(j), w);
            cd a = basis.col(j).dot(w);
            w -= a * basis.col(j);
            if (j > 0) w -= cd(beta(j - 1), 0) * basis.col(j - 1);
            // one full reorthogonalization pass keeps the basis clean
            for (int k = 0; k <= j; ++k) w -= basis.col(k).dot(w) * basis.col(k);
            alpha(j) = a.real();
            const double b = w.norm();
            beta(j) = b;
            ++j;
            if (b < 1e-14) {
                breakdown = true;
                break;
            }
            if (j < m) basis.col(j) = w / b;
            if (j >= 4) {
                Eigen::VectorXcd small = small_exp_e1(alpha, beta, j, sign * remaining);
                const double err = beta(j - 1) * std::abs(small(j - 1)) * remaining;
                if (err <= opts.tol * remaining / total) {
                    whole_interval = true;
                    break;
                }
            }
        }

        double dt = remaining;
        Eigen::VectorXcd small;
        if (breakdown || whole_interval) {
            small = small_exp_e1(alpha, beta, j, sign * dt);
        } else {
            int halvings = 0;
            while (true) {
                small = small_exp_e1(alpha, beta, j, sign * dt);
                const double err = beta(j - 1) * std::abs(small(j - 1)) * dt;
                if (err <= opts.tol * dt / total) break;
                dt *= 0.5;
                if (++halvings > 80)
                    throw convergence_error("lanczos_expv: step size underflow");
            }
        }
        cur = vnorm * (basis.leftCols(j) * small);
        done += dt;
    }
    return cur;
}

} // namespace mf
} // namespace fluctsim
