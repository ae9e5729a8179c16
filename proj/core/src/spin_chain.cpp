#include "fluctsim/spin_chain.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "fluctsim/errors.hpp"

namespace fluctsim {
namespace chain {

using cd = std::complex<double>;

SingleSiteState::SingleSiteState(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1)
        throw argument_error("SingleSiteState: density matrix must be square");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw argument_error("SingleSiteState: density matrix must be Hermitian");
    if (std::abs(rho_.trace().real() - 1.0) > 1e-12 || std::abs(rho_.trace().imag()) > 1e-12)
        throw argument_error("SingleSiteState: trace must be 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw argument_error("SingleSiteState: density matrix must be positive semidefinite");
}

double SingleSiteState::expectation(const Eigen::MatrixXcd& obs) const {
    if (obs.rows() != rho_.rows() || obs.cols() != rho_.cols())
        throw argument_error("SingleSiteState: observable dimension mismatch");
    return (rho_ * obs).trace().real();
}

LocalObservable::LocalObservable(Eigen::MatrixXcd m, std::string l)
    : matrix(std::move(m)), label(std::move(l)) {
    if (matrix.rows() != matrix.cols())
        throw argument_error("LocalObservable: matrix must be square");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw argument_error("LocalObservable '" + label + "': matrix must be Hermitian");
}

FluctuationSpec::FluctuationSpec(SingleSiteState s, std::vector<LocalObservable> obs, long n)
    : state(std::move(s)), observables(std::move(obs)), N(n) {
    if (N < 0) throw argument_error("FluctuationSpec: N must be nonnegative");
    if (observables.empty()) throw argument_error("FluctuationSpec: need at least one observable");
    for (const auto& o : observables)
        if (o.matrix.rows() != state.dim())
            throw argument_error("FluctuationSpec: observable/state dimension mismatch");
}

Eigen::MatrixXcd pauli_x() {
    Eigen::MatrixXcd m(2, 2);
    m << cd(0, 0), cd(1, 0), cd(1, 0), cd(0, 0);
    return m;
}
Eigen::MatrixXcd pauli_y() {
    Eigen::MatrixXcd m(2, 2);
    m << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0);
    return m;
}
Eigen::MatrixXcd pauli_z() {
    Eigen::MatrixXcd m(2, 2);
    m << cd(1, 0), cd(0, 0), cd(0, 0), cd(-1, 0);
    return m;
}
Eigen::MatrixXcd pauli_id() { return Eigen::MatrixXcd::Identity(2, 2); }

SingleSiteState bloch_state(const Eigen::Vector3d& p) {
    if (p.norm() > 1.0 + 1e-12)
        throw argument_error("bloch_state: Bloch vector must have |p| <= 1");
    Eigen::MatrixXcd rho =
        0.5 * (pauli_id() + p.x() * pauli_x() + p.y() * pauli_y() + p.z() * pauli_z());
    return SingleSiteState(std::move(rho));
}

SingleSiteState all_up() { return bloch_state(Eigen::Vector3d(0, 0, 1)); }

namespace {

void check_pair(const SingleSiteState& omega, const LocalObservable& q1, const LocalObservable& q2) {
    if (q1.matrix.rows() != omega.dim() || q2.matrix.rows() != omega.dim())
        throw argument_error("s/t form: observable dimension mismatch");
}

// tr(rho e^{iA}) via the eigendecomposition of Hermitian A.  If A is exactly
// diagonal the decomposition is skipped so diagonal cases stay exact.
cd site_char(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a) {
    const auto d = a.rows();
    bool diagonal = true;
    for (Eigen::Index i = 0; i < d && diagonal; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (i != j && a(i, j) != cd(0, 0)) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        cd tr(0, 0);
        for (Eigen::Index i = 0; i < d; ++i)
            tr += rho(i, i) * std::exp(cd(0, 1) * a(i, i).real());
        return tr;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    Eigen::VectorXcd phases(d);
    for (Eigen::Index k = 0; k < d; ++k) phases(k) = std::exp(cd(0, 1) * es.eigenvalues()(k));
    Eigen::MatrixXcd u = es.eigenvectors();
    return (rho * (u * phases.asDiagonal() * u.adjoint())).trace();
}

} // namespace

double s_form(const SingleSiteState& omega, const LocalObservable& q1, const LocalObservable& q2) {
    check_pair(omega, q1, q2);
    const cd val = (omega.rho() * (q1.matrix * q2.matrix - q2.matrix * q1.matrix)).trace();
    // omega([q1,q2]) is purely imaginary for Hermitian q1, q2
    return val.imag();
}

double t_form(const SingleSiteState& omega, const LocalObservable& q1, const LocalObservable& q2) {
    check_pair(omega, q1, q2);
    const double m1 = omega.expectation(q1.matrix);
    const double m2 = omega.expectation(q2.matrix);
    Eigen::MatrixXcd c1 = q1.matrix - m1 * Eigen::MatrixXcd::Identity(omega.dim(), omega.dim());
    Eigen::MatrixXcd c2 = q2.matrix - m2 * Eigen::MatrixXcd::Identity(omega.dim(), omega.dim());
    return (omega.rho() * (c1 * c2 + c2 * c1)).trace().real();
}

std::complex<double> finite_N_char_fn(const FluctuationSpec& spec, const Eigen::VectorXd& beta) {
    if (beta.size() != static_cast<Eigen::Index>(spec.observables.size()))
        throw argument_error("finite_N_char_fn: beta dimension mismatch");
    const long sites = 2 * spec.N + 1;
    const int d = spec.state.dim();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index k = 0; k < beta.size(); ++k) {
        const auto& q = spec.observables[static_cast<size_t>(k)];
        const double mean = spec.state.expectation(q.matrix);
        a += beta(k) * (q.matrix - mean * Eigen::MatrixXcd::Identity(d, d));
    }
    a /= std::sqrt(static_cast<double>(sites));
    const cd z = site_char(spec.state.rho(), a);
    // z^sites via polar form
    const double r = std::abs(z);
    const double th = std::arg(z);
    if (r == 0.0) return cd(0, 0);
    return std::pow(r, static_cast<double>(sites)) *
           std::exp(cd(0, 1) * (static_cast<double>(sites) * th));
}

std::complex<double> limit_char_fn(const SingleSiteState& omega,
                                   const std::vector<LocalObservable>& observables,
                                   const Eigen::VectorXd& beta) {
    if (beta.size() != static_cast<Eigen::Index>(observables.size()))
        throw argument_error("limit_char_fn: beta dimension mismatch");
    double quad = 0.0;
    double phase = 0.0;
    for (Eigen::Index k = 0; k < beta.size(); ++k) {
        for (Eigen::Index l = 0; l < beta.size(); ++l) {
            const double t = t_form(omega, observables[static_cast<size_t>(k)],
                                    observables[static_cast<size_t>(l)]);
            quad += beta(k) * beta(l) * 0.5 * t;
            if (k < l)
                phase -= 0.5 * beta(k) * beta(l) *
                         s_form(omega, observables[static_cast<size_t>(k)],
                                observables[static_cast<size_t>(l)]);
        }
    }
    return std::exp(cd(-0.5 * quad, phase));
}

std::pair<SymplecticSpace, GaussianState> weyl_map(
    const SingleSiteState& omega, const std::vector<LocalObservable>& observables) {
    const auto n = static_cast<Eigen::Index>(observables.size());
    if (n == 0) throw argument_error("weyl_map: need at least one observable");

    // linear independence of the centered observables (Hilbert-Schmidt Gram)
    Eigen::MatrixXcd gram(n, n);
    std::vector<Eigen::MatrixXcd> centered;
    centered.reserve(static_cast<size_t>(n));
    const int d = omega.dim();
    for (const auto& q : observables) {
        const double mean = omega.expectation(q.matrix);
        centered.push_back(q.matrix - mean * Eigen::MatrixXcd::Identity(d, d));
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
            gram(k, l) = (centered[static_cast<size_t>(k)].adjoint() *
                          centered[static_cast<size_t>(l)])
                             .trace();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ges(gram, Eigen::EigenvaluesOnly);
    if (ges.eigenvalues().minCoeff() < 1e-10 * std::max(1.0, ges.eigenvalues().maxCoeff()))
        throw argument_error("weyl_map: observables linearly dependent after centering");

    Eigen::MatrixXd sigma(n, n), cov(n, n);
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        labels.push_back(observables[static_cast<size_t>(k)].label);
        for (Eigen::Index l = 0; l < n; ++l) {
            sigma(k, l) = s_form(omega, observables[static_cast<size_t>(k)],
                                 observables[static_cast<size_t>(l)]);
            cov(k, l) = 0.5 * t_form(omega, observables[static_cast<size_t>(k)],
                                     observables[static_cast<size_t>(l)]);
        }
    }
    sigma = 0.5 * (sigma - sigma.transpose().eval());
    cov = 0.5 * (cov + cov.transpose().eval());

    SymplecticSpace space(std::move(labels), std::move(sigma));
    GaussianState state(space, Eigen::VectorXd::Zero(n), std::move(cov));
    return {std::move(space), std::move(state)};
}

std::vector<ConvergenceRow> convergence_profile(const FluctuationSpec& spec,
                                                const Eigen::VectorXd& beta,
                                                const std::vector<long>& n_list) {
    if (n_list.empty()) throw argument_error("convergence_profile: empty N list");
    for (size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw argument_error("convergence_profile: N list must be ascending");
    // single-exponential limit: no ordering phase
    double quad = 0.0;
    for (Eigen::Index k = 0; k < beta.size(); ++k)
        for (Eigen::Index l = 0; l < beta.size(); ++l)
            quad += beta(k) * beta(l) * 0.5 *
                    t_form(spec.state, spec.observables[static_cast<size_t>(k)],
                           spec.observables[static_cast<size_t>(l)]);
    const cd limit = std::exp(cd(-0.5 * quad, 0.0));

    std::vector<ConvergenceRow> rows;
    rows.reserve(n_list.size());
    for (long n : n_list) {
        FluctuationSpec s(spec.state, spec.observables, n);
        const cd fin = finite_N_char_fn(s, beta);
        rows.push_back({n, std::abs(fin - limit)});
    }
    return rows;
}

double fitted_decay_exponent(const std::vector<ConvergenceRow>& rows, double floor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : rows) {
        if (r.abs_error < floor) continue;
        const double x = std::log(static_cast<double>(r.N));
        const double y = std::log(r.abs_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) throw argument_error("fitted_decay_exponent: fewer than two usable rows");
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return -slope;
}

} // namespace chain
} // namespace fluctsim
