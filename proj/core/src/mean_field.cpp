#include "fluctsim/mean_field.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "fluctsim/collective_sectors.hpp"
#include "fluctsim/errors.hpp"

namespace fluctsim {
namespace mf {

using cd = std::complex<double>;

long ModelSpec::factor_dim() const {
    return rep == Rep::full_tensor ? (1L << n_sites) : (n_sites + 1);
}

long ModelSpec::dim() const {
    const long f = factor_dim();
    return f * f * f;
}

void ModelSpec::validate() const {
    if (n_sites < 1) throw argument_error("ModelSpec: N >= 1 required");
    if (rep == Rep::full_tensor && 3 * n_sites > kMaxFullTensorSpins)
        throw capacity_error("ModelSpec: full tensor representation limited to 3N <= 20 spins");
    if (rep == Rep::dicke && n_sites > kMaxDickeSites)
        throw capacity_error("ModelSpec: Dicke tripartite state limited to N <= " +
                             std::to_string(kMaxDickeSites) +
                             " (use the sector backend for variance curves)");
    for (const auto* p : {&pol_laser, &pol_plus, &pol_minus})
        if (std::abs(p->norm() - 1.0) > 1e-12)
            throw argument_error("ModelSpec: initial product states must be pure (|p| = 1)");
}

namespace {

Eigen::MatrixXcd site_pauli(Axis axis) {
    Eigen::MatrixXcd m(2, 2);
    switch (axis) {
        case Axis::x: m << cd(0, 0), cd(1, 0), cd(1, 0), cd(0, 0); break;
        case Axis::y: m << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0); break;
        case Axis::z: m << cd(1, 0), cd(0, 0), cd(0, 0), cd(-1, 0); break;
    }
    return m;
}

Eigen::Vector2cd site_spinor(const Eigen::Vector3d& p) {
    const double theta = std::acos(std::clamp(p.z(), -1.0, 1.0));
    const double phi = std::atan2(p.y(), p.x());
    Eigen::Vector2cd chi;
    chi << cd(std::cos(0.5 * theta), 0.0), std::exp(cd(0, phi)) * std::sin(0.5 * theta);
    return chi;
}

Eigen::VectorXcd tensor_power(const Eigen::Vector2cd& chi, int n) {
    Eigen::VectorXcd v = chi;
    for (int k = 1; k < n; ++k) {
        Eigen::VectorXcd next(v.size() * 2);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            next(2 * i) = v(i) * chi(0);
            next(2 * i + 1) = v(i) * chi(1);
        }
        v.swap(next);
    }
    return v;
}

/* Spin coherent state in the x-quantized Dicke basis.  The representation
 * axes are (repX, repY, repZ) = (y, z, x), so the polar angle is measured
 * from the +x direction. */
Eigen::VectorXcd dicke_coherent(const Eigen::Vector3d& p, int n) {
    const double ctheta = std::clamp(p.x(), -1.0, 1.0);
    const double theta = std::acos(ctheta);
    const double phi = std::atan2(p.z(), p.y());
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    Eigen::VectorXcd v(n + 1);
    // index k corresponds to m = -j + k; amplitude uses j - m = n - k
    double log_binom = 0.0; // log C(n, 0)
    for (int k = 0; k <= n; ++k) {
        if (k > 0) log_binom += std::log(static_cast<double>(n - k + 1) / k);
        const int jm = k;      // j + m
        const int jmm = n - k; // j - m
        const double amp = std::exp(0.5 * log_binom) * std::pow(c, jm) * std::pow(s, jmm);
        v(k) = amp * std::exp(cd(0, phi * jmm));
    }
    v.normalize();
    return v;
}

Eigen::VectorXcd factor_state(const ModelSpec& spec, const Eigen::Vector3d& p) {
    if (spec.rep == Rep::full_tensor) return tensor_power(site_spinor(p), spec.n_sites);
    // exact extremal states for +-x, coherent-state amplitudes otherwise
    if ((p - Eigen::Vector3d(1, 0, 0)).norm() < 1e-14)
        return dicke_polarized_x(spec.n_sites, +1);
    if ((p - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-14)
        return dicke_polarized_x(spec.n_sites, -1);
    return dicke_coherent(p, spec.n_sites);
}

Eigen::VectorXcd kron_vec(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

SparseC identity_sparse(long dim) {
    SparseC id(dim, dim);
    id.setIdentity();
    return id;
}

// collective Pauli sum of one factor in the factor's own space
SparseC factor_collective(const ModelSpec& spec, Axis axis) {
    if (spec.rep == Rep::full_tensor)
        return collective_pauli_sum(site_pauli(axis), spec.n_sites);
    Eigen::MatrixXcd d;
    switch (axis) {
        case Axis::x: d = dicke_dx(spec.n_sites); break;
        case Axis::y: d = dicke_dy(spec.n_sites); break;
        case Axis::z: d = dicke_dz(spec.n_sites); break;
    }
    return sparse_from_dense(d);
}

} // namespace

TripartiteState initial_state(const ModelSpec& spec) {
    spec.validate();
    Eigen::VectorXcd a = factor_state(spec, spec.pol_laser);
    Eigen::VectorXcd b = factor_state(spec, spec.pol_plus);
    Eigen::VectorXcd c = factor_state(spec, spec.pol_minus);
    TripartiteState st;
    st.rep = spec.rep;
    st.n_sites = spec.n_sites;
    st.vec = kron_vec(a, kron_vec(b, c));
    st.vec.normalize();
    return st;
}

SparseC collective_operator(const ModelSpec& spec, Ensemble e, Axis axis, OpKind kind,
                            double center) {
    spec.validate();
    const long f = spec.factor_dim();
    SparseC op = factor_collective(spec, axis);
    if (kind == OpKind::fluctuation && center != 0.0) {
        SparseC shift = identity_sparse(f);
        op = SparseC(op - SparseC(shift * cd(center * spec.n_sites, 0.0)));
    }
    SparseC id = identity_sparse(f);
    SparseC embedded;
    switch (e) {
        case Ensemble::laser: embedded = kron(op, kron(id, id)); break;
        case Ensemble::plus: embedded = kron(id, kron(op, id)); break;
        case Ensemble::minus: embedded = kron(id, kron(id, op)); break;
    }
    const double n = static_cast<double>(spec.n_sites);
    if (kind == OpKind::mean) embedded = SparseC(embedded * cd(1.0 / n, 0));
    if (kind == OpKind::fluctuation) embedded = SparseC(embedded * cd(1.0 / std::sqrt(n), 0));
    return embedded;
}

SparseC build_hamiltonian(const ModelSpec& spec, const Couplings& a) {
    spec.validate();
    if (!std::isfinite(a.ax) || !std::isfinite(a.ay) || !std::isfinite(a.az))
        throw argument_error("build_hamiltonian: couplings must be finite");
    const double coeff[3] = {a.ax, a.ay, a.az};
    const Axis axes[3] = {Axis::x, Axis::y, Axis::z};
    const long dim = spec.dim();
    SparseC h(dim, dim);
    for (int k = 0; k < 3; ++k) {
        if (coeff[k] == 0.0) continue;
        SparseC da = collective_operator(spec, Ensemble::laser, axes[k], OpKind::total);
        SparseC db = collective_operator(spec, Ensemble::plus, axes[k], OpKind::total);
        SparseC dc = collective_operator(spec, Ensemble::minus, axes[k], OpKind::total);
        SparseC term = SparseC(da * SparseC(db + dc));
        h = SparseC(h + SparseC(term * cd(coeff[k] / (2.0 * spec.n_sites), 0)));
    }
    return h;
}

Propagator::Propagator(SparseC h, int dense_threshold) : h_(std::move(h)) {
    if (h_.rows() != h_.cols()) throw argument_error("Propagator: H must be square");
    if (h_.rows() <= dense_threshold) {
        dense_ = true;
        Eigen::MatrixXcd hd(h_);
        if ((hd - hd.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw argument_error("Propagator: H must be Hermitian");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hd);
        evals_ = es.eigenvalues();
        evecs_ = es.eigenvectors();
    }
}

Eigen::VectorXcd Propagator::advance(const Eigen::VectorXcd& psi, double dt) const {
    if (psi.size() != h_.rows()) throw argument_error("Propagator: state dimension mismatch");
    if (dt == 0.0) return psi;
    if (dense_) {
        Eigen::VectorXcd coeffs = evecs_.adjoint() * psi;
        for (Eigen::Index k = 0; k < coeffs.size(); ++k)
            coeffs(k) *= std::exp(cd(0, -dt * evals_(k)));
        return evecs_ * coeffs;
    }
    const SparseC& h = h_;
    MatVec mv = [&h](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { out = h * in; };
    return lanczos_expv(mv, psi, dt);
}

TripartiteState evolve_exact(const TripartiteState& state, const Propagator& prop, double t) {
    const double norm0 = state.vec.norm();
    const double e0 = std::real(state.vec.dot(prop.hamiltonian() * state.vec));
    TripartiteState out = state;
    out.vec = prop.advance(state.vec, t);
    const double norm1 = out.vec.norm();
    if (std::abs(norm1 - norm0) > 1e-10)
        throw convergence_error("evolve_exact: norm drift " + std::to_string(norm1 - norm0));
    const double e1 = std::real(out.vec.dot(prop.hamiltonian() * out.vec));
    if (std::abs(e1 - e0) > 1e-9 * std::max(1.0, std::abs(e0)))
        throw convergence_error("evolve_exact: energy drift " + std::to_string(e1 - e0));
    return out;
}

double bcs_commutator_norm(int n_sites, const Couplings& a) {
    if (n_sites < 1 || n_sites > 10)
        throw capacity_error("bcs_commutator_norm: full tensor chain limited to N <= 10");
    SparseC dx = collective_pauli_sum(site_pauli(Axis::x), n_sites);
    SparseC dy = collective_pauli_sum(site_pauli(Axis::y), n_sites);
    SparseC dz = collective_pauli_sum(site_pauli(Axis::z), n_sites);
    const double n = static_cast<double>(n_sites);
    // (1/N) sum_{i,j} includes i = j; those terms are constants and drop
    // out of every commutator
    Eigen::MatrixXcd h = (a.ax / n) * Eigen::MatrixXcd(SparseC(dx * dx)) +
                         (a.ay / n) * Eigen::MatrixXcd(SparseC(dy * dy)) +
                         (a.az / n) * Eigen::MatrixXcd(SparseC(dz * dz));
    Eigen::MatrixXcd x = Eigen::MatrixXcd(dx) / std::sqrt(n);
    Eigen::MatrixXcd comm = h * x - x * h;
    // [H, X] is anti-Hermitian, so i[H, X] is Hermitian with the same norm
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cd(0, 1) * comm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<MicroLimitPoint> micro_limit_curve(const ModelSpec& spec, const Couplings& a,
                                               const std::vector<double>& t_grid) {
    ModelSpec ms = spec;
    ms.rep = Rep::dicke;
    ms.validate();
    if (t_grid.empty()) throw argument_error("micro_limit_curve: empty time grid");
    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());
    if (grid.front() < 0) throw argument_error("micro_limit_curve: negative time");

    const double s = ms.pol_laser.x();
    const double freq = s * a.ax;

    struct Obs {
        Ensemble e;
        Axis axis;
        SparseC op;
    };
    std::vector<Obs> obs;
    for (Ensemble e : {Ensemble::laser, Ensemble::plus, Ensemble::minus})
        for (Axis ax : {Axis::x, Axis::y, Axis::z})
            obs.push_back({e, ax, collective_operator(ms, e, ax, OpKind::mean)});

    auto limit_of = [&](Ensemble e, Axis ax, double t) -> double {
        const Eigen::Vector3d p = (e == Ensemble::laser) ? ms.pol_laser
                                : (e == Ensemble::plus) ? ms.pol_plus
                                                        : ms.pol_minus;
        if (e == Ensemble::laser) return (ax == Axis::x) ? p.x() : (ax == Axis::y ? p.y() : p.z());
        const double sign = (e == Ensemble::plus) ? 1.0 : -1.0;
        switch (ax) {
            case Axis::x: return p.x();
            case Axis::y: return std::cos(freq * t) * p.y() + sign * std::sin(freq * t) * p.z();
            case Axis::z: return -sign * std::sin(freq * t) * p.y() + std::cos(freq * t) * p.z();
        }
        return 0.0;
    };

    Propagator prop(build_hamiltonian(ms, a));
    TripartiteState st = initial_state(ms);
    std::vector<MicroLimitPoint> rows;
    double now = 0.0;
    for (double t : grid) {
        st = evolve_exact(st, prop, t - now);
        now = t;
        for (const auto& o : obs) {
            const double val = std::real(st.vec.dot(o.op * st.vec));
            rows.push_back({t, o.e, o.axis, val, limit_of(o.e, o.axis, t)});
        }
    }
    return rows;
}

std::vector<MesoVariancePoint> meso_variance_curve(const Couplings& a,
                                                   const std::vector<int>& n_list,
                                                   const std::vector<double>& t_grid) {
    if (n_list.empty() || t_grid.empty())
        throw argument_error("meso_variance_curve: empty grid");
    for (size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw argument_error("meso_variance_curve: N list must be ascending");
    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());
    if (grid.front() < 0) throw argument_error("meso_variance_curve: negative time");

    std::vector<MesoVariancePoint> rows;
    for (int n : n_list) {
        SectorModel model(n, a);
        for (double t : grid) {
            model.advance(t - model.time());
            const double nn = static_cast<double>(n);
            const double vs =
                (model.laser_dy_second() - model.laser_dy_mean() * model.laser_dy_mean()) / nn;
            const double vy = (model.bc_dy_second() - model.bc_dy_mean() * model.bc_dy_mean()) / nn;
            const double vz = (model.bc_dz_second() - model.bc_dz_mean() * model.bc_dz_mean()) / nn;
            rows.push_back({n, t, "var_sigma_y", vs});
            rows.push_back({n, t, "var_Jy_sum", vy});
            rows.push_back({n, t, "var_Jz_sum", vz});
        }
    }
    return rows;
}

} // namespace mf
} // namespace fluctsim
