#include "fluctsim/collective_sectors.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include <atomic>
#include <mutex>
#include <thread>

#include "fluctsim/errors.hpp"
#include "fluctsim/lanczos.hpp"

namespace fluctsim {
namespace mf {

using cd = std::complex<double>;

namespace {

// ladder amplitudes l(k) = sqrt((j - m)(j + m + 1)), m = -j + k, for 2j = two_j
Eigen::VectorXd ladder_amps(int two_j) {
    const double j = 0.5 * two_j;
    Eigen::VectorXd l(std::max(two_j, 1));
    for (int k = 0; k < two_j; ++k) {
        const double m = -j + k;
        l(k) = std::sqrt((j - m) * (j + m + 1.0));
    }
    if (two_j == 0) l(0) = 0.0;
    return l;
}

/* Banded one-factor products for collective Pauli operators in the
 * x-quantized ladder basis:
 *   D_x = diag(2m),  D_y(k+1,k) = D_y(k,k+1) = l(k),
 *   D_z(k+1,k) = -i l(k), D_z(k,k+1) = +i l(k).
 * Right products use the plain transpose as required by
 * (A (x) B) vec(M) = vec(B M A^T) with column-major vec. */

// out = D_alpha * M (cloud side, rows)
void left_dx(int two_j, const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out) {
    for (int r = 0; r <= two_j; ++r) out.row(r) = (2.0 * (-0.5 * two_j + r)) * m.row(r);
}
void left_dy(const Eigen::VectorXd& l, int two_j, const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out) {
    out.setZero();
    for (int r = 0; r <= two_j; ++r) {
        if (r < two_j) out.row(r) += l(r) * m.row(r + 1);
        if (r > 0) out.row(r) += l(r - 1) * m.row(r - 1);
    }
}
void left_dz(const Eigen::VectorXd& l, int two_j, const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out) {
    out.setZero();
    for (int r = 0; r <= two_j; ++r) {
        if (r < two_j) out.row(r) += cd(0, 1) * l(r) * m.row(r + 1);
        if (r > 0) out.row(r) += cd(0, -1) * l(r - 1) * m.row(r - 1);
    }
}

// out = M * D_alpha^T (laser side, columns)
void right_dx(int two_j, const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out) {
    for (int c = 0; c <= two_j; ++c) out.col(c) = (2.0 * (-0.5 * two_j + c)) * m.col(c);
}
void right_dy(const Eigen::VectorXd& l, int two_j, const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out) {
    // D_y symmetric: D_y^T = D_y; (M D_y).col(c) = l(c) M.col(c+1) + l(c-1) M.col(c-1)
    out.setZero();
    for (int c = 0; c <= two_j; ++c) {
        if (c < two_j) out.col(c) += l(c) * m.col(c + 1);
        if (c > 0) out.col(c) += l(c - 1) * m.col(c - 1);
    }
}
void right_dz(const Eigen::VectorXd& l, int two_j, const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out) {
    // (M D_z^T).col(c) = sum_k M.col(k) D_z(c,k): D_z(c,c+1) = +i l(c), D_z(c,c-1) = -i l(c-1)
    out.setZero();
    for (int c = 0; c <= two_j; ++c) {
        if (c < two_j) out.col(c) += cd(0, 1) * l(c) * m.col(c + 1);
        if (c > 0) out.col(c) += cd(0, -1) * l(c - 1) * m.col(c - 1);
    }
}

} // namespace

Eigen::VectorXd SectorModel::pair_spin_weights(int n_sites) {
    if (n_sites < 1) throw argument_error("pair_spin_weights: need N >= 1");
    const int dim = n_sites + 1; // M_x = 0 subspace, basis |m>_B |-m>_C
    const double j = 0.5 * n_sites;
    Eigen::MatrixXd jsq = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double m = -j + k;
        jsq(k, k) = 2.0 * j * (j + 1.0) - 2.0 * m * m;
        if (k + 1 < dim) {
            const double off = (j - m) * (j + m + 1.0);
            jsq(k, k + 1) = jsq(k + 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jsq);
    Eigen::VectorXd weights = Eigen::VectorXd::Zero(dim); // index = total spin J
    for (int i = 0; i < dim; ++i) {
        const double lambda = es.eigenvalues()(i);
        const int total_j = static_cast<int>(std::lround(0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * lambda))));
        if (total_j < 0 || total_j > n_sites)
            throw consistency_error("pair_spin_weights: unexpected total spin");
        const double c = es.eigenvectors()(dim - 1, i); // overlap with |j>_B|-j>_C
        weights(total_j) += c * c;
    }
    return weights;
}

SectorModel::SectorModel(int n_sites, const Couplings& a, double weight_cut)
    : n_(n_sites), a_(a) {
    if (n_sites < 1) throw argument_error("SectorModel: need N >= 1");
    ladder_ = ladder_amps(n_);
    laser_dx_diag_.resize(n_ + 1);
    for (int k = 0; k <= n_; ++k) laser_dx_diag_(k) = 2.0 * (-0.5 * n_ + k);

    Eigen::VectorXd w = pair_spin_weights(n_);
    retained_mass_ = 0.0;
    for (int total_j = 0; total_j <= n_; ++total_j) {
        if (w(total_j) < weight_cut) continue;
        Sector s;
        s.total_spin = total_j;
        s.weight = w(total_j);
        s.psi = Eigen::MatrixXcd::Zero(2 * total_j + 1, n_ + 1);
        // initial state: laser top weight (+x), clouds in the M_x = 0 state
        s.psi(total_j, n_) = 1.0;
        s.ladder = ladder_amps(2 * total_j);
        sectors_.push_back(std::move(s));
        retained_mass_ += w(total_j);
    }
    const double allowed_loss = std::max(1e-10, 10.0 * weight_cut * (n_ + 1));
    if (retained_mass_ < 1.0 - allowed_loss)
        throw consistency_error("SectorModel: truncated too much weight");
}

void SectorModel::h_apply(const Sector& s, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& tmp,
                          Eigen::MatrixXcd& tmp2,
                          Eigen::Map<Eigen::MatrixXcd>& out) const {
    const int two_j = 2 * s.total_spin;
    const Eigen::VectorXd& lb = s.ladder;
    out.setZero();
    const double scale = 1.0 / (2.0 * n_);
    if (a_.ax != 0.0) {
        left_dx(two_j, in, tmp);
        right_dx(n_, tmp, tmp2);
        out += (scale * a_.ax) * tmp2;
    }
    if (a_.ay != 0.0) {
        left_dy(lb, two_j, in, tmp);
        right_dy(ladder_, n_, tmp, tmp2);
        out += (scale * a_.ay) * tmp2;
    }
    if (a_.az != 0.0) {
        left_dz(lb, two_j, in, tmp);
        right_dz(ladder_, n_, tmp, tmp2);
        out += (scale * a_.az) * tmp2;
    }
}

void SectorModel::advance(double dt) {
    if (dt == 0.0) return;
    if (dt < 0) throw argument_error("SectorModel::advance: dt must be >= 0");
    // sectors evolve independently; fan out in deterministic order
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= sectors_.size()) return;
            try {
                advance_sector(sectors_[i], dt);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < hw; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    time_ += dt;
}

void SectorModel::advance_sector(Sector& s, double dt) const {
    {
        Sector& sec = s;
        const int rows = 2 * sec.total_spin + 1;
        const int cols = n_ + 1;
        Eigen::MatrixXcd work(rows, cols);
        Eigen::MatrixXcd scratch(rows, cols);
        MatVec mv = [this, &sec, rows, cols, &work, &scratch](const Eigen::VectorXcd& in,
                                                              Eigen::VectorXcd& out) {
            Eigen::Map<const Eigen::MatrixXcd> min(in.data(), rows, cols);
            out.resize(in.size());
            Eigen::Map<Eigen::MatrixXcd> mout(out.data(), rows, cols);
            h_apply(sec, min, work, scratch, mout);
        };
        LanczosOptions opts;
        opts.krylov_dim = 18;
        // low-weight sectors contribute proportionally less to every
        // observable, so their propagation tolerance can relax accordingly
        opts.tol = std::min(1e-4, std::max(1e-11, 1e-13 / sec.weight));
        Eigen::Map<const Eigen::VectorXcd> flat(s.psi.data(), rows * cols);
        Eigen::VectorXcd evolved = lanczos_expv(mv, flat, dt, opts);
        s.psi = Eigen::Map<const Eigen::MatrixXcd>(evolved.data(), rows, cols);
    }
}

double SectorModel::laser_dy_mean() const {
    double acc = 0.0;
    for (const auto& s : sectors_) {
        Eigen::MatrixXcd tmp(s.psi.rows(), s.psi.cols());
        right_dy(ladder_, n_, s.psi, tmp);
        acc += s.weight * std::real((s.psi.conjugate().cwiseProduct(tmp)).sum());
    }
    return acc;
}

double SectorModel::laser_dy_second() const {
    double acc = 0.0;
    for (const auto& s : sectors_) {
        Eigen::MatrixXcd tmp(s.psi.rows(), s.psi.cols());
        right_dy(ladder_, n_, s.psi, tmp);
        acc += s.weight * std::real((tmp.conjugate().cwiseProduct(tmp)).sum());
    }
    return acc;
}

double SectorModel::bc_dy_mean() const {
    double acc = 0.0;
    for (const auto& s : sectors_) {
        const int two_j = 2 * s.total_spin;
        const Eigen::VectorXd& lb = s.ladder;
        Eigen::MatrixXcd tmp(s.psi.rows(), s.psi.cols());
        left_dy(lb, two_j, s.psi, tmp);
        acc += s.weight * std::real((s.psi.conjugate().cwiseProduct(tmp)).sum());
    }
    return acc;
}

double SectorModel::bc_dy_second() const {
    double acc = 0.0;
    for (const auto& s : sectors_) {
        const int two_j = 2 * s.total_spin;
        const Eigen::VectorXd& lb = s.ladder;
        Eigen::MatrixXcd tmp(s.psi.rows(), s.psi.cols());
        left_dy(lb, two_j, s.psi, tmp);
        acc += s.weight * std::real((tmp.conjugate().cwiseProduct(tmp)).sum());
    }
    return acc;
}

double SectorModel::bc_dz_mean() const {
    double acc = 0.0;
    for (const auto& s : sectors_) {
        const int two_j = 2 * s.total_spin;
        const Eigen::VectorXd& lb = s.ladder;
        Eigen::MatrixXcd tmp(s.psi.rows(), s.psi.cols());
        left_dz(lb, two_j, s.psi, tmp);
        acc += s.weight * std::real((s.psi.conjugate().cwiseProduct(tmp)).sum());
    }
    return acc;
}

double SectorModel::bc_dz_second() const {
    double acc = 0.0;
    for (const auto& s : sectors_) {
        const int two_j = 2 * s.total_spin;
        const Eigen::VectorXd& lb = s.ladder;
        Eigen::MatrixXcd tmp(s.psi.rows(), s.psi.cols());
        left_dz(lb, two_j, s.psi, tmp);
        acc += s.weight * std::real((tmp.conjugate().cwiseProduct(tmp)).sum());
    }
    return acc;
}

} // namespace mf
} // namespace fluctsim
