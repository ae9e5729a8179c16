#include "fluctsim/dicke.hpp"

#include <cmath>
#include <vector>

#include "fluctsim/errors.hpp"

namespace fluctsim {
namespace mf {

using cd = std::complex<double>;

Eigen::MatrixXcd spin_jz(int two_j) {
    if (two_j < 0) throw argument_error("spin_jz: 2j must be nonnegative");
    const int d = two_j + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) m(k, k) = -0.5 * two_j + k;
    return m;
}

Eigen::MatrixXcd spin_jplus(int two_j) {
    const int d = two_j + 1;
    const double j = 0.5 * two_j;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k + 1 < d; ++k) {
        const double mm = -j + k;
        m(k + 1, k) = std::sqrt((j - mm) * (j + mm + 1.0));
    }
    return m;
}

Eigen::MatrixXcd spin_jx(int two_j) {
    Eigen::MatrixXcd jp = spin_jplus(two_j);
    return 0.5 * (jp + jp.adjoint().eval());
}

Eigen::MatrixXcd spin_jy(int two_j) {
    Eigen::MatrixXcd jp = spin_jplus(two_j);
    return cd(0, -0.5) * (jp - jp.adjoint().eval());
}

Eigen::MatrixXcd dicke_dx(int n_sites) { return 2.0 * spin_jz(n_sites); }
Eigen::MatrixXcd dicke_dy(int n_sites) { return 2.0 * spin_jx(n_sites); }
Eigen::MatrixXcd dicke_dz(int n_sites) { return 2.0 * spin_jy(n_sites); }

Eigen::VectorXcd dicke_polarized_x(int n_sites, int sign) {
    if (n_sites < 1) throw argument_error("dicke_polarized_x: need at least one site");
    if (sign != 1 && sign != -1) throw argument_error("dicke_polarized_x: sign must be +-1");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n_sites + 1);
    // x-quantized basis: +x is the top weight (m = +j), -x the bottom
    v(sign > 0 ? n_sites : 0) = 1.0;
    return v;
}

SparseC sparse_from_dense(const Eigen::MatrixXcd& m) {
    SparseC s(m.rows(), m.cols());
    std::vector<Eigen::Triplet<cd>> trips;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != cd(0, 0)) trips.emplace_back(i, j, m(i, j));
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

SparseC kron(const SparseC& a, const SparseC& b) {
    SparseC out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<cd>> trips;
    trips.reserve(static_cast<size_t>(a.nonZeros()) * static_cast<size_t>(b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseC::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseC::InnerIterator ib(b, kb); ib; ++ib)
                    trips.emplace_back(ia.row() * b.rows() + ib.row(),
                                       ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SparseC collective_pauli_sum(const Eigen::MatrixXcd& site_op, int n_sites) {
    if (n_sites < 1) throw argument_error("collective_pauli_sum: need at least one site");
    const SparseC op = sparse_from_dense(site_op);
    const SparseC id2 = sparse_from_dense(Eigen::MatrixXcd::Identity(2, 2));
    SparseC total;
    for (int site = 0; site < n_sites; ++site) {
        SparseC term = (site == 0) ? op : id2;
        for (int k = 1; k < n_sites; ++k) term = kron(term, (k == site) ? op : id2);
        total = (site == 0) ? term : SparseC(total + term);
    }
    return total;
}

} // namespace mf
} // namespace fluctsim
