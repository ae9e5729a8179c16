#ifndef FLUCTSIM_DICKE_HPP
#define FLUCTSIM_DICKE_HPP

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace fluctsim {
namespace mf {

using SparseC = Eigen::SparseMatrix<std::complex<double>>;

/* Spin-j angular momentum matrices in the standard |j,m> ladder basis,
 * m = -j..j (index 0 = m = -j), dimension 2j+1.  two_j is 2j. */
Eigen::MatrixXcd spin_jz(int two_j);
Eigen::MatrixXcd spin_jplus(int two_j);
Eigen::MatrixXcd spin_jx(int two_j);
Eigen::MatrixXcd spin_jy(int two_j);

/* Collective Pauli sums of N spins restricted to the maximal-spin (j = N/2)
 * symmetric sector, in a basis quantized along the X axis:
 *   D_x = 2 Jz_std,  D_y = 2 Jx_std,  D_z = 2 Jy_std,
 * which keeps [D_x, D_y] = 2i D_z cyclic.  Dimension N+1. */
Eigen::MatrixXcd dicke_dx(int n_sites);
Eigen::MatrixXcd dicke_dy(int n_sites);
Eigen::MatrixXcd dicke_dz(int n_sites);

/* Coherent product state with every spin polarized along +x (sign=+1) or -x
 * (sign=-1), as a vector in the x-quantized Dicke basis: the extremal weight
 * state. */
Eigen::VectorXcd dicke_polarized_x(int n_sites, int sign);

// Kronecker helpers for the full tensor-product representation.
SparseC kron(const SparseC& a, const SparseC& b);
SparseC sparse_from_dense(const Eigen::MatrixXcd& m);
// sum over sites of a single-site Pauli operator on N spin-1/2 sites
SparseC collective_pauli_sum(const Eigen::MatrixXcd& site_op, int n_sites);

} // namespace mf
} // namespace fluctsim

#endif
