#include "fluctsim/witness.hpp"

#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "fluctsim/errors.hpp"

namespace fluctsim {

SymplecticSpace two_cloud_space() {
    Eigen::MatrixXd form = Eigen::MatrixXd::Zero(4, 4);
    // mode B = (J_y^+, J_z^+), [J_y^+, J_z^+] = +i
    form(0, 1) = 1.0;
    form(1, 0) = -1.0;
    // mode C = (J_z^-, J_y^-), [J_z^-, J_y^-] = +i i.e. [J_y^-, J_z^-] = -i
    form(2, 3) = 1.0;
    form(3, 2) = -1.0;
    return SymplecticSpace({"J_y+", "J_z+", "J_z-", "J_y-"}, form);
}

namespace {

void require_two_cloud(const GaussianState& state) {
    if (state.dim() != 4)
        throw argument_error("witness: state must live on exactly four generators");
    const SymplecticSpace ref = two_cloud_space();
    if (!state.space().same_as(ref, 1e-12))
        throw argument_error("witness: state must use the canonical two-cloud generator set "
                             "(J_y+, J_z+, J_z-, J_y-) with [J_y+-, J_z+-] = +-i");
}

// Generators a full-space affine map actually acts on (row, column or shift
// differs from the identity map).
std::set<int> support_of(const AffineSymplecticMap& map) {
    std::set<int> touched;
    const int n = map.space().dim();
    const Eigen::MatrixXd& s = map.linear();
    for (int k = 0; k < n; ++k) {
        bool id_row = true, id_col = true;
        for (int j = 0; j < n; ++j) {
            if (s(k, j) != ((j == k) ? 1.0 : 0.0)) id_row = false;
            if (s(j, k) != ((j == k) ? 1.0 : 0.0)) id_col = false;
        }
        if (!id_row || !id_col || map.shift()(k) != 0.0) touched.insert(k);
    }
    return touched;
}

} // namespace

double variance_witness(const GaussianState& state) {
    require_two_cloud(state);
    const auto& sp = state.space();
    Eigen::VectorXd jy = Eigen::VectorXd::Zero(4), jz = Eigen::VectorXd::Zero(4);
    jy(sp.index("J_y+")) = 1.0;
    jy(sp.index("J_y-")) = 1.0;
    jz(sp.index("J_z+")) = 1.0;
    jz(sp.index("J_z-")) = 1.0;
    return variance(state, jy) + variance(state, jz);
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& form) {
    if (cov.rows() != form.rows() || cov.cols() != form.cols())
        throw argument_error("symplectic_eigenvalues: dimension mismatch");
    // eigenvalues of sigma V are +- i nu; collect |Im| in descending pairs
    Eigen::EigenSolver<Eigen::MatrixXd> es(form * cov);
    Eigen::VectorXd nus(cov.rows() / 2);
    std::vector<double> mags;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        mags.push_back(std::abs(es.eigenvalues()(k).imag()));
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    // values come in +/- pairs; take every other one
    for (Eigen::Index k = 0; k < nus.size(); ++k) nus(k) = mags[static_cast<size_t>(2 * k)];
    return nus;
}

double ppt_min_symplectic_eigenvalue(const GaussianState& state) {
    require_two_cloud(state);
    // partial transpose of mode C: flip its momentum J_y^-
    Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
    Eigen::MatrixXd v_pt = flip.asDiagonal() * state.cov() * flip.asDiagonal();
    Eigen::VectorXd nus = symplectic_eigenvalues(v_pt, state.space().form());
    return nus.minCoeff();
}

PptVerdict ppt_check(const GaussianState& state) {
    const double nu_min = ppt_min_symplectic_eigenvalue(state);
    return (nu_min < 0.5 - 1e-12) ? PptVerdict::entangled_npt : PptVerdict::separable_ppt;
}

GaussianState local_symplectic(const GaussianState& state,
                               const AffineSymplecticMap& mapB,
                               const AffineSymplecticMap& mapC) {
    require_two_cloud(state);
    if (!mapB.space().same_as(state.space()) || !mapC.space().same_as(state.space()))
        throw argument_error("local_symplectic: maps must live on the two-cloud space");
    std::set<int> sb = support_of(mapB), sc = support_of(mapC);
    for (int k : sb)
        if (k > 1)
            throw argument_error("local_symplectic: overlapping supports (mapB touches mode C)");
    for (int k : sc)
        if (k < 2)
            throw argument_error("local_symplectic: overlapping supports (mapC touches mode B)");
    return apply(mapB.compose(mapC), state);
}

AffineSymplecticMap embed_mode_map(const SymplecticSpace& two_cloud,
                                   const Eigen::Matrix2d& block,
                                   const Eigen::Vector2d& shift,
                                   int which_mode) {
    if (which_mode != 0 && which_mode != 1)
        throw argument_error("embed_mode_map: which_mode must be 0 (B) or 1 (C)");
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(4, 4);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(4);
    const int off = 2 * which_mode;
    s.block<2, 2>(off, off) = block;
    c.segment<2>(off) = shift;
    return AffineSymplecticMap(two_cloud, std::move(s), std::move(c));
}

} // namespace fluctsim
