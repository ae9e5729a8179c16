#include "fluctsim/measurement.hpp"

#include <algorithm>

#include <Eigen/LU>

#include "fluctsim/errors.hpp"

namespace fluctsim {

namespace {

void validate(const GaussianState& state, const GaussianMeasurement& meas) {
    const int n = state.dim();
    if (meas.measured.empty())
        throw argument_error("condition: measured block must be nonempty");
    std::vector<int> sorted = meas.measured;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw argument_error("condition: duplicate measured index");
    for (int k : meas.measured)
        if (k < 0 || k >= n) throw argument_error("condition: measured index out of range");
    if (static_cast<int>(meas.measured.size()) == n)
        throw argument_error("condition: measuring every generator leaves no state");

    const auto m = static_cast<Eigen::Index>(meas.measured.size());
    if (meas.resolution.rows() != m || meas.resolution.cols() != m)
        throw argument_error("condition: resolution W has wrong dimensions");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(meas.resolution, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw argument_error("condition: resolution W must be positive semidefinite");

    const Eigen::MatrixXd& sigma = state.space().form();
    if (meas.kind == GaussianMeasurement::Kind::abelian_density) {
        for (int a : meas.measured)
            for (int b : meas.measured)
                if (sigma(a, b) != 0.0)
                    throw argument_error(
                        "condition: abelian-density measurement requires mutually commuting generators");
    } else {
        // pure projector: full mode pairs, det W = 1/4 per pair
        if (m % 2 != 0)
            throw argument_error("condition: pure-projector measurement needs full mode pairs");
        for (Eigen::Index p = 0; p + 1 < m; p += 2) {
            Eigen::Matrix2d w = meas.resolution.block<2, 2>(p, p);
            if (std::abs(std::abs(sigma(meas.measured[static_cast<size_t>(p)],
                                        meas.measured[static_cast<size_t>(p + 1)])) - 1.0) > 1e-12)
                throw argument_error("condition: pure-projector pair must be conjugate, |sigma| = 1");
            if (std::abs(w.determinant() - 0.25) > GaussianMeasurement::kPureDetTol)
                throw argument_error("condition: pure-projector seed must satisfy det W = 1/4");
        }
    }
}

} // namespace

GaussianState condition(const GaussianState& state,
                        const GaussianMeasurement& meas,
                        const Eigen::VectorXd& outcome) {
    validate(state, meas);
    const int n = state.dim();
    const auto m = static_cast<Eigen::Index>(meas.measured.size());
    if (outcome.size() != m)
        throw argument_error("condition: outcome dimension mismatch");

    // Generators conjugate to a measured one are disturbed by measurement
    // back-action; classical conditioning says nothing valid about them, so
    // they leave the description together with the measured block.  (For the
    // pure-projector kind the measured set is full modes and nothing extra
    // is dropped.)
    std::vector<char> removed_mask(static_cast<size_t>(n), 0);
    for (int k : meas.measured) removed_mask[static_cast<size_t>(k)] = 1;
    const Eigen::MatrixXd& sigma = state.space().form();
    for (int k = 0; k < n; ++k) {
        if (removed_mask[static_cast<size_t>(k)]) continue;
        for (int a : meas.measured)
            if (sigma(k, a) != 0.0) {
                removed_mask[static_cast<size_t>(k)] = 1;
                break;
            }
    }
    std::vector<int> kept;
    kept.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        if (!removed_mask[static_cast<size_t>(k)]) kept.push_back(k);
    if (kept.empty())
        throw argument_error("condition: no generators survive the measurement");
    const auto r = static_cast<Eigen::Index>(kept.size());

    Eigen::MatrixXd v_aa(m, m), v_ba(r, m), v_bb(r, r);
    Eigen::VectorXd m_a(m), m_b(r);
    for (Eigen::Index i = 0; i < m; ++i) {
        int gi = meas.measured[static_cast<size_t>(i)];
        m_a(i) = state.mean()(gi);
        for (Eigen::Index j = 0; j < m; ++j)
            v_aa(i, j) = state.cov()(gi, meas.measured[static_cast<size_t>(j)]);
        for (Eigen::Index b = 0; b < r; ++b)
            v_ba(b, i) = state.cov()(kept[static_cast<size_t>(b)], gi);
    }
    for (Eigen::Index b = 0; b < r; ++b) {
        m_b(b) = state.mean()(kept[static_cast<size_t>(b)]);
        for (Eigen::Index c = 0; c < r; ++c)
            v_bb(b, c) = state.cov()(kept[static_cast<size_t>(b)], kept[static_cast<size_t>(c)]);
    }

    Eigen::MatrixXd gram = v_aa + meas.resolution;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible())
        throw singularity_error("condition: V_A + W is singular");
    Eigen::MatrixXd gain = v_ba * lu.inverse(); // V_BA (V_A + W)^-1

    Eigen::MatrixXd cov = v_bb - gain * v_ba.transpose();
    Eigen::VectorXd mean = m_b + gain * (outcome - m_a);
    cov = 0.5 * (cov + cov.transpose().eval());

    return GaussianState(state.space().restrict(kept), std::move(mean), std::move(cov));
}

} // namespace fluctsim
