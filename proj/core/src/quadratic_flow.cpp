#include "fluctsim/quadratic_flow.hpp"

#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "fluctsim/errors.hpp"

namespace fluctsim {

QuadraticHamiltonian::QuadraticHamiltonian(SymplecticSpace sp, Eigen::MatrixXd G, Eigen::VectorXd f)
    : space(std::move(sp)), quad(std::move(G)), lin(std::move(f)) {
    const int n = space.dim();
    if (quad.rows() != n || quad.cols() != n || lin.size() != n)
        throw argument_error("QuadraticHamiltonian: dimension mismatch");
    if ((quad - quad.transpose()).cwiseAbs().maxCoeff() != 0.0)
        throw argument_error("QuadraticHamiltonian: G must be symmetric (exactly)");
}

AffineSymplecticMap::AffineSymplecticMap(SymplecticSpace space, Eigen::MatrixXd linear,
                                         Eigen::VectorXd shift)
    : space_(std::move(space)), linear_(std::move(linear)), shift_(std::move(shift)) {
    const int n = space_.dim();
    if (linear_.rows() != n || linear_.cols() != n || shift_.size() != n)
        throw argument_error("AffineSymplecticMap: dimension mismatch");
    const Eigen::MatrixXd& sigma = space_.form();
    const double defect = (linear_ * sigma * linear_.transpose() - sigma).cwiseAbs().maxCoeff();
    // the absolute tolerance is meaningful for O(1) maps; beyond that the
    // roundoff floor of the defect itself grows like ||S||^2 eps
    const double smax = linear_.cwiseAbs().maxCoeff();
    const double dims = static_cast<double>(space_.dim());
    const double tol = std::max(kFormTol, 20.0 * dims * 2.2e-16 * smax * smax);
    if (defect > tol) {
        std::ostringstream msg;
        msg << "AffineSymplecticMap: S sigma S^T != sigma (defect " << defect << ", tol " << tol
            << ")";
        throw argument_error(msg.str());
    }
}

AffineSymplecticMap AffineSymplecticMap::compose(const AffineSymplecticMap& inner) const {
    if (!space_.same_as(inner.space_))
        throw argument_error("AffineSymplecticMap::compose: spaces differ");
    return AffineSymplecticMap(space_, linear_ * inner.linear_, linear_ * inner.shift_ + shift_);
}

AffineSymplecticMap AffineSymplecticMap::identity(const SymplecticSpace& space) {
    const int n = space.dim();
    return AffineSymplecticMap(space, Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n));
}

AffineSymplecticMap flow(const QuadraticHamiltonian& h, double t) {
    if (!std::isfinite(t)) throw argument_error("flow: t must be finite");
    const int n = h.space.dim();
    const Eigen::MatrixXd& sigma = h.space.form();

    // Augmented generator [[sigma G, sigma f],[0, 0]]: its exponential holds
    // both S = exp(t sigma G) and the shift integral in the last column.
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = sigma * h.quad;
    aug.topRightCorner(n, 1) = sigma * h.lin;
    Eigen::MatrixXd e = (t * aug).exp();

    return AffineSymplecticMap(h.space, e.topLeftCorner(n, n), e.topRightCorner(n, 1));
}

GaussianState apply(const AffineSymplecticMap& map, const GaussianState& state) {
    if (!map.space().same_as(state.space()))
        throw argument_error("apply: map and state live on different spaces");
    const Eigen::MatrixXd& s = map.linear();
    Eigen::VectorXd mean = s * state.mean() + map.shift();
    Eigen::MatrixXd cov = s * state.cov() * s.transpose();
    cov = 0.5 * (cov + cov.transpose().eval()); // exact formula is symmetric
    return GaussianState(state.space(), std::move(mean), std::move(cov));
}

} // namespace fluctsim
