#ifndef FLUCTSIM_SYMPLECTIC_HPP
#define FLUCTSIM_SYMPLECTIC_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fluctsim {

/* A finite set of fluctuation generators Q_k together with their commutator
 * form, [Q_k, Q_l] = i * sigma_kl (dimensionless, hbar = 1).  sigma is real
 * antisymmetric and may have identically zero rows: those generators are
 * central (classical) directions and all of the Gaussian calculus treats
 * them as ordinary classical Gaussian variables. */
class SymplecticSpace {
public:
    SymplecticSpace(std::vector<std::string> labels, Eigen::MatrixXd form);

    int dim() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Eigen::MatrixXd& form() const { return form_; }

    // Index of a generator by label; throws argument_error if absent.
    int index(const std::string& label) const;
    bool has(const std::string& label) const;

    // True if the generator's sigma row vanishes identically.
    bool is_central(int k) const;

    // Restriction of the space to a subset of generators (order preserved
    // as given in `keep`).
    SymplecticSpace restrict(const std::vector<int>& keep) const;

    bool same_as(const SymplecticSpace& other, double tol = 0.0) const;

    // n canonical (x,p) pairs, [x_k, p_k] = i; labels x0,p0,x1,p1,...
    static SymplecticSpace canonical(int n_modes);

private:
    std::vector<std::string> labels_;
    Eigen::MatrixXd form_;
};

} // namespace fluctsim

#endif
