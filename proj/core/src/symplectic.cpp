#include "fluctsim/symplectic.hpp"

#include <algorithm>

#include "fluctsim/errors.hpp"

namespace fluctsim {

SymplecticSpace::SymplecticSpace(std::vector<std::string> labels, Eigen::MatrixXd form)
    : labels_(std::move(labels)), form_(std::move(form)) {
    const auto n = static_cast<Eigen::Index>(labels_.size());
    if (form_.rows() != n || form_.cols() != n)
        throw argument_error("SymplecticSpace: form must be n x n with n = #labels");
    if ((form_ + form_.transpose()).cwiseAbs().maxCoeff() != 0.0) {
        // enforce exact antisymmetry; reject anything that is not
        if ((form_ + form_.transpose()).cwiseAbs().maxCoeff() > 1e-14)
            throw argument_error("SymplecticSpace: form must be antisymmetric");
        form_ = 0.5 * (form_ - form_.transpose().eval());
    }
}

int SymplecticSpace::index(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw argument_error("SymplecticSpace: no generator labeled '" + label + "'");
    return static_cast<int>(it - labels_.begin());
}

bool SymplecticSpace::has(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

bool SymplecticSpace::is_central(int k) const {
    if (k < 0 || k >= dim()) throw argument_error("SymplecticSpace: index out of range");
    return form_.row(k).cwiseAbs().maxCoeff() == 0.0;
}

SymplecticSpace SymplecticSpace::restrict(const std::vector<int>& keep) const {
    if (keep.empty()) throw argument_error("SymplecticSpace: empty restriction");
    std::vector<std::string> labels;
    labels.reserve(keep.size());
    const auto m = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        int ki = keep[static_cast<size_t>(i)];
        if (ki < 0 || ki >= dim()) throw argument_error("SymplecticSpace: restriction index out of range");
        labels.push_back(labels_[static_cast<size_t>(ki)]);
        for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = form_(ki, keep[static_cast<size_t>(j)]);
    }
    return SymplecticSpace(std::move(labels), std::move(sub));
}

bool SymplecticSpace::same_as(const SymplecticSpace& other, double tol) const {
    if (labels_ != other.labels_) return false;
    return (form_ - other.form_).cwiseAbs().maxCoeff() <= tol;
}

SymplecticSpace SymplecticSpace::canonical(int n_modes) {
    if (n_modes < 1) throw argument_error("SymplecticSpace::canonical: need at least one mode");
    std::vector<std::string> labels;
    Eigen::MatrixXd form = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        labels.push_back("x" + std::to_string(k));
        labels.push_back("p" + std::to_string(k));
        form(2 * k, 2 * k + 1) = 1.0;
        form(2 * k + 1, 2 * k) = -1.0;
    }
    return SymplecticSpace(std::move(labels), std::move(form));
}

} // namespace fluctsim
