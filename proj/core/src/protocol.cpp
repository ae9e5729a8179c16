#include "fluctsim/protocol.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "fluctsim/errors.hpp"
#include "fluctsim/rng.hpp"
#include "fluctsim/spin_chain.hpp"

namespace fluctsim {
namespace proto {

using cd = std::complex<double>;

double ProtocolParams::c_t() const { return std::cos(s * ax * t); }
double ProtocolParams::s_t() const { return std::sin(s * ax * t); }
double ProtocolParams::period() const { return 2.0 * M_PI / (s * ax); }

bool ProtocolParams::closed_forms_available() const {
    return ax > 0.0 && s == 1.0 && gamma == 1.0;
}

void ProtocolParams::validate() const {
    if (!(s > 0.0) || s > 1.0)
        throw argument_error("ProtocolParams: need laser polarization 0 < s <= 1");
    if (!(gamma > 0.0) || gamma > 1.0)
        throw argument_error("ProtocolParams: need cloud polarization 0 < gamma <= 1");
    if (ax < 0 || ay < 0 || az < 0)
        throw argument_error("ProtocolParams: couplings must be nonnegative");
    if (!(a > 0.0)) throw argument_error("ProtocolParams: laser width a must be positive");
    if (d < 0.0) throw argument_error("ProtocolParams: resolution d must be nonnegative");
    if (!std::isfinite(t)) throw argument_error("ProtocolParams: time must be finite");
    if (measurement != Measurement::none && ax == 0.0)
        throw argument_error("ProtocolParams: closed forms are undefined at a_x = 0; "
                             "use a decreasing a_x sequence instead");
}

namespace {

const std::vector<std::string>& generator_labels() {
    static const std::vector<std::string> labels = {"S_x",  "S_y",  "S_z",  "J_x+", "J_y+",
                                                    "J_z+", "J_x-", "J_y-", "J_z-"};
    return labels;
}

Eigen::MatrixXcd kron3(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                       const Eigen::MatrixXcd& c) {
    Eigen::MatrixXcd ab(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            ab.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    Eigen::MatrixXcd out(ab.rows() * c.rows(), ab.cols() * c.cols());
    for (Eigen::Index i = 0; i < ab.rows(); ++i)
        for (Eigen::Index j = 0; j < ab.cols(); ++j)
            out.block(i * c.rows(), j * c.cols(), c.rows(), c.cols()) = ab(i, j) * c;
    return out;
}

} // namespace

SymplecticSpace protocol_space() {
    Eigen::MatrixXd form = Eigen::MatrixXd::Zero(9, 9);
    auto set = [&form](int i, int j, double v) {
        form(i, j) = v;
        form(j, i) = -v;
    };
    set(1, 2, 1.0);  // [S_y, S_z] = i
    set(4, 5, 1.0);  // [J_y+, J_z+] = i
    set(7, 8, -1.0); // [J_y-, J_z-] = -i
    return SymplecticSpace(generator_labels(), form);
}

GaussianState initial_state(const ProtocolParams& p) {
    p.validate();

    // one composite site = laser x cloud+ x cloud- two-level systems
    const Eigen::MatrixXcd id = chain::pauli_id();
    Eigen::MatrixXcd rho = kron3(0.5 * (id + p.s * chain::pauli_x()),
                                 0.5 * (id + p.gamma * chain::pauli_x()),
                                 0.5 * (id - p.gamma * chain::pauli_x()));
    chain::SingleSiteState site(std::move(rho));

    std::vector<chain::LocalObservable> obs;
    const Eigen::MatrixXcd paulis[3] = {chain::pauli_x(), chain::pauli_y(), chain::pauli_z()};
    const char axes[3] = {'x', 'y', 'z'};
    for (int k = 0; k < 3; ++k)
        obs.emplace_back(kron3(paulis[k], id, id), std::string("S_") + axes[k]);
    for (int k = 0; k < 3; ++k)
        obs.emplace_back(kron3(id, paulis[k], id), std::string("J_") + axes[k] + "+");
    for (int k = 0; k < 3; ++k)
        obs.emplace_back(kron3(id, id, paulis[k]), std::string("J_") + axes[k] + "-");

    auto [pauli_space, pauli_state] = chain::weyl_map(site, obs);

    // canonical rescaling: cloud pairs by 1/sqrt(2 gamma), laser pair by
    // 1/sqrt(2 s); the central x-directions keep their microscopic scale
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(9);
    const double ls = 1.0 / std::sqrt(2.0 * p.s);
    const double cs = 1.0 / std::sqrt(2.0 * p.gamma);
    scale(1) = scale(2) = ls;
    scale(4) = scale(5) = cs;
    scale(7) = scale(8) = cs;

    Eigen::MatrixXd cov = scale.asDiagonal() * pauli_state.cov() * scale.asDiagonal();
    Eigen::MatrixXd form = scale.asDiagonal() * pauli_space.form() * scale.asDiagonal();

    // snap the canonical form entries exactly; the rescale already puts them
    // within roundoff of 0 or +-1
    const SymplecticSpace target = protocol_space();
    if ((form - target.form()).cwiseAbs().maxCoeff() > 1e-12)
        throw consistency_error("initial_state: rescaled form is not canonical");

    return GaussianState(target, Eigen::VectorXd::Zero(9), std::move(cov));
}

GaussianState prepare_laser(const ProtocolParams& p, const GaussianState& state) {
    if (!state.space().same_as(protocol_space(), 1e-12))
        throw argument_error("prepare_laser: state must live on the protocol space");
    Eigen::MatrixXd cov = state.cov();
    const int iy = 1, iz = 2;
    for (int k = 0; k < 9; ++k) {
        cov(iy, k) = cov(k, iy) = 0.0;
        cov(iz, k) = cov(k, iz) = 0.0;
    }
    cov(iy, iy) = 1.0 / p.a;
    cov(iz, iz) = 0.25 * p.a;
    return GaussianState(state.space(), state.mean(), std::move(cov));
}

QuadraticHamiltonian generator(const ProtocolParams& p) {
    p.validate();
    const SymplecticSpace space = protocol_space();
    const double omega = p.s * p.ax;
    const double root = std::sqrt(p.s * p.gamma);
    const double gy = p.ay * root;
    const double gz = p.az * root;

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(9, 9);
    const int Sy = 1, Sz = 2, Jyp = 4, Jzp = 5, Jym = 7, Jzm = 8;
    // cloud rotation at frequency s a_x, opposite quadratic sign per cloud so
    // the collective sums rotate with the +sin orientation
    g(Jyp, Jyp) = g(Jzp, Jzp) = omega;
    g(Jym, Jym) = g(Jzm, Jzm) = -omega;
    // laser-cloud couplings
    g(Sy, Jyp) = g(Jyp, Sy) = gy;
    g(Sy, Jym) = g(Jym, Sy) = gy;
    g(Sz, Jzp) = g(Jzp, Sz) = gz;
    g(Sz, Jzm) = g(Jzm, Sz) = gz;
    return QuadraticHamiltonian(space, std::move(g), Eigen::VectorXd::Zero(9));
}

namespace {

// transformed basis (S_x, S_y, S_z, J_x+, J_x-, U_y, U_z, W_y, W_z) with
// U = J^+ + J^-, W = J^+ - J^-; the cloud sums are stored directly, which
// keeps their O(1) statistics free of cancellations between large
// difference-mode entries at stiff coupling ratios
const Eigen::MatrixXd& suw_transform() { // q_suw = T q_std
    static const Eigen::MatrixXd t = [] {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(9, 9);
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0; // S_x, S_y, S_z
        m(3, 3) = 1.0;                     // J_x+
        m(4, 6) = 1.0;                     // J_x-
        m(5, 4) = m(5, 7) = 1.0;           // U_y
        m(6, 5) = m(6, 8) = 1.0;           // U_z
        m(7, 4) = 1.0;                     // W_y
        m(7, 7) = -1.0;
        m(8, 5) = 1.0;                     // W_z
        m(8, 8) = -1.0;
        return m;
    }();
    return t;
}

const Eigen::MatrixXd& suw_inverse() { // q_std = T^-1 q_suw
    static const Eigen::MatrixXd t = [] {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(9, 9);
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        m(3, 3) = 1.0;
        m(6, 4) = 1.0;
        m(4, 5) = m(4, 7) = 0.5;  // J_y+
        m(7, 5) = 0.5;            // J_y-
        m(7, 7) = -0.5;
        m(5, 6) = m(5, 8) = 0.5;  // J_z+
        m(8, 6) = 0.5;            // J_z-
        m(8, 8) = -0.5;
        return m;
    }();
    return t;
}

const SymplecticSpace& suw_space() {
    static const SymplecticSpace sp = [] {
        const Eigen::MatrixXd& t = suw_transform();
        Eigen::MatrixXd form = t * protocol_space().form() * t.transpose();
        return SymplecticSpace({"S_x", "S_y", "S_z", "J_x+", "J_x-", "U_y", "U_z", "W_y", "W_z"},
                               std::move(form));
    }();
    return sp;
}

Eigen::MatrixXd exact_flow_matrix_suw(const ProtocolParams& p, double t) {
    const double omega = p.s * p.ax;
    const double root = std::sqrt(p.s * p.gamma);
    const double gy = p.ay * root;
    const double gz = p.az * root;

    enum { Sx = 0, Sy = 1, Sz = 2, Jxp = 3, Jxm = 4, Uy = 5, Uz = 6, Wy = 7, Wz = 8 };
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(9, 9);

    if (omega != 0.0) {
        const double ct = std::cos(omega * t);
        const double st = std::sin(omega * t);
        const double half = std::sin(0.5 * omega * t);
        const double omc = 2.0 * half * half; // 1 - cos, no cancellation
        const double kz = gz / omega;
        const double ky = gy / omega;

        m(Sy, Uy) = -kz * omc;
        m(Sy, Uz) = kz * st;
        m(Sz, Uy) = -ky * st;
        m(Sz, Uz) = -ky * omc;

        m(Uy, Uy) = ct;
        m(Uy, Uz) = st;
        m(Uz, Uy) = -st;
        m(Uz, Uz) = ct;

        m(Wy, Wy) = ct;
        m(Wy, Wz) = st;
        m(Wz, Wy) = -st;
        m(Wz, Wz) = ct;

        // driven part of (W_y, W_z): drive D(u) = M0 q + Mc q cos(omega u)
        // + Ms q sin(omega u) on q = (S_y, S_z, U_y, U_z) at time zero
        Eigen::Matrix<double, 2, 4> m0, mc, ms;
        m0 << 0.0, 2.0 * gz, 0.0, -2.0 * gz * ky,
              -2.0 * gy, 0.0, 2.0 * gy * kz, 0.0;
        mc << 0.0, 0.0, 0.0, 2.0 * gz * ky,
              0.0, 0.0, -2.0 * gy * kz, 0.0;
        ms << 0.0, 0.0, -2.0 * gz * ky, 0.0,
              0.0, 0.0, 0.0, -2.0 * gy * kz;

        Eigen::Matrix2d a0, ac, as;
        a0 << st / omega, omc / omega, -omc / omega, st / omega;
        const double halfsum = 0.5 * t * ct + 0.5 * st / omega;
        const double halfdif = 0.5 * st / omega - 0.5 * t * ct;
        ac << halfsum, 0.5 * t * st, -0.5 * t * st, halfsum;
        as << 0.5 * t * st, halfdif, -halfdif, 0.5 * t * st;

        Eigen::Matrix<double, 2, 4> wblock = a0 * m0 + ac * mc + as * ms;
        const int qcols[4] = {Sy, Sz, Uy, Uz};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 4; ++c) m(Wy + r, qcols[c]) += wblock(r, c);
    } else {
        // no rotation: S drifts linearly, W picks up linear and quadratic terms
        m(Sy, Uz) = gz * t;
        m(Sz, Uy) = -gy * t;
        m(Wy, Sz) = 2.0 * gz * t;
        m(Wy, Uy) = -gz * gy * t * t;
        m(Wz, Sy) = -2.0 * gy * t;
        m(Wz, Uz) = -gy * gz * t * t;
    }

    return m;
}

} // namespace

AffineSymplecticMap exact_flow(const ProtocolParams& p, double t) {
    Eigen::MatrixXd linear =
        suw_inverse() * exact_flow_matrix_suw(p, t) * suw_transform();
    return AffineSymplecticMap(protocol_space(), std::move(linear), Eigen::VectorXd::Zero(9));
}

GaussianState evolve(const ProtocolParams& p, const GaussianState& state) {
    return apply(exact_flow(p, p.t), state);
}

GaussianState reduce_to_clouds(const GaussianState& state) {
    GaussianState reduced = marginal(state, std::vector<std::string>{"J_y+", "J_z+", "J_z-", "J_y-"});
    // present the result on the canonical witness space (identical labels
    // and form; this re-checks the canonical pattern)
    if (!reduced.space().same_as(two_cloud_space(), 1e-12))
        throw consistency_error("reduce_to_clouds: reduced form is not the canonical two-cloud one");
    return GaussianState(two_cloud_space(), reduced.mean(), reduced.cov());
}

std::pair<double, double> tau_hat_coefficients(const ProtocolParams& p) {
    AffineSymplecticMap full = exact_flow(p, p.t);
    ProtocolParams free = p;
    free.ay = free.az = 0.0;
    AffineSymplecticMap unrotate = exact_flow(free, -p.t);
    // tau_hat(Q) = tau_bar_{-t}(tau_tilde_t(Q)): substitute the rotated
    // generators inside the full map
    Eigen::MatrixXd mhat = full.linear() * unrotate.linear();
    const int Sy = 1, Jyp = 4, Jzp = 5, Jym = 7, Jzm = 8;
    const double at = mhat(Sy, Jyp), bt = mhat(Sy, Jzp);
    if (std::abs(mhat(Sy, Jym) - at) > 1e-10 || std::abs(mhat(Sy, Jzm) - bt) > 1e-10)
        throw consistency_error("tau_hat_coefficients: S_y admixture is not a pure J-sum");
    return {at, bt};
}

double ValuePair::abs_diff() const {
    return closed_form ? std::abs(*closed_form - oracle) : 0.0;
}

double PureCoefficients::sum() const { return (alpha + gamma) / (alpha * gamma - beta * beta); }

double abelian_delta_jz2(double a, double d, double ax, double az, double ct) {
    const double p = (a + d) * ax * ax;
    const double q = a * d * az * az;
    return (p + q * (ct - 1.0) * (ct - 1.0)) / (p + 2.0 * q * (1.0 - ct));
}

double abelian_delta_jy2(double a, double d, double ax, double az, double ct, double st) {
    const double p = (a + d) * ax * ax;
    const double q = a * d * az * az;
    return (p + q * st * st) / (p + 2.0 * q * (1.0 - ct));
}

double abelian_sum(double a, double d, double ax, double az, double ct) {
    const double p = (a + d) * ax * ax;
    const double q = a * d * az * az;
    return (2.0 * p + 2.0 * q * (1.0 - ct)) / (p + 2.0 * q * (1.0 - ct));
}

double abelian_sum_displayed(double a, double d, double ax, double az, double ct) {
    const double p = (a + d) * ax * ax;
    const double q = a * d * az * az;
    return (2.0 * p + 2.0 * q * (1.0 - ct) * (1.0 - ct)) / (p + 2.0 * q * (1.0 - ct));
}

PureCoefficients pure_coeffs_reference(double a, double d, double ax, double ay, double az,
                                       double ct, double st) {
    const double k = ax * ax * (a + d);
    PureCoefficients c;
    c.alpha = 1.0 + (a * d * az * az * st * st + ay * ay * (ct - 1.0) * (ct - 1.0)) / k;
    c.gamma = 1.0 + (a * d * az * az * (ct - 1.0) * (ct - 1.0) + ay * ay * st * st) / k;
    c.beta = st * (ct - 1.0) * a * d * (az * az + ay * ay) / k;
    return c;
}

PureCoefficients pure_coeffs_corrected(double a, double d, double ax, double ay, double az,
                                       double ct, double st) {
    const double k = ax * ax * (a + d);
    PureCoefficients c;
    c.alpha = 1.0 + (a * d * az * az * st * st + 4.0 * ay * ay * (ct - 1.0) * (ct - 1.0)) / k;
    c.gamma = 1.0 + (a * d * az * az * (ct - 1.0) * (ct - 1.0) + 4.0 * ay * ay * st * st) / k;
    c.beta = st * (1.0 - ct) * (a * d * az * az - 4.0 * ay * ay) / k;
    return c;
}

namespace {

std::string variance_verdict_of(double sum) {
    if (std::abs(sum - 2.0) <= WitnessReport::kTol) return "separable-bound-saturated";
    return sum < 2.0 ? "entangled" : "inconclusive";
}

std::string ppt_verdict_of(PptVerdict v) {
    return v == PptVerdict::separable_ppt ? "separable-PPT" : "entangled-NPT";
}

// conditional covariance of the commuting pair (J_y sum, J_z sum)
Eigen::Matrix2d sum_pair_cov(const GaussianState& clouds) {
    const auto& sp = clouds.space();
    Eigen::VectorXd jy = Eigen::VectorXd::Zero(4), jz = Eigen::VectorXd::Zero(4);
    jy(sp.index("J_y+")) = jy(sp.index("J_y-")) = 1.0;
    jz(sp.index("J_z+")) = jz(sp.index("J_z-")) = 1.0;
    Eigen::Matrix2d c;
    c(0, 0) = jy.dot(clouds.cov() * jy);
    c(1, 1) = jz.dot(clouds.cov() * jz);
    c(0, 1) = c(1, 0) = jy.dot(clouds.cov() * jz);
    return c;
}

PureCoefficients coeffs_from_cov(const Eigen::Matrix2d& c) {
    const Eigen::Matrix2d prec = c.inverse();
    PureCoefficients out;
    out.gamma = prec(0, 0);
    out.alpha = prec(1, 1);
    out.beta = prec(0, 1);
    return out;
}

void finish_report(WitnessReport& rep, const GaussianState& clouds) {
    rep.variance_verdict = variance_verdict_of(rep.sum.oracle);
    rep.ppt_nu_min = ppt_min_symplectic_eigenvalue(clouds);
    rep.ppt_verdict = ppt_verdict_of(ppt_check(clouds));
    rep.max_abs_diff = std::max({rep.delta_jy2.abs_diff(), rep.delta_jz2.abs_diff(),
                                 rep.sum.abs_diff()});
    rep.consistent = rep.max_abs_diff < WitnessReport::kTol;
}

WitnessReport base_report(const ProtocolParams& p) {
    WitnessReport rep;
    rep.c_t = p.c_t();
    rep.s_t = p.s_t();
    auto [at, bt] = tau_hat_coefficients(p);
    rep.a_t = at;
    rep.b_t = bt;
    rep.notes.push_back("parameter map: Var(S_y) = 1/a; abelian W = 1/d; pure seed W = diag(1/d, d/4)");
    return rep;
}

/* Measurement pipeline in the sum/difference basis.  The generic machinery
 * is reused unchanged; only the basis differs, so the collective-sum
 * statistics that feed the witnesses never pass through cancellations of
 * large difference-mode entries. */
GaussianState evolved_suw(const ProtocolParams& p) {
    const Eigen::MatrixXd& t = suw_transform();
    Eigen::MatrixXd v0 = prepare_laser(p, initial_state(p)).cov();
    Eigen::MatrixXd m = exact_flow_matrix_suw(p, p.t);
    Eigen::MatrixXd v = m * (t * v0 * t.transpose()) * m.transpose();
    v = 0.5 * (v + v.transpose().eval());
    return GaussianState(suw_space(), Eigen::VectorXd::Zero(9), std::move(v));
}

Eigen::Matrix2d pair_cov_suw(const GaussianState& state) {
    const int uy = state.space().index("U_y");
    const int uz = state.space().index("U_z");
    Eigen::Matrix2d c;
    c(0, 0) = state.cov()(uy, uy);
    c(1, 1) = state.cov()(uz, uz);
    c(0, 1) = c(1, 0) = state.cov()(uy, uz);
    return c;
}

GaussianState clouds_from_suw(const GaussianState& state) {
    const int idx[4] = {state.space().index("U_y"), state.space().index("U_z"),
                        state.space().index("W_y"), state.space().index("W_z")};
    Eigen::Matrix4d v4;
    Eigen::Vector4d m4;
    for (int i = 0; i < 4; ++i) {
        m4(i) = state.mean()(idx[i]);
        for (int j = 0; j < 4; ++j) v4(i, j) = state.cov()(idx[i], idx[j]);
    }
    // back to (J_y+, J_z+, J_z-, J_y-)
    Eigen::Matrix4d l;
    l << 0.5, 0.0, 0.5, 0.0,
         0.0, 0.5, 0.0, 0.5,
         0.0, 0.5, 0.0, -0.5,
         0.5, 0.0, -0.5, 0.0;
    Eigen::MatrixXd vj = l * v4 * l.transpose();
    vj = 0.5 * (vj + vj.transpose().eval());
    return GaussianState(two_cloud_space(), l * m4, std::move(vj));
}

} // namespace

std::pair<GaussianState, WitnessReport> unmeasured(const ProtocolParams& p) {
    p.validate();
    GaussianState clouds = reduce_to_clouds(evolve(p, initial_state(p)));
    WitnessReport rep = base_report(p);
    const Eigen::Matrix2d c2 = sum_pair_cov(clouds);
    rep.delta_jy2.oracle = c2(0, 0);
    rep.delta_jz2.oracle = c2(1, 1);
    rep.sum.oracle = c2(0, 0) + c2(1, 1);
    finish_report(rep, clouds);
    return {std::move(clouds), std::move(rep)};
}

std::pair<GaussianState, WitnessReport> measure_abelian(const ProtocolParams& p) {
    p.validate();
    GaussianState evolved = evolved_suw(p);

    GaussianState conditioned = [&]() {
        if (p.d == 0.0) return evolved; // uninformative measurement
        GaussianMeasurement meas;
        meas.measured = {evolved.space().index("S_y")};
        meas.resolution = Eigen::MatrixXd::Constant(1, 1, 1.0 / p.d);
        meas.kind = GaussianMeasurement::Kind::abelian_density;
        return condition(evolved, meas, Eigen::VectorXd::Zero(1));
    }();
    GaussianState clouds = clouds_from_suw(conditioned);

    WitnessReport rep = base_report(p);
    const Eigen::Matrix2d c2 = pair_cov_suw(conditioned);
    rep.delta_jy2.oracle = c2(0, 0);
    rep.delta_jz2.oracle = c2(1, 1);
    rep.sum.oracle = c2(0, 0) + c2(1, 1);

    if (p.closed_forms_available()) {
        rep.delta_jy2.closed_form = abelian_delta_jy2(p.a, p.d, p.ax, p.az, p.c_t(), p.s_t());
        rep.delta_jz2.closed_form = abelian_delta_jz2(p.a, p.d, p.ax, p.az, p.c_t());
        rep.sum.closed_form = abelian_sum(p.a, p.d, p.ax, p.az, p.c_t());
        rep.abelian_sum_displayed_variant =
            abelian_sum_displayed(p.a, p.d, p.ax, p.az, p.c_t());
        if (std::abs(*rep.abelian_sum_displayed_variant - *rep.sum.closed_form) >
            WitnessReport::kTol)
            rep.notes.push_back(
                "displayed one-line sum squares (1 - c_t) in the numerator; the sum of the "
                "displayed individual fluctuations, 2(P + Q(1 - c_t))/(P + 2Q(1 - c_t)), is "
                "the consistent form and matches the conditioning oracle");
    } else {
        rep.notes.push_back("closed forms skipped: they require a_x > 0 and s = gamma = 1");
    }
    finish_report(rep, clouds);
    return {std::move(clouds), std::move(rep)};
}

std::pair<GaussianState, WitnessReport> measure_pure(const ProtocolParams& p) {
    p.validate();
    if (p.d <= 0.0)
        throw argument_error("measure_pure: pure projector needs d > 0");
    GaussianState evolved = evolved_suw(p);

    GaussianMeasurement meas;
    meas.measured = {evolved.space().index("S_y"), evolved.space().index("S_z")};
    meas.resolution = Eigen::MatrixXd::Zero(2, 2);
    meas.resolution(0, 0) = 1.0 / p.d;
    meas.resolution(1, 1) = 0.25 * p.d;
    meas.kind = GaussianMeasurement::Kind::pure_projector;
    GaussianState conditioned = condition(evolved, meas, Eigen::VectorXd::Zero(2));
    GaussianState clouds = clouds_from_suw(conditioned);

    WitnessReport rep = base_report(p);
    const Eigen::Matrix2d c2 = pair_cov_suw(conditioned);
    rep.delta_jy2.oracle = c2(0, 0);
    rep.delta_jz2.oracle = c2(1, 1);
    rep.sum.oracle = c2(0, 0) + c2(1, 1);
    rep.coeffs_oracle = coeffs_from_cov(c2);

    if (p.closed_forms_available()) {
        const PureCoefficients ref =
            pure_coeffs_reference(p.a, p.d, p.ax, p.ay, p.az, p.c_t(), p.s_t());
        const PureCoefficients cor =
            pure_coeffs_corrected(p.a, p.d, p.ax, p.ay, p.az, p.c_t(), p.s_t());
        rep.coeffs_reference = ref;
        rep.coeffs_corrected = cor;
        // coefficient agreement is judged on (alpha, gamma, |beta|) plus the
        // derived variances; the sign of beta tracks the rotation orientation
        const double ref_err =
            std::max({std::abs(ref.alpha - rep.coeffs_oracle->alpha),
                      std::abs(ref.gamma - rep.coeffs_oracle->gamma),
                      std::abs(std::abs(ref.beta) - std::abs(rep.coeffs_oracle->beta)),
                      std::abs(ref.sum() - rep.sum.oracle)});
        if (ref_err < WitnessReport::kTol) {
            rep.delta_jy2.closed_form = ref.alpha / (ref.alpha * ref.gamma - ref.beta * ref.beta);
            rep.delta_jz2.closed_form = ref.gamma / (ref.alpha * ref.gamma - ref.beta * ref.beta);
            rep.sum.closed_form = ref.sum();
        } else {
            rep.correction_applied = true;
            rep.delta_jy2.closed_form = cor.alpha / (cor.alpha * cor.gamma - cor.beta * cor.beta);
            rep.delta_jz2.closed_form = cor.gamma / (cor.alpha * cor.gamma - cor.beta * cor.beta);
            rep.sum.closed_form = cor.sum();
            rep.notes.push_back(
                "reference coefficient set disagrees with the conditioning oracle (max err " +
                std::to_string(ref_err) +
                "); corrected set: alpha = 1 + (a d az^2 st^2 + 4 ay^2 (ct-1)^2)/(ax^2 (a+d)), "
                "gamma = 1 + (a d az^2 (ct-1)^2 + 4 ay^2 st^2)/(ax^2 (a+d)), "
                "beta = st (1-ct)(a d az^2 - 4 ay^2)/(ax^2 (a+d)); the y-coupling enters "
                "through the conjugate laser quadrature whose prepared and seed variances are "
                "a/4 and d/4, which is the origin of the factor 4 and of the missing a d");
        }
    } else {
        rep.notes.push_back("closed forms skipped: they require a_x > 0 and s = gamma = 1");
    }
    finish_report(rep, clouds);
    return {std::move(clouds), std::move(rep)};
}

GhzReport ghz_demo() {
    Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
    ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0); // |uuu> + |ddd>
    // reduce to BC (Alice = first qubit, slowest index)
    Eigen::MatrixXcd rho_bc = Eigen::MatrixXcd::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) rho_bc(i, j) += ghz(a * 4 + i) * std::conj(ghz(a * 4 + j));

    // two-qubit PPT: partial transpose on C
    Eigen::MatrixXcd pt = rho_bc;
    for (int ib = 0; ib < 2; ++ib)
        for (int jb = 0; jb < 2; ++jb)
            for (int ic = 0; ic < 2; ++ic)
                for (int jc = 0; jc < 2; ++jc)
                    pt(ib * 2 + ic, jb * 2 + jc) = rho_bc(ib * 2 + jc, jb * 2 + ic);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);

    GhzReport rep;
    rep.bc_before_min_pt_eigenvalue = es.eigenvalues().minCoeff();
    rep.bc_before_separable = rep.bc_before_min_pt_eigenvalue > -1e-12;

    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);

    auto project_alice = [&ghz](const Eigen::Vector2cd& alice) {
        Eigen::VectorXcd bc = Eigen::VectorXcd::Zero(4);
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < 4; ++i) bc(i) += std::conj(alice(a)) * ghz(a * 4 + i);
        bc.normalize();
        return bc;
    };

    const Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    const Eigen::Vector2cd up(1.0, 0.0);
    rep.bell_fidelity_plus = std::norm(bell.dot(project_alice(plus)));
    rep.bell_fidelity_up = std::norm(bell.dot(project_alice(up)));
    return rep;
}

Eigen::Matrix2d random_sp2(CounterRng& rng, double max_log_squeeze) {
    const double t1 = rng.uniform(0.0, 2.0 * M_PI);
    const double t2 = rng.uniform(0.0, 2.0 * M_PI);
    const double r = rng.uniform(-max_log_squeeze, max_log_squeeze);
    auto rot = [](double th) {
        Eigen::Matrix2d m;
        m << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
        return m;
    };
    Eigen::Matrix2d squeeze = Eigen::Vector2d(std::exp(r), std::exp(-r)).asDiagonal();
    return rot(t1) * squeeze * rot(t2);
}

StabilityReport stability_probe(const GaussianState& two_cloud, std::uint64_t seed, int n_maps) {
    StabilityReport rep;
    rep.seed = seed;
    rep.n_maps = n_maps;
    rep.input_verdict = ppt_verdict_of(ppt_check(two_cloud));
    rep.witness_min = rep.witness_max = variance_witness(two_cloud);
    rep.verdict_invariant = true;
    CounterRng rng(seed);
    const SymplecticSpace sp = two_cloud.space();
    for (int k = 0; k < n_maps; ++k) {
        CounterRng sub = rng.split(static_cast<std::uint64_t>(k));
        AffineSymplecticMap mb =
            embed_mode_map(sp, random_sp2(sub), Eigen::Vector2d::Zero(), 0);
        AffineSymplecticMap mc =
            embed_mode_map(sp, random_sp2(sub), Eigen::Vector2d::Zero(), 1);
        GaussianState moved = local_symplectic(two_cloud, mb, mc);
        if (ppt_verdict_of(ppt_check(moved)) != rep.input_verdict) rep.verdict_invariant = false;
        const double w = variance_witness(moved);
        rep.witness_min = std::min(rep.witness_min, w);
        rep.witness_max = std::max(rep.witness_max, w);
    }
    rep.witness_straddles_bound = rep.witness_min < 2.0 && rep.witness_max > 2.0;
    return rep;
}

} // namespace proto
} // namespace fluctsim
