#include "qtomo/devices.hpp"

namespace qtomo {

namespace {

void check_choi(const ChoiOperator& c, const char* fn) {
    if (c.d_out < 1 || c.d_in < 1 ||
        c.r.rows() != static_cast<Eigen::Index>(c.d_out) * c.d_in ||
        c.r.cols() != c.r.rows())
        throw std::invalid_argument(std::string(fn) +
                                    ": inconsistent Choi dimensions");
}

void check_faithful(const FaithfulState& t, const char* fn) {
    if (t.d_probe < 1 || t.d_ref < 1 ||
        t.t.rows() != static_cast<Eigen::Index>(t.d_probe) * t.d_ref ||
        t.t.cols() != t.t.rows())
        throw std::invalid_argument(std::string(fn) +
                                    ": inconsistent state dimensions");
}

}  // namespace

ChoiOperator choi_from_kraus(const std::vector<Matrix>& kraus) {
    if (kraus.empty())
        throw std::invalid_argument("choi_from_kraus: empty Kraus list");
    const auto d_out = kraus.front().rows();
    const auto d_in = kraus.front().cols();
    ChoiOperator c;
    c.d_out = static_cast<int>(d_out);
    c.d_in = static_cast<int>(d_in);
    c.r = Matrix::Zero(d_out * d_in, d_out * d_in);
    for (const auto& k : kraus) {
        if (k.rows() != d_out || k.cols() != d_in)
            throw std::invalid_argument(
                "choi_from_kraus: Kraus dimensions disagree");
        Vector v = vectorize(k);
        c.r += v * v.adjoint();
    }
    return c;
}

ChoiOperator identity_channel(int d) {
    return choi_from_kraus({Matrix::Identity(d, d)});
}

ChoiOperator unitary_channel(const Matrix& u) {
    if (!is_unitary(u, 1e-9))
        throw std::invalid_argument("unitary_channel: input not unitary");
    return choi_from_kraus({u});
}

ChoiOperator depolarizing_channel(double p, int d) {
    return choi_from_kraus(depolarizing_kraus(p, d));
}

Matrix apply_channel(const ChoiOperator& c, const Matrix& rho) {
    check_choi(c, "apply_channel");
    if (rho.rows() != c.d_in || rho.cols() != c.d_in)
        throw std::invalid_argument("apply_channel: state dimension mismatch");
    Matrix big = tensor(Matrix::Identity(c.d_out, c.d_out), rho.transpose());
    return partial_trace(big * c.r, SubsystemShape({c.d_out, c.d_in}), {1});
}

ChoiOperator compose(const ChoiOperator& second, const ChoiOperator& first) {
    check_choi(second, "compose");
    check_choi(first, "compose");
    if (second.d_in != first.d_out)
        throw std::invalid_argument("compose: intermediate dimension mismatch");
    auto linked = link_product(
        second.r, SubsystemShape({second.d_out, second.d_in}, {2, 1}),
        first.r, SubsystemShape({first.d_out, first.d_in}, {1, 0}));
    ChoiOperator out;
    out.d_out = second.d_out;
    out.d_in = first.d_in;
    out.r = std::move(linked.op);
    return out;
}

ChannelCheck validate_channel(const ChoiOperator& c, double tol) {
    check_choi(c, "validate_channel");
    ChannelCheck chk;
    Eigen::SelfAdjointEigenSolver<Matrix> es((c.r + c.r.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    chk.cp_min_eigenvalue = es.eigenvalues().minCoeff();
    const double herm = (c.r - c.r.adjoint()).cwiseAbs().maxCoeff();
    chk.completely_positive = herm <= tol && chk.cp_min_eigenvalue >= -tol;

    SubsystemShape sh({c.d_out, c.d_in});
    chk.tp_residual = (partial_trace(c.r, sh, {0}) -
                       Matrix::Identity(c.d_in, c.d_in))
                          .cwiseAbs()
                          .maxCoeff();
    chk.unital_residual = (partial_trace(c.r, sh, {1}) -
                           Matrix::Identity(c.d_out, c.d_out))
                              .cwiseAbs()
                              .maxCoeff();
    chk.trace_preserving = chk.tp_residual <= tol;
    chk.unital = chk.unital_residual <= tol;
    return chk;
}

Json choi_to_json(const ChoiOperator& c) {
    return Json{{"dims", Json{{"d_out", c.d_out}, {"d_in", c.d_in}}},
                {"operator", matrix_to_json(c.r)}};
}

ChoiOperator choi_from_json(const Json& j) {
    ChoiOperator c;
    c.d_out = j.at("dims").at("d_out").get<int>();
    c.d_in = j.at("dims").at("d_in").get<int>();
    c.r = matrix_from_json(j.at("operator"));
    check_choi(c, "choi_from_json");
    return c;
}

// ------------------------------ faithful states ----------------------------

Matrix faithful_map_matrix(const FaithfulState& t) {
    check_faithful(t, "faithful_map_matrix");
    const int dp = t.d_probe, dr = t.d_ref;
    Matrix m(dr * dr, dp * dp);
    SubsystemShape sh({dp, dr});
    for (int i = 0; i < dp; ++i)
        for (int j = 0; j < dp; ++j) {
            Matrix big = tensor(unit_matrix(dp, i, j), Matrix::Identity(dr, dr));
            Matrix mapped = partial_trace(Matrix(big * t.t), sh, {0});
            m.col(i * dp + j) = vectorize(mapped);
        }
    return m;
}

FaithfulCheck is_faithful(const FaithfulState& t, double tol_rel) {
    Matrix m = faithful_map_matrix(t);
    Eigen::BDCSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    FaithfulCheck chk;
    const Eigen::Index need = static_cast<Eigen::Index>(t.d_probe) * t.d_probe;
    const double smax = sv(0);
    const double smin = (sv.size() >= need) ? sv(need - 1) : 0.0;
    chk.min_singular_value = smin;
    chk.condition_number =
        (smin > 0) ? smax / smin : std::numeric_limits<double>::infinity();
    chk.faithful = smin > tol_rel * smax;
    return chk;
}

FaithfulState max_entangled_faithful(int d) {
    if (d < 2)
        throw std::invalid_argument("max_entangled_faithful: d must be >= 2");
    Matrix id = Matrix::Identity(d, d);
    Vector v = vectorize(id);
    FaithfulState t;
    t.d_probe = d;
    t.d_ref = d;
    t.t = (v * v.adjoint()) / static_cast<double>(d);
    return t;
}

// ------------------------------ device tomography --------------------------

Matrix channel_output_state(const ChoiOperator& c, const FaithfulState& t) {
    check_choi(c, "channel_output_state");
    check_faithful(t, "channel_output_state");
    if (c.d_in != t.d_probe)
        throw std::invalid_argument(
            "channel_output_state: channel input dimension mismatch");
    // wires: channel (out=1, in=0); state (probe=0, ref=2)
    auto linked =
        link_product(c.r, SubsystemShape({c.d_out, c.d_in}, {1, 0}), t.t,
                     SubsystemShape({t.d_probe, t.d_ref}, {0, 2}));
    return linked.op;  // on (out, ref)
}

Eigen::MatrixXd joint_probabilities(const Povm& unknown, const Povm& reference,
                                    const FaithfulState& t) {
    check_faithful(t, "joint_probabilities");
    if (unknown.dim != t.d_probe || reference.dim != t.d_ref)
        throw std::invalid_argument("joint_probabilities: dimension mismatch");
    Eigen::MatrixXd p(unknown.num_outcomes(), reference.num_outcomes());
    for (int i = 0; i < unknown.num_outcomes(); ++i)
        for (int m = 0; m < reference.num_outcomes(); ++m) {
            const Matrix joint =
                tensor(unknown.elements[static_cast<std::size_t>(i)],
                       reference.elements[static_cast<std::size_t>(m)]);
            p(i, m) = std::max(std::real((joint * t.t).trace()), 0.0);
        }
    return p;
}

ChoiOperator process_tomography(const Povm& ic_povm, const FaithfulState& t,
                                int d_out, const RealVector& frequencies,
                                double tol_rel) {
    check_faithful(t, "process_tomography");
    if (ic_povm.dim != d_out * t.d_ref)
        throw std::invalid_argument(
            "process_tomography: POVM must act on H_out x H_ref");
    if (frequencies.size() !=
        static_cast<Eigen::Index>(ic_povm.elements.size()))
        throw std::invalid_argument("process_tomography: frequency count");
    if (!is_info_complete(ic_povm))
        throw std::invalid_argument("process_tomography: POVM is not IC");
    if (!is_faithful(t, tol_rel).faithful)
        throw std::invalid_argument("process_tomography: state not faithful");

    // state estimate rho_out = sum_l nu_l QD_l with the canonical dual
    DualFrame dual = canonical_dual(ic_povm);
    const int dd = ic_povm.dim;
    Matrix rho_hat = Matrix::Zero(dd, dd);
    for (std::size_t l = 0; l < dual.elements.size(); ++l)
        rho_hat += frequencies(static_cast<Eigen::Index>(l)) * dual.elements[l];

    // invert the linear map R_C -> (C x id)(T) column by column
    const int din = t.d_probe;
    const int nc = (d_out * din) * (d_out * din);
    const int nr = (d_out * t.d_ref) * (d_out * t.d_ref);
    Matrix lt(nr, nc);
    SubsystemShape choi_sh({d_out, din}, {1, 0});
    SubsystemShape state_sh({t.d_probe, t.d_ref}, {0, 2});
    for (int k = 0; k < nc; ++k) {
        Matrix ek = Matrix::Zero(d_out * din, d_out * din);
        ek(k / (d_out * din), k % (d_out * din)) = 1.0;
        auto linked = link_product(ek, choi_sh, t.t, state_sh);
        lt.col(k) = vectorize(linked.op);
    }
    ChoiOperator out;
    out.d_out = d_out;
    out.d_in = din;
    out.r = devectorize(moore_penrose(lt, tol_rel) * vectorize(rho_hat),
                        d_out * din, d_out * din);
    return out;
}

Povm povm_tomography(const Povm& reference, const FaithfulState& t,
                     const Eigen::MatrixXd& joint_frequencies,
                     double tol_rel) {
    check_faithful(t, "povm_tomography");
    if (reference.dim != t.d_ref)
        throw std::invalid_argument(
            "povm_tomography: reference POVM acts on H_ref");
    if (joint_frequencies.cols() !=
        static_cast<Eigen::Index>(reference.elements.size()))
        throw std::invalid_argument("povm_tomography: frequency columns");
    if (!is_info_complete(reference))
        throw std::invalid_argument("povm_tomography: reference POVM not IC");
    if (!is_faithful(t, tol_rel).faithful)
        throw std::invalid_argument("povm_tomography: state not faithful");

    DualFrame dual = canonical_dual(reference);
    Matrix minv = moore_penrose(faithful_map_matrix(t), tol_rel);

    Povm out;
    out.dim = t.d_probe;
    for (Eigen::Index i = 0; i < joint_frequencies.rows(); ++i) {
        // unnormalized conditional state sigma_i = sum_m nu(i,m) D_m = T(P_i)
        Matrix sigma = Matrix::Zero(t.d_ref, t.d_ref);
        for (Eigen::Index m = 0; m < joint_frequencies.cols(); ++m)
            sigma += joint_frequencies(i, m) *
                     dual.elements[static_cast<std::size_t>(m)];
        out.elements.push_back(
            devectorize(minv * vectorize(sigma), t.d_probe, t.d_probe));
    }
    return out;
}

}  // namespace qtomo
