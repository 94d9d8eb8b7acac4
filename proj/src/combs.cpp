#include "qtomo/combs.hpp"

namespace qtomo {

namespace {

void check_comb_shape(const QuantumComb& c, const char* fn) {
    if (c.teeth < 1 || c.dims.size() != 2 * static_cast<std::size_t>(c.teeth))
        throw std::invalid_argument(std::string(fn) + ": bad wire count");
    int total = 1;
    for (int d : c.dims) {
        if (d < 1)
            throw std::invalid_argument(std::string(fn) + ": bad wire dim");
        total *= d;
    }
    if (c.r.rows() != total || c.r.cols() != total)
        throw std::invalid_argument(std::string(fn) +
                                    ": operator size mismatch");
}

void check_tester_shape(const Tester& t, const char* fn) {
    if (t.d_out < 1 || t.d_in < 1 || t.elements.empty())
        throw std::invalid_argument(std::string(fn) + ": empty tester");
    const Eigen::Index n = static_cast<Eigen::Index>(t.d_out) * t.d_in;
    for (const auto& el : t.elements)
        if (el.rows() != n || el.cols() != n)
            throw std::invalid_argument(std::string(fn) +
                                        ": element size mismatch");
}

}  // namespace

CombCheck validate_comb(const QuantumComb& c, double tol) {
    check_comb_shape(c, "validate_comb");
    CombCheck chk;
    chk.hermiticity_residual = (c.r - c.r.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> es((c.r + c.r.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    chk.cp_min_eigenvalue = es.eigenvalues().minCoeff();

    Matrix rk = c.r;
    std::vector<int> dims = c.dims;
    for (int k = c.teeth; k >= 1; --k) {
        // trace out the last output wire 2k-1
        SubsystemShape sh(dims);
        Matrix s = partial_trace(rk, sh, {2 * k - 1});
        dims.pop_back();
        const int d_last = dims.back();  // input wire 2k-2
        SubsystemShape sh_s(dims);
        Matrix rk1 =
            partial_trace(s, sh_s, {static_cast<int>(dims.size()) - 1}) /
            static_cast<double>(d_last);
        Matrix expect = tensor(rk1, Matrix::Identity(d_last, d_last));
        chk.normalization_residuals.push_back(
            (s - expect).cwiseAbs().maxCoeff());
        rk = std::move(rk1);
        dims.pop_back();
    }
    chk.scalar_residual = std::abs(rk(0, 0) - Complex(1, 0));

    chk.ok = chk.hermiticity_residual <= tol &&
             chk.cp_min_eigenvalue >= -tol && chk.scalar_residual <= tol;
    for (double r : chk.normalization_residuals)
        chk.ok = chk.ok && r <= tol;
    return chk;
}

QuantumComb comb_from_choi(const ChoiOperator& c) {
    QuantumComb comb;
    comb.teeth = 1;
    comb.dims = {c.d_in, c.d_out};
    comb.r = permute_subsystems(c.r, SubsystemShape({c.d_out, c.d_in}),
                                {1, 0});
    return comb;
}

QuantumComb comb_link(const QuantumComb& a, const std::vector<int>& labels_a,
                      const QuantumComb& b, const std::vector<int>& labels_b) {
    check_comb_shape(a, "comb_link");
    check_comb_shape(b, "comb_link");
    auto res = link_product(a.r, SubsystemShape(a.dims, labels_a), b.r,
                            SubsystemShape(b.dims, labels_b));
    if (res.shape.dims.size() % 2 != 0)
        throw std::invalid_argument(
            "comb_link: linked object has an odd wire count");
    QuantumComb out;
    out.r = std::move(res.op);
    out.dims = res.shape.dims;
    out.teeth = static_cast<int>(out.dims.size()) / 2;
    return out;
}

Json comb_to_json(const QuantumComb& c) {
    return Json{{"dims", c.dims},
                {"N", c.teeth},
                {"operator", matrix_to_json(c.r)}};
}

QuantumComb comb_from_json(const Json& j) {
    QuantumComb c;
    c.dims = j.at("dims").get<std::vector<int>>();
    c.teeth = j.at("N").get<int>();
    c.r = matrix_from_json(j.at("operator"));
    check_comb_shape(c, "comb_from_json");
    return c;
}

// ------------------------------ testers ------------------------------------

TesterCheck validate_tester(const Tester& t, double tol) {
    check_tester_shape(t, "validate_tester");
    TesterCheck chk;
    const Eigen::Index n = static_cast<Eigen::Index>(t.d_out) * t.d_in;
    Matrix sum = Matrix::Zero(n, n);
    double psd_min = 0.0;
    for (const auto& el : t.elements) {
        Eigen::SelfAdjointEigenSolver<Matrix> es((el + el.adjoint()) / 2.0,
                                                 Eigen::EigenvaluesOnly);
        psd_min = std::min(psd_min, es.eigenvalues().minCoeff());
        sum += el;
    }
    chk.psd_min_eigenvalue = psd_min;
    chk.sigma = partial_trace(sum, SubsystemShape({t.d_out, t.d_in}), {0}) /
                static_cast<double>(t.d_out);
    chk.sigma_trace_error = std::abs(chk.sigma.trace().real() - 1.0);
    Matrix expect = tensor(Matrix::Identity(t.d_out, t.d_out), chk.sigma);
    chk.normalization_residual = (sum - expect).cwiseAbs().maxCoeff();
    chk.ok = psd_min >= -tol && chk.normalization_residual <= tol &&
             chk.sigma_trace_error <= tol;
    return chk;
}

RealVector tester_probabilities(const Tester& t, const ChoiOperator& c,
                                double tol) {
    check_tester_shape(t, "tester_probabilities");
    if (c.d_out != t.d_out || c.d_in != t.d_in)
        throw std::invalid_argument(
            "tester_probabilities: channel dimension mismatch");
    RealVector p(static_cast<Eigen::Index>(t.elements.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const Complex v =
            (t.elements[static_cast<std::size_t>(i)] * c.r).trace();
        if (v.real() < -tol || std::abs(v.imag()) > tol)
            throw std::invalid_argument(
                "tester_probabilities: invalid tester/channel pair");
        p(i) = std::max(v.real(), 0.0);
    }
    return p;
}

Tester tester_from_state_povm(const Matrix& rho, const Povm& povm) {
    if (!is_density_matrix(rho, 1e-9))
        throw std::invalid_argument("tester_from_state_povm: invalid state");
    Tester t;
    t.d_in = static_cast<int>(rho.rows());
    t.d_out = povm.dim;
    for (const auto& m : povm.elements)
        t.elements.push_back(tensor(m, rho.transpose()));
    return t;
}

TesterRealization realize_tester(const Tester& t, double tol_rel) {
    TesterCheck chk = validate_tester(t);
    if (!chk.ok)
        throw std::invalid_argument("realize_tester: invalid tester");
    const Matrix& sigma = chk.sigma;
    const int din = t.d_in, dout = t.d_out;

    Matrix sig_t = sigma.transpose();
    Matrix psi = psd_sqrt(sig_t, tol_rel);
    TesterRealization real;
    real.input_state = vectorize(psi);

    Matrix shalf = psd_pinv_sqrt(sigma, tol_rel);
    Matrix conj_half = tensor(Matrix::Identity(dout, dout), shalf);
    real.povm.dim = dout * din;
    Matrix sum = Matrix::Zero(dout * din, dout * din);
    for (const auto& el : t.elements) {
        Matrix p = conj_half * el * conj_half;
        sum += p;
        real.povm.elements.push_back(std::move(p));
    }
    Matrix gap = Matrix::Identity(dout * din, dout * din) - sum;
    if (gap.cwiseAbs().maxCoeff() > 1e-9) {
        real.povm.elements.push_back(std::move(gap));
        real.padded = true;
    }
    return real;
}

RealVector realization_probabilities(const TesterRealization& r,
                                     const ChoiOperator& c, double tol) {
    const int din = c.d_in;
    // omega = (C x id)(|psi>><<psi|) on (out, anc)
    FaithfulState t;
    t.d_probe = din;
    t.d_ref = din;
    t.t = r.input_state * r.input_state.adjoint();
    Matrix omega = channel_output_state(c, t);
    Povm povm = r.povm;
    RealVector p(static_cast<Eigen::Index>(povm.elements.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const Complex v =
            (povm.elements[static_cast<std::size_t>(i)] * omega).trace();
        if (v.real() < -tol)
            throw std::invalid_argument(
                "realization_probabilities: negative probability");
        p(i) = std::max(v.real(), 0.0);
    }
    return p;
}

TesterDuals tester_dual_expand(const Tester& t, double tol_rel) {
    check_tester_shape(t, "tester_dual_expand");
    const int n = t.d_out * t.d_in;
    Matrix f = Matrix::Zero(n * n, n * n);
    for (const auto& el : t.elements) {
        Vector v = vectorize(el);
        f += v * v.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((f + f.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    TesterDuals duals;
    duals.info_complete =
        es.eigenvalues().minCoeff() >
        tol_rel * es.eigenvalues().maxCoeff();
    Matrix finv = psd_pinv(f, tol_rel);
    for (const auto& el : t.elements)
        duals.elements.push_back(devectorize(finv * vectorize(el), n, n));
    return duals;
}

Json tester_to_json(const Tester& t) {
    return Json{{"dims", Json{{"d_out", t.d_out}, {"d_in", t.d_in}}},
                {"elements", matrix_list_to_json(t.elements)},
                {"sigma", matrix_to_json(validate_tester(t).sigma)}};
}

Tester tester_from_json(const Json& j) {
    Tester t;
    t.d_out = j.at("dims").at("d_out").get<int>();
    t.d_in = j.at("dims").at("d_in").get<int>();
    t.elements = matrix_list_from_json(j.at("elements"));
    check_tester_shape(t, "tester_from_json");
    return t;
}

}  // namespace qtomo
