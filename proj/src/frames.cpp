#include "qtomo/frames.hpp"

namespace qtomo {

namespace {

void check_povm_shape(const Povm& povm, const char* fn) {
    if (povm.dim < 1 || povm.elements.empty())
        throw std::invalid_argument(std::string(fn) + ": empty POVM");
    for (const auto& p : povm.elements)
        if (p.rows() != povm.dim || p.cols() != povm.dim)
            throw std::invalid_argument(std::string(fn) +
                                        ": element dimension mismatch");
}

}  // namespace

PovmValidation validate_povm(const Povm& povm, double tol) {
    check_povm_shape(povm, "validate_povm");
    PovmValidation v;
    Matrix sum = Matrix::Zero(povm.dim, povm.dim);
    double worst_neg = 0.0, herm = 0.0;
    for (const auto& p : povm.elements) {
        herm = std::max(herm, (p - p.adjoint()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Matrix> es((p + p.adjoint()) / 2.0,
                                                 Eigen::EigenvaluesOnly);
        worst_neg = std::min(worst_neg, es.eigenvalues().minCoeff());
        sum += p;
    }
    v.worst_negative_eigenvalue = worst_neg;
    v.hermiticity_residual = herm;
    v.completeness_residual =
        (sum - Matrix::Identity(povm.dim, povm.dim)).cwiseAbs().maxCoeff();
    v.ok = herm <= tol && worst_neg >= -tol && v.completeness_residual <= tol;
    return v;
}

FrameOperator frame_operator(const Povm& povm) {
    check_povm_shape(povm, "frame_operator");
    const int d2 = povm.dim * povm.dim;
    Matrix f = Matrix::Zero(d2, d2);
    for (const auto& p : povm.elements) {
        Vector v = vectorize(p);
        f += v * v.adjoint();
    }
    return f;
}

FrameBounds frame_bounds(const Povm& povm) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(frame_operator(povm),
                                             Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

bool is_info_complete(const Povm& povm, double tol_rel) {
    FrameBounds b = frame_bounds(povm);
    return b.lower > tol_rel * b.upper;
}

DualFrame canonical_dual(const Povm& povm, double tol_rel) {
    check_povm_shape(povm, "canonical_dual");
    if (!is_info_complete(povm, tol_rel))
        throw std::invalid_argument(
            "canonical_dual: POVM is not informationally complete");
    Matrix finv = psd_pinv(frame_operator(povm), tol_rel);
    DualFrame dual;
    dual.dim = povm.dim;
    dual.elements.reserve(povm.elements.size());
    for (const auto& p : povm.elements)
        dual.elements.push_back(
            devectorize(finv * vectorize(p), povm.dim, povm.dim));
    return dual;
}

DualFrame alternate_dual(const Povm& povm, const std::vector<Matrix>& y,
                         double tol_rel) {
    check_povm_shape(povm, "alternate_dual");
    if (y.size() != povm.elements.size())
        throw std::invalid_argument("alternate_dual: perturbation count");
    for (const auto& yl : y)
        if (yl.rows() != povm.dim || yl.cols() != povm.dim ||
            !is_hermitian(yl, 1e-8))
            throw std::invalid_argument(
                "alternate_dual: perturbations must be hermitian d x d");

    DualFrame dual = canonical_dual(povm, tol_rel);
    const std::size_t n = povm.elements.size();
    std::vector<Matrix> q(n);
    for (std::size_t l = 0; l < n; ++l) {
        Matrix ql = dual.elements[l] + y[l];
        for (std::size_t j = 0; j < n; ++j)
            ql -= hs_inner(dual.elements[l], povm.elements[j]) * y[j];
        q[l] = std::move(ql);
    }
    dual.elements = std::move(q);
    return dual;
}

DualCheck verify_dual(const Povm& povm, const DualFrame& dual, double tol) {
    check_povm_shape(povm, "verify_dual");
    if (dual.elements.size() != povm.elements.size() || dual.dim != povm.dim)
        throw std::invalid_argument("verify_dual: frame size mismatch");
    const int d2 = povm.dim * povm.dim;
    Matrix acc = Matrix::Zero(d2, d2);
    for (std::size_t l = 0; l < povm.elements.size(); ++l)
        acc += vectorize(povm.elements[l]) *
               vectorize(dual.elements[l]).adjoint();
    const double res =
        (acc - Matrix::Identity(d2, d2)).cwiseAbs().maxCoeff();
    return {res <= tol, res};
}

// ------------------------------ constructions ------------------------------

Povm pauli_povm() {
    Povm povm;
    povm.dim = 2;
    for (int i = 1; i <= 3; ++i)
        for (int sign : {+1, -1}) {
            Matrix proj =
                (Matrix::Identity(2, 2) + static_cast<double>(sign) * pauli(i)) /
                2.0;
            povm.elements.push_back(proj / 3.0);
        }
    return povm;
}

Povm covariant_povm(const Matrix& seed, const std::vector<Matrix>& unitaries,
                    double tol) {
    if (seed.rows() != seed.cols() || seed.rows() < 1)
        throw std::invalid_argument("covariant_povm: seed not square");
    if (!is_positive_semidefinite(seed, 1e-9))
        throw std::invalid_argument("covariant_povm: seed not PSD");
    if (unitaries.empty())
        throw std::invalid_argument("covariant_povm: empty unitary set");
    const int d = static_cast<int>(seed.rows());
    const double tr = seed.trace().real();
    if (tr <= 0)
        throw std::invalid_argument("covariant_povm: seed has zero trace");

    const double w = static_cast<double>(d) /
                     (static_cast<double>(unitaries.size()) * tr);
    Povm povm;
    povm.dim = d;
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& u : unitaries) {
        if (u.rows() != d || u.cols() != d)
            throw std::invalid_argument("covariant_povm: unitary dimension");
        Matrix el = w * (u * seed * u.adjoint());
        sum += el;
        povm.elements.push_back(std::move(el));
    }
    if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument(
            "covariant_povm: unitary set is not a 1-design for this seed");
    return povm;
}

Povm random_ic_povm(int d, int n_outcomes, Rng& rng) {
    if (n_outcomes < d * d)
        throw std::invalid_argument(
            "random_ic_povm: need at least d^2 outcomes");
    std::vector<Matrix> g(static_cast<std::size_t>(n_outcomes));
    Matrix s = Matrix::Zero(d, d);
    for (auto& gl : g) {
        Matrix a = ginibre(d, d, rng);
        gl = a * a.adjoint();
        s += gl;
    }
    Matrix si = psd_pinv_sqrt(s);
    Povm povm;
    povm.dim = d;
    for (auto& gl : g) povm.elements.push_back(si * gl * si);
    return povm;
}

Povm povm_tensor(const Povm& a, const Povm& b) {
    check_povm_shape(a, "povm_tensor");
    check_povm_shape(b, "povm_tensor");
    Povm out;
    out.dim = a.dim * b.dim;
    out.elements.reserve(a.elements.size() * b.elements.size());
    for (const auto& pa : a.elements)
        for (const auto& pb : b.elements)
            out.elements.push_back(tensor(pa, pb));
    return out;
}

// ------------------------------ serialization ------------------------------

Json povm_to_json(const Povm& povm) {
    return Json{{"dimension", povm.dim},
                {"elements", matrix_list_to_json(povm.elements)}};
}

Povm povm_from_json(const Json& j) {
    Povm povm;
    povm.dim = j.at("dimension").get<int>();
    povm.elements = matrix_list_from_json(j.at("elements"));
    check_povm_shape(povm, "povm_from_json");
    return povm;
}

Json dual_to_json(const DualFrame& dual) {
    return Json{{"dimension", dual.dim},
                {"elements", matrix_list_to_json(dual.elements)}};
}

DualFrame dual_from_json(const Json& j) {
    DualFrame dual;
    dual.dim = j.at("dimension").get<int>();
    dual.elements = matrix_list_from_json(j.at("elements"));
    return dual;
}

}  // namespace qtomo
