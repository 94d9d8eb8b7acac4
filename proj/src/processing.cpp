#include "qtomo/processing.hpp"

#include <cmath>
#include <limits>

namespace qtomo {

namespace {

void check_counts(const Povm& povm, const std::vector<std::int64_t>& counts,
                  const char* fn) {
    if (counts.size() != povm.elements.size())
        throw std::invalid_argument(std::string(fn) + ": counts size mismatch");
    for (auto c : counts)
        if (c < 0)
            throw std::invalid_argument(std::string(fn) + ": negative count");
}

RealVector frequencies_of(const std::vector<std::int64_t>& counts) {
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    if (total <= 0)
        throw std::invalid_argument("frequencies: no shots recorded");
    RealVector nu(static_cast<Eigen::Index>(counts.size()));
    for (Eigen::Index l = 0; l < nu.size(); ++l)
        nu(l) = static_cast<double>(counts[static_cast<std::size_t>(l)]) /
                static_cast<double>(total);
    return nu;
}

}  // namespace

Matrix Ensemble::average() const {
    if (states.empty())
        throw std::invalid_argument("Ensemble::average: empty ensemble");
    Matrix avg = Matrix::Zero(states.front().rows(), states.front().cols());
    for (std::size_t k = 0; k < states.size(); ++k)
        avg += priors[k] * states[k];
    return avg;
}

double Ensemble::second_moment(const Matrix& x) const {
    double m2 = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k)
        m2 += priors[k] * std::norm((states[k] * x).trace());
    return m2;
}

bool validate_ensemble(const Ensemble& e, double tol) {
    if (e.states.empty() || e.states.size() != e.priors.size()) return false;
    double total = 0.0;
    for (double q : e.priors) {
        if (q < -tol) return false;
        total += q;
    }
    if (std::abs(total - 1.0) > tol) return false;
    for (const auto& rho : e.states)
        if (!is_density_matrix(rho, tol)) return false;
    return true;
}

Ensemble uniform_ensemble(std::vector<Matrix> states) {
    Ensemble e;
    e.priors.assign(states.size(), 1.0 / static_cast<double>(states.size()));
    e.states = std::move(states);
    return e;
}

Ensemble pauli_eigenstate_ensemble() {
    std::vector<Matrix> states;
    for (int i = 1; i <= 3; ++i)
        for (int sign : {+1, -1})
            states.push_back((Matrix::Identity(2, 2) +
                              static_cast<double>(sign) * pauli(i)) /
                             2.0);
    return uniform_ensemble(std::move(states));
}

// ------------------------------ estimation ---------------------------------

RealVector probabilities(const Matrix& rho, const Povm& povm, double tol) {
    if (rho.rows() != povm.dim || rho.cols() != povm.dim)
        throw std::invalid_argument("probabilities: state dimension mismatch");
    if (!is_density_matrix(rho, tol))
        throw std::invalid_argument("probabilities: not a density matrix");
    RealVector p(static_cast<Eigen::Index>(povm.elements.size()));
    for (Eigen::Index l = 0; l < p.size(); ++l) {
        const Complex t =
            (rho * povm.elements[static_cast<std::size_t>(l)]).trace();
        if (t.real() < -tol || std::abs(t.imag()) > tol)
            throw std::invalid_argument("probabilities: invalid POVM element");
        p(l) = std::max(t.real(), 0.0);
    }
    return p;
}

Vector coefficients_from_dual(const DualFrame& dual, const Matrix& x) {
    if (x.rows() != dual.dim || x.cols() != dual.dim)
        throw std::invalid_argument(
            "coefficients_from_dual: dimension mismatch");
    Vector f(static_cast<Eigen::Index>(dual.elements.size()));
    for (Eigen::Index l = 0; l < f.size(); ++l)
        f(l) = hs_inner(dual.elements[static_cast<std::size_t>(l)], x);
    return f;
}

Complex estimate(const Vector& coefficients,
                 const std::vector<std::int64_t>& counts) {
    if (static_cast<std::size_t>(coefficients.size()) != counts.size())
        throw std::invalid_argument("estimate: size mismatch");
    return estimate_from_frequencies(coefficients, frequencies_of(counts));
}

Complex estimate_from_frequencies(const Vector& coefficients,
                                  const RealVector& frequencies) {
    if (coefficients.size() != frequencies.size())
        throw std::invalid_argument(
            "estimate_from_frequencies: size mismatch");
    Complex acc = 0.0;
    for (Eigen::Index l = 0; l < coefficients.size(); ++l)
        acc += coefficients(l) * frequencies(l);
    return acc;
}

double statistical_error(const Vector& coefficients, const Povm& povm,
                         const Ensemble& ensemble, const Matrix& x) {
    if (static_cast<std::size_t>(coefficients.size()) != povm.elements.size())
        throw std::invalid_argument("statistical_error: size mismatch");
    const RealVector p = probabilities(ensemble.average(), povm);
    double second = 0.0;
    for (Eigen::Index l = 0; l < p.size(); ++l)
        second += std::norm(coefficients(l)) * p(l);
    return second - ensemble.second_moment(x);
}

double statistical_error_per_shots(const Vector& coefficients,
                                   const Povm& povm, const Ensemble& ensemble,
                                   const Matrix& x, std::int64_t shots) {
    if (shots < 1)
        throw std::invalid_argument("statistical_error_per_shots: shots >= 1");
    return statistical_error(coefficients, povm, ensemble, x) /
           static_cast<double>(shots);
}

// ------------------------------ optimal processing -------------------------

DualFrame optimal_dual(const Povm& povm, const Ensemble& ensemble,
                       double prune_tol, double tol_rel) {
    const RealVector p = probabilities(ensemble.average(), povm);
    std::vector<int> kept;
    for (Eigen::Index l = 0; l < p.size(); ++l)
        if (p(l) > prune_tol) kept.push_back(static_cast<int>(l));

    Povm sub;
    sub.dim = povm.dim;
    for (int l : kept) sub.elements.push_back(povm.elements[static_cast<std::size_t>(l)]);
    if (!is_info_complete(sub))
        throw std::invalid_argument(
            "optimal_dual: outcomes with nonzero probability do not form an "
            "informationally complete frame");

    const int d2 = povm.dim * povm.dim;
    const auto nl = static_cast<Eigen::Index>(kept.size());
    Matrix lambda(d2, nl);
    RealVector pk(nl);
    for (Eigen::Index i = 0; i < nl; ++i) {
        lambda.col(i) =
            vectorize(povm.elements[static_cast<std::size_t>(kept[static_cast<std::size_t>(i)])]);
        pk(i) = p(kept[static_cast<std::size_t>(i)]);
    }

    // Gamma = Lambda^+ - ([(1-M) pi (1-M)]^+ pi M) Lambda^+ with M = L^+ L
    Matrix lpinv = moore_penrose(lambda, tol_rel);
    Matrix m = lpinv * lambda;
    Matrix one = Matrix::Identity(nl, nl);
    Matrix gamma = lpinv;
    // M is a projector, so ||1 - M||_F >= 1 whenever Lambda has a kernel;
    // with a trivial kernel the dual is unique and the correction vanishes.
    if ((one - m).norm() > 0.5) {
        Matrix pi = pk.cast<Complex>().asDiagonal();
        Matrix e = (one - m) * pi * (one - m);
        gamma -= moore_penrose(e, tol_rel) * pi * m * lpinv;
    }

    DualFrame dual;
    dual.dim = povm.dim;
    dual.elements.assign(povm.elements.size(),
                         Matrix::Zero(povm.dim, povm.dim));
    for (Eigen::Index i = 0; i < nl; ++i) {
        Vector q = gamma.row(i).adjoint();
        dual.elements[static_cast<std::size_t>(kept[static_cast<std::size_t>(i)])] =
            devectorize(q, povm.dim, povm.dim);
    }
    return dual;
}

double min_error_closed_form(const Povm& povm, const Ensemble& ensemble,
                             const Matrix& x, double prune_tol) {
    const RealVector p = probabilities(ensemble.average(), povm);
    const int d2 = povm.dim * povm.dim;
    Matrix y = Matrix::Zero(d2, d2);
    Povm sub;
    sub.dim = povm.dim;
    for (Eigen::Index l = 0; l < p.size(); ++l) {
        if (p(l) <= prune_tol) continue;
        sub.elements.push_back(povm.elements[static_cast<std::size_t>(l)]);
        Vector v = vectorize(povm.elements[static_cast<std::size_t>(l)]);
        y += (v * v.adjoint()) / p(l);
    }
    if (!is_info_complete(sub))
        throw std::invalid_argument(
            "min_error_closed_form: pruned frame not informationally "
            "complete");
    Vector vx = vectorize(x);
    const double quad = std::real(vx.dot(psd_pinv(y) * vx));
    return quad - ensemble.second_moment(x);
}

// ------------------------------ noise unbiasing ----------------------------

namespace {

// Row-major superoperator of rho -> sum_k K_k rho K_k^dag, i.e. sum K x conj(K).
Matrix kraus_superoperator(const std::vector<Matrix>& kraus) {
    if (kraus.empty())
        throw std::invalid_argument("kraus_superoperator: empty Kraus list");
    const auto d = kraus.front().rows();
    for (const auto& k : kraus)
        if (k.rows() != d || k.cols() != d)
            throw std::invalid_argument(
                "kraus_superoperator: Kraus blocks must be square, equal dim");
    Matrix s = Matrix::Zero(d * d, d * d);
    for (const auto& k : kraus) s += tensor(k, k.conjugate());
    return s;
}

}  // namespace

DualFrame unbias_noise(const DualFrame& dual, const std::vector<Matrix>& kraus,
                       NoisePicture picture, double tol_rel) {
    // superoperator of the noise acting on effects (Heisenberg picture)
    Matrix s = kraus_superoperator(kraus);
    if (picture == NoisePicture::Schroedinger) s = s.adjoint().eval();
    Eigen::BDCSVD<Matrix> svd(s);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= tol_rel * sv(0))
        throw std::invalid_argument("unbias_noise: noise map not invertible");

    // |Q'_l>> = (S^dag)^{-1} |Q_l>>
    Matrix minv = moore_penrose(Matrix(s.adjoint()), tol_rel);
    DualFrame out;
    out.dim = dual.dim;
    out.elements.reserve(dual.elements.size());
    for (const auto& q : dual.elements)
        out.elements.push_back(
            devectorize(minv * vectorize(q), dual.dim, dual.dim));
    return out;
}

DualFrame qubit_estimator(double p) {
    if (p < 0.0 || p >= 1.0)
        throw std::invalid_argument("qubit_estimator: need 0 <= p < 1");
    DualFrame dual;
    dual.dim = 2;
    for (int i = 1; i <= 3; ++i)
        for (int sign : {+1, -1})
            dual.elements.push_back(Matrix::Identity(2, 2) / 2.0 +
                                    static_cast<double>(sign) * 3.0 /
                                        (2.0 * (1.0 - p)) * pauli(i));
    return dual;
}

std::vector<Matrix> depolarizing_kraus(double p, int d) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("depolarizing_kraus: need 0 <= p <= 1");
    if (d < 2) throw std::invalid_argument("depolarizing_kraus: d >= 2");
    // D_p(X) = (1-p) X + p Tr[X] I/d realized with the Weyl set
    std::vector<Matrix> kraus;
    const double d2 = static_cast<double>(d) * d;
    Matrix w0 = Matrix::Identity(d, d);
    kraus.push_back(std::sqrt(1.0 - p + p / d2) * w0);
    Matrix x = Matrix::Zero(d, d), z = Matrix::Zero(d, d);
    const double theta = 2.0 * std::numbers::pi / d;
    for (int j = 0; j < d; ++j) {
        x((j + 1) % d, j) = 1.0;
        z(j, j) = std::polar(1.0, theta * j);
    }
    Matrix xa = Matrix::Identity(d, d);
    for (int a = 0; a < d; ++a) {
        Matrix zb = Matrix::Identity(d, d);
        for (int b = 0; b < d; ++b) {
            if (a != 0 || b != 0)
                kraus.push_back(std::sqrt(p / d2) * (xa * zb));
            zb = zb * z;
        }
        xa = xa * x;
    }
    return kraus;
}

// ------------------------------ maximum likelihood -------------------------

double log_likelihood(const Povm& povm,
                      const std::vector<std::int64_t>& counts,
                      const Matrix& rho) {
    check_counts(povm, counts, "log_likelihood");
    const RealVector nu = frequencies_of(counts);
    RealVector p(nu.size());
    for (Eigen::Index l = 0; l < p.size(); ++l)
        p(l) = std::max(
            std::real((rho * povm.elements[static_cast<std::size_t>(l)]).trace()),
            0.0);
    double ll = 0.0;
    for (Eigen::Index l = 0; l < nu.size(); ++l) {
        if (nu(l) == 0.0) continue;
        if (p(l) <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += nu(l) * std::log(p(l));
    }
    return ll;
}

double kl_divergence(const RealVector& frequencies,
                     const RealVector& probabilities) {
    if (frequencies.size() != probabilities.size())
        throw std::invalid_argument("kl_divergence: size mismatch");
    double kl = 0.0;
    for (Eigen::Index l = 0; l < frequencies.size(); ++l) {
        if (frequencies(l) == 0.0) continue;
        if (probabilities(l) <= 0.0)
            return std::numeric_limits<double>::infinity();
        kl += frequencies(l) * std::log(frequencies(l) / probabilities(l));
    }
    return kl;
}

double entropy(const RealVector& frequencies) {
    double h = 0.0;
    for (Eigen::Index l = 0; l < frequencies.size(); ++l)
        if (frequencies(l) > 0.0)
            h -= frequencies(l) * std::log(frequencies(l));
    return h;
}

MaxLikResult max_likelihood(const Povm& povm,
                            const std::vector<std::int64_t>& counts,
                            const MaxLikOptions& opts) {
    check_counts(povm, counts, "max_likelihood");
    const RealVector nu = frequencies_of(counts);
    const int d = povm.dim;
    const Matrix mixer = Matrix::Identity(d, d) / static_cast<double>(d);

    MaxLikResult res;
    res.rho = mixer;
    double ll = log_likelihood(povm, counts, res.rho);
    res.loglik_trace.push_back(ll);

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        Matrix r = Matrix::Zero(d, d);
        for (std::size_t l = 0; l < povm.elements.size(); ++l) {
            const auto li = static_cast<Eigen::Index>(l);
            if (nu(li) == 0.0) continue;
            const double pl = std::max(
                std::real((res.rho * povm.elements[l]).trace()), 1e-300);
            r += (nu(li) / pl) * povm.elements[l];
        }
        res.residual = trace_norm(r * res.rho - res.rho);
        res.iterations = iter;
        if (res.residual <= opts.tol) {
            res.converged = true;
            return res;
        }

        Matrix raw = r * res.rho * r;
        raw /= raw.trace().real();
        // damping keeps iterates full rank; it shrinks with the residual so
        // the damped fixed point coincides with the undamped one
        const double eps = std::min(opts.damping, res.residual);
        Matrix cand = (1.0 - eps) * raw + eps * mixer;

        // accept only non-decreasing log-likelihood, shrinking toward the
        // current iterate if the full step overshoots
        bool accepted = false;
        double step = 1.0;
        for (int k = 0; k < 60; ++k) {
            Matrix trial = (1.0 - step) * res.rho + step * cand;
            const double llt = log_likelihood(povm, counts, trial);
            if (llt >= ll - 1e-12) {
                res.rho = trial;
                ll = llt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        res.loglik_trace.push_back(ll);
    }
    Matrix r = Matrix::Zero(d, d);
    for (std::size_t l = 0; l < povm.elements.size(); ++l) {
        const auto li = static_cast<Eigen::Index>(l);
        if (nu(li) == 0.0) continue;
        const double pl =
            std::max(std::real((res.rho * povm.elements[l]).trace()), 1e-300);
        r += (nu(li) / pl) * povm.elements[l];
    }
    res.residual = trace_norm(r * res.rho - res.rho);
    res.converged = res.residual <= opts.tol;
    return res;
}

}  // namespace qtomo
