#include "qtomo/optimal_tester.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qtomo/designs.hpp"
#include "qtomo/parallel.hpp"

namespace qtomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix hermitize(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

Matrix omega_pair(int d) {
    const Vector iv = vectorize(Matrix::Identity(d, d));
    return (iv * iv.adjoint()) / double(d);
}

std::vector<int> needed_blocks(SubspaceKind kind) {
    switch (kind) {
        case SubspaceKind::QuantumOperations: return {0, 1, 2, 3};
        case SubspaceKind::Channels: return {0, 1, 3};
        case SubspaceKind::UnitalChannels: return {0, 3};
        case SubspaceKind::States: return {0, 1};
        case SubspaceKind::Povms: return {0, 2};
    }
    throw std::logic_error("needed_blocks: unreachable");
}

void require_square_kind(SubspaceKind kind, const char* where) {
    if (kind == SubspaceKind::States || kind == SubspaceKind::Povms)
        throw std::invalid_argument(std::string(where) +
                                    ": kind has a trivial factor");
}

void require_degenerate_kind(SubspaceKind kind, const char* where) {
    if (kind != SubspaceKind::States && kind != SubspaceKind::Povms)
        throw std::invalid_argument(std::string(where) +
                                    ": kind is not a degenerate setup");
}

}  // namespace

std::string kind_name(SubspaceKind kind) {
    switch (kind) {
        case SubspaceKind::QuantumOperations: return "qops";
        case SubspaceKind::Channels: return "channels";
        case SubspaceKind::UnitalChannels: return "unital";
        case SubspaceKind::States: return "states";
        case SubspaceKind::Povms: return "povms";
    }
    throw std::logic_error("kind_name: unreachable");
}

SubspaceKind kind_from_name(const std::string& name) {
    if (name == "qops") return SubspaceKind::QuantumOperations;
    if (name == "channels") return SubspaceKind::Channels;
    if (name == "unital") return SubspaceKind::UnitalChannels;
    if (name == "states") return SubspaceKind::States;
    if (name == "povms") return SubspaceKind::Povms;
    throw std::invalid_argument("kind_from_name: unknown kind '" + name + "'");
}

std::array<Matrix, 4> schur_projectors(int d) {
    if (d < 2) throw std::invalid_argument("schur_projectors: need d >= 2");
    const Matrix omega = omega_pair(d);
    const Matrix comp = Matrix::Identity(d * d, d * d) - omega;
    const SubsystemShape shape({d, d, d, d});
    const std::vector<int> to_row_col_order{0, 2, 1, 3};
    auto place = [&](const Matrix& out_pair, const Matrix& in_pair) {
        // tensor() yields the pair order (out-row, out-col, in-row, in-col);
        // interleave to (out-row, in-row, out-col, in-col).
        return permute_subsystems(tensor(out_pair, in_pair), shape,
                                  to_row_col_order);
    };
    return {place(omega, omega), place(comp, omega), place(omega, comp),
            place(comp, comp)};
}

Matrix ytilde_matrix(const SchurCoefficients& coeffs) {
    const auto p = schur_projectors(coeffs.d);
    return p[0] + coeffs.a * p[1] + coeffs.b * p[2] + coeffs.c * p[3];
}

Matrix subspace_projector(SubspaceKind kind, int d) {
    require_square_kind(kind, "subspace_projector");
    const auto p = schur_projectors(d);
    Matrix q = Matrix::Zero(p[0].rows(), p[0].cols());
    for (int b : needed_blocks(kind)) q += p[b];
    return q;
}

Matrix observables_operator(const WeightedObservables& g) {
    if (g.observables.empty() ||
        g.weights.size() != Eigen::Index(g.observables.size()))
        throw std::invalid_argument(
            "observables_operator: need matching observables and weights");
    const Eigen::Index dim =
        g.observables.front().rows() * g.observables.front().cols();
    Matrix out = Matrix::Zero(dim, dim);
    for (std::size_t n = 0; n < g.observables.size(); ++n) {
        if (g.weights(Eigen::Index(n)) <= 0.0)
            throw std::invalid_argument(
                "observables_operator: weights must be positive");
        const Vector v = vectorize(g.observables[n]);
        if (v.size() != dim)
            throw std::invalid_argument(
                "observables_operator: observable dimension mismatch");
        out += g.weights(Eigen::Index(n)) * (v * v.adjoint());
    }
    return out;
}

double eta(const Matrix& y, const Matrix& g, double tol_rel) {
    if (y.rows() != y.cols() || g.rows() != g.cols() || y.rows() != g.rows())
        throw std::invalid_argument("eta: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(y));
    const RealVector ev = es.eigenvalues();
    const double lmax = ev.cwiseAbs().maxCoeff();
    const Matrix g_eig = es.eigenvectors().adjoint() * hermitize(g) *
                         es.eigenvectors();
    const double cut = tol_rel * lmax;
    double value = 0.0;
    double leak = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double w = g_eig(i, i).real();
        if (ev(i) > cut)
            value += w / ev(i);
        else
            leak += w;
    }
    const double scale = std::max(1.0, std::abs(g.trace().real()));
    if (leak > 1e-9 * scale) return kInf;
    return value;
}

SchurCoefficients covariant_Y_from_seeds(
    const std::vector<std::pair<double, Matrix>>& seeds, int d) {
    if (seeds.empty())
        throw std::invalid_argument("covariant_Y_from_seeds: no seeds");
    double alpha_sum = 0.0;
    for (const auto& [alpha, psi] : seeds) {
        if (alpha <= 0.0)
            throw std::invalid_argument(
                "covariant_Y_from_seeds: weights must be positive");
        if (psi.rows() != d || psi.cols() != d)
            throw std::invalid_argument(
                "covariant_Y_from_seeds: seeds must be d x d");
        if (std::abs(psi.squaredNorm() - 1.0) > 1e-9)
            throw std::invalid_argument(
                "covariant_Y_from_seeds: seeds must have unit norm");
        alpha_sum += alpha;
    }
    if (std::abs(alpha_sum - double(d)) > 1e-9)
        throw std::invalid_argument(
            "covariant_Y_from_seeds: weights must sum to d");

    const SubsystemShape shape({d, d});
    double sum_in = 0.0, sum_out = 0.0, sum_sq = 0.0;
    for (const auto& [alpha, psi] : seeds) {
        const Vector v = vectorize(psi);
        const Matrix pihat = alpha * (v * v.adjoint());
        const Matrix tr_in = partial_trace(pihat, shape, {1});
        const Matrix tr_out = partial_trace(pihat, shape, {0});
        sum_in += (tr_in * tr_in).trace().real() / alpha;
        sum_out += (tr_out * tr_out).trace().real() / alpha;
        sum_sq += double(d) * (pihat * pihat).trace().real() / alpha;
    }
    const double dd = double(d) * d - 1.0;
    SchurCoefficients out;
    out.d = d;
    out.a = (sum_in - 1.0) / dd;
    out.b = (sum_out - 1.0) / dd;
    out.c = (sum_sq - dd * (out.a + out.b) - 1.0) / (dd * dd);
    auto clamp_tiny = [](double& x) {
        if (x < 0.0 && x > -1e-12) x = 0.0;
    };
    clamp_tiny(out.a);
    clamp_tiny(out.b);
    clamp_tiny(out.c);
    if (out.a < 0.0 || out.b < 0.0 || out.c < 0.0 ||
        out.a > 1.0 / (d + 1.0) + 1e-9)
        throw std::logic_error(
            "covariant_Y_from_seeds: coefficients out of range");
    return out;
}

Matrix y_from_tester(const Tester& t) {
    if (t.d_out != t.d_in)
        throw std::invalid_argument("y_from_tester: square testers only");
    const Eigen::Index dd = Eigen::Index(t.d_out) * t.d_in;
    Matrix y = Matrix::Zero(dd * dd, dd * dd);
    for (const auto& pi : t.elements) {
        const double tr = pi.trace().real();
        if (tr <= 1e-15) continue;
        const Vector v = vectorize(pi);
        y += (double(t.d_out) / tr) * (v * v.adjoint());
    }
    return y;
}

double eta_schur(const SchurCoefficients& coeffs,
                 const std::array<double, 4>& g) {
    const double dd = double(coeffs.d) * coeffs.d - 1.0;
    double out = g[0];
    const std::array<std::array<double, 3>, 3> terms{{
        {g[1], coeffs.a, dd},
        {g[2], coeffs.b, dd},
        {g[3], coeffs.c, dd * dd},
    }};
    for (const auto& [weight, coeff, mult] : terms) {
        if (weight == 0.0) continue;
        if (coeff <= 1e-12) return kInf;
        out += mult * weight / coeff;
    }
    return out;
}

double eta_subspace(double a, int d, SubspaceKind kind) {
    if (a < 0.0 || a >= 0.5)
        throw std::out_of_range("eta_subspace: need 0 <= A < 1/2");
    const double dd = double(d) * d - 1.0;
    switch (kind) {
        case SubspaceKind::QuantumOperations:
            if (a <= 0.0) return kInf;
            return 1.0 + dd * (2.0 / a + dd * dd / (1.0 - 2.0 * a));
        case SubspaceKind::Channels:
            if (a <= 0.0) return kInf;
            return 1.0 + dd * (1.0 / a + dd * dd / (1.0 - 2.0 * a));
        case SubspaceKind::UnitalChannels:
            return 1.0 + dd * dd * dd / (1.0 - 2.0 * a);
        case SubspaceKind::States:
        case SubspaceKind::Povms:
            if (a <= 0.0) return kInf;
            return 1.0 + dd / a;
    }
    throw std::logic_error("eta_subspace: unreachable");
}

double optimal_A(SubspaceKind kind, int d) {
    if (d < 2) throw std::invalid_argument("optimal_A: need d >= 2");
    const double d2 = double(d) * d;
    switch (kind) {
        case SubspaceKind::QuantumOperations: return 1.0 / (d2 + 1.0);
        case SubspaceKind::Channels:
            return 1.0 / (std::sqrt(2.0) * (d2 - 1.0) + 2.0);
        case SubspaceKind::UnitalChannels: return 0.0;
        case SubspaceKind::States:
        case SubspaceKind::Povms: return 1.0 / (d + 1.0);
    }
    throw std::logic_error("optimal_A: unreachable");
}

double optimal_eta_bound(SubspaceKind kind, int d) {
    if (d < 2) throw std::invalid_argument("optimal_eta_bound: need d >= 2");
    const double d2 = double(d) * d;
    const double r2 = std::sqrt(2.0);
    switch (kind) {
        case SubspaceKind::QuantumOperations: return d2 * d2 * d2 + d2 * d2 - d2;
        case SubspaceKind::Channels:
            return d2 * d2 * d2 + (2.0 * r2 - 3.0) * d2 * d2 +
                   (5.0 - 4.0 * r2) * d2 + 2.0 * (r2 - 1.0);
        case SubspaceKind::UnitalChannels: {
            const double dd = d2 - 1.0;
            return dd * dd * dd + 1.0;
        }
        case SubspaceKind::States:
        case SubspaceKind::Povms:
            return double(d) * d2 + d2 - double(d);
    }
    throw std::logic_error("optimal_eta_bound: unreachable");
}

double seed_purity_target(SubspaceKind kind, int d) {
    const double d2 = double(d) * d;
    const double r2 = std::sqrt(2.0);
    switch (kind) {
        case SubspaceKind::QuantumOperations: return 2.0 * d / (d2 + 1.0);
        case SubspaceKind::Channels:
            return (r2 * (d2 - 1.0) + 1.0 + d2) / (d * (r2 * (d2 - 1.0) + 2.0));
        case SubspaceKind::UnitalChannels: return 1.0 / d;
        case SubspaceKind::States:
        case SubspaceKind::Povms: return 1.0;
    }
    throw std::logic_error("seed_purity_target: unreachable");
}

OptimalSeed optimal_seed(SubspaceKind kind, int d, const Vector& psi) {
    if (d < 2) throw std::invalid_argument("optimal_seed: need d >= 2");
    if (psi.size() != d || std::abs(psi.norm() - 1.0) > 1e-9)
        throw std::invalid_argument(
            "optimal_seed: fiducial must be a unit d-vector");
    double beta = 0.0;
    const double d2 = double(d) * d;
    switch (kind) {
        case SubspaceKind::QuantumOperations:
            beta = std::sqrt((d + 1.0) / (d2 + 1.0));
            break;
        case SubspaceKind::Channels:
            beta = std::sqrt((d + 1.0) / (2.0 + std::sqrt(2.0) * (d2 - 1.0)));
            break;
        case SubspaceKind::UnitalChannels:
            beta = 0.0;
            break;
        case SubspaceKind::States:
        case SubspaceKind::Povms:
            beta = 1.0;
            break;
    }
    OptimalSeed out;
    out.psi = psd_sqrt(((1.0 - beta) / d) * Matrix::Identity(d, d) +
                       beta * (psi * psi.adjoint()));
    out.beta = beta;
    out.fiducial = psi;
    out.kind = kind;
    const Matrix rho = out.psi * out.psi.adjoint();
    const double purity = (rho * rho).trace().real();
    if (std::abs(out.psi.squaredNorm() - 1.0) > 1e-12 ||
        std::abs(purity - seed_purity_target(kind, d)) > 1e-12)
        throw std::logic_error("optimal_seed: construction self-check failed");
    return out;
}

IcCheck check_ic_covariant(const OptimalSeed& seed,
                           const std::vector<Matrix>& design) {
    const int d = int(seed.psi.rows());
    if (seed.psi.cols() != d || d < 2)
        throw std::invalid_argument("check_ic_covariant: bad seed");
    if (design.empty())
        throw std::invalid_argument("check_ic_covariant: empty design");

    IcCheck out;
    const Matrix rho_out = seed.psi * seed.psi.adjoint();
    const Matrix rho_in = seed.psi.adjoint() * seed.psi;
    out.overlaps[0] = 1.0 / (double(d) * d);
    out.overlaps[1] = ((rho_out * rho_out).trace().real() - 1.0 / d) / d;
    out.overlaps[2] = ((rho_in * rho_in).trace().real() - 1.0 / d) / d;
    out.overlaps[3] =
        1.0 - out.overlaps[0] - out.overlaps[1] - out.overlaps[2];

    const Vector vpsi = vectorize(seed.psi);
    const Vector f0 = vectorize(Matrix(double(d) * (vpsi * vpsi.adjoint())));
    const Matrix f = twirl_design_pair(f0 * f0.adjoint(), d, design);

    const auto projs = schur_projectors(d);
    Matrix q = Matrix::Zero(f.rows(), f.cols());
    for (int b : needed_blocks(seed.kind)) q += projs[b];

    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(f));
    const double fmax = es.eigenvalues().maxCoeff();
    const Matrix restricted =
        q * f * q +
        (2.0 * std::abs(fmax) + 1.0) * (Matrix::Identity(f.rows(), f.cols()) - q);
    Eigen::SelfAdjointEigenSolver<Matrix> es_r(hermitize(restricted));
    out.min_eigenvalue = es_r.eigenvalues().minCoeff();

    bool overlaps_ok = true;
    for (int b : needed_blocks(seed.kind))
        overlaps_ok = overlaps_ok && out.overlaps[std::size_t(b)] > 1e-9;
    out.ok = overlaps_ok &&
             out.min_eigenvalue > 1e-9 * std::max(std::abs(fmax), 1.0);
    return out;
}

double special_case_eta(SubspaceKind kind, int d) {
    require_degenerate_kind(kind, "special_case_eta");
    if (d < 2) throw std::invalid_argument("special_case_eta: need d >= 2");
    const double d2 = double(d) * d;
    return double(d) * d2 + d2 - double(d);
}

double special_case_eta_pipeline(SubspaceKind kind, int d) {
    require_degenerate_kind(kind, "special_case_eta_pipeline");
    if (d < 2)
        throw std::invalid_argument("special_case_eta_pipeline: need d >= 2");
    // Rank-one seed element M = d |e><e| on the surviving factor (Tr M = d);
    // the trivial factor reduces its marginal to M itself, so only one
    // nontrivial block remains and its coefficient follows the general
    // formula.  With States it is the P2 analogue, with Povms the P3 one;
    // the numbers coincide.
    Vector e0 = Vector::Zero(d);
    e0(0) = 1.0;
    const Matrix m = double(d) * (e0 * e0.adjoint());
    const double tr = m.trace().real();
    const double coeff =
        ((m * m).trace().real() / tr - 1.0) / (double(d) * d - 1.0);
    const Matrix omega = omega_pair(d);
    const Matrix ytilde =
        omega + coeff * (Matrix::Identity(d * d, d * d) - omega);
    return eta(ytilde, Matrix::Identity(d * d, d * d));
}

Tester build_optimal_tester(SubspaceKind kind, int d, const OptimalSeed& seed,
                            const std::vector<Matrix>& design) {
    require_square_kind(kind, "build_optimal_tester");
    if (seed.psi.rows() != d || seed.psi.cols() != d)
        throw std::invalid_argument("build_optimal_tester: seed is not d x d");
    if (!is_unitary_2design(design))
        throw std::invalid_argument(
            "build_optimal_tester: design is not a unitary 2-design");
    OptimalSeed checked = seed;
    checked.kind = kind;
    const IcCheck ic = check_ic_covariant(checked, design);
    if (!ic.ok)
        throw std::runtime_error(
            "build_optimal_tester: design too small for tester completeness");

    const std::size_t n = design.size();
    Tester t;
    t.d_out = d;
    t.d_in = d;
    t.elements.reserve(n * n);
    const double w = double(d) / double(n * n);
    for (const auto& u : design) {
        for (const auto& v : design) {
            const Vector vec_gh = vectorize(u * seed.psi * v.transpose());
            t.elements.push_back(w * (vec_gh * vec_gh.adjoint()));
        }
    }
    const TesterCheck chk = validate_tester(t);
    if (!chk.ok)
        throw std::logic_error(
            "build_optimal_tester: construction self-check failed");
    return t;
}

std::string optimal_results_csv(const std::vector<SubspaceKind>& kinds,
                                const std::vector<int>& dims) {
    std::ostringstream os;
    os << "kind,d,A_opt,beta,purity,eta_bound,eta_computed,residual\n";
    char buf[256];
    for (SubspaceKind kind : kinds) {
        for (int d : dims) {
            Vector e0 = Vector::Zero(d);
            e0(0) = 1.0;
            const OptimalSeed seed = optimal_seed(kind, d, e0);
            const Matrix rho = seed.psi * seed.psi.adjoint();
            const double purity = (rho * rho).trace().real();
            const double bound = optimal_eta_bound(kind, d);
            double computed = 0.0;
            if (kind == SubspaceKind::States || kind == SubspaceKind::Povms) {
                computed = special_case_eta_pipeline(kind, d);
            } else {
                const SchurCoefficients coeffs =
                    covariant_Y_from_seeds({{double(d), seed.psi}}, d);
                computed =
                    eta(ytilde_matrix(coeffs), subspace_projector(kind, d));
            }
            std::snprintf(buf, sizeof(buf),
                          "%s,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.3g\n",
                          kind_name(kind).c_str(), d, optimal_A(kind, d),
                          seed.beta, purity, bound, computed,
                          std::abs(computed - bound) / bound);
            os << buf;
        }
    }
    return os.str();
}

}  // namespace qtomo
