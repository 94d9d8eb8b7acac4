#include "qtomo/designs.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace qtomo {

std::vector<Matrix> weyl_operators(int d) {
    if (d < 2) throw std::invalid_argument("weyl_operators: d must be >= 2");
    Matrix x = Matrix::Zero(d, d), z = Matrix::Zero(d, d);
    const double theta = 2.0 * std::numbers::pi / d;
    for (int j = 0; j < d; ++j) {
        x((j + 1) % d, j) = 1.0;
        z(j, j) = std::polar(1.0, theta * j);
    }
    std::vector<Matrix> w;
    w.reserve(static_cast<std::size_t>(d) * d);
    Matrix xa = Matrix::Identity(d, d);
    for (int a = 0; a < d; ++a) {
        Matrix zb = Matrix::Identity(d, d);
        for (int b = 0; b < d; ++b) {
            w.push_back(xa * zb);
            zb = zb * z;
        }
        xa = xa * x;
    }
    return w;
}

namespace {

// Canonical representative modulo global phase: rotate so the first entry of
// largest magnitude is real positive, then round to a hash grid.
Matrix phase_canonical(const Matrix& u) {
    Eigen::Index best_r = 0, best_c = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r)
        for (Eigen::Index c = 0; c < u.cols(); ++c)
            if (std::abs(u(r, c)) > best + 1e-9) {
                best = std::abs(u(r, c));
                best_r = r;
                best_c = c;
            }
    Complex z = u(best_r, best_c);
    return u * (std::conj(z) / std::abs(z));
}

std::string grid_key(const Matrix& u) {
    std::string key;
    key.reserve(static_cast<std::size_t>(u.size()) * 8);
    for (Eigen::Index r = 0; r < u.rows(); ++r)
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            const auto re = static_cast<long long>(
                std::llround(u(r, c).real() * 1e6));
            const auto im = static_cast<long long>(
                std::llround(u(r, c).imag() * 1e6));
            key += std::to_string(re) + "," + std::to_string(im) + ";";
        }
    return key;
}

std::vector<Matrix> closure(const std::vector<Matrix>& generators,
                            std::size_t max_size) {
    std::map<std::string, Matrix> seen;
    std::vector<Matrix> frontier;
    const int d = static_cast<int>(generators.front().rows());
    Matrix id = phase_canonical(Matrix::Identity(d, d));
    seen[grid_key(id)] = id;
    frontier.push_back(id);
    while (!frontier.empty()) {
        std::vector<Matrix> next;
        for (const auto& u : frontier)
            for (const auto& g : generators) {
                Matrix v = phase_canonical(u * g);
                auto key = grid_key(v);
                if (!seen.count(key)) {
                    seen[key] = v;
                    next.push_back(v);
                    if (seen.size() > max_size)
                        throw std::runtime_error(
                            "clifford_group: closure exceeded expected size");
                }
            }
        frontier = std::move(next);
    }
    std::vector<Matrix> out;
    out.reserve(seen.size());
    for (auto& [key, u] : seen) out.push_back(std::move(u));
    return out;
}

}  // namespace

std::vector<Matrix> clifford_group(int d) {
    if (d == 2) {
        Matrix h(2, 2), s(2, 2);
        h << 1, 1, 1, -1;
        h /= std::sqrt(2.0);
        s << 1, 0, 0, Complex(0, 1);
        auto g = closure({h, s}, 24);
        if (g.size() != 24)
            throw std::runtime_error("clifford_group: expected 24 elements");
        return g;
    }
    if (d == 3) {
        const double theta = 2.0 * std::numbers::pi / 3;
        Matrix f(3, 3), s = Matrix::Zero(3, 3);
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                f(j, k) = std::polar(1.0 / std::sqrt(3.0), theta * j * k);
        s(0, 0) = 1.0;
        s(1, 1) = 1.0;
        s(2, 2) = std::polar(1.0, theta);
        auto g = closure({f, s}, 216);
        if (g.size() != 216)
            throw std::runtime_error("clifford_group: expected 216 elements");
        return g;
    }
    throw std::invalid_argument("clifford_group: only d = 2, 3 supported");
}

double frame_potential_2(const std::vector<Matrix>& group) {
    if (group.empty())
        throw std::invalid_argument("frame_potential_2: empty group");
    double acc = 0.0;
    for (const auto& g : group)
        for (const auto& h : group) {
            const double t = std::abs((g.adjoint() * h).trace());
            acc += t * t * t * t;
        }
    const auto n = static_cast<double>(group.size());
    return acc / (n * n);
}

bool is_unitary_2design(const std::vector<Matrix>& group, double tol) {
    return std::abs(frame_potential_2(group) - 2.0) <= tol;
}

}  // namespace qtomo
