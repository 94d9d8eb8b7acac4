#include "qtomo/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtomo {

namespace {

constexpr std::size_t kConjugateChunk = 32;
constexpr std::size_t kHaarChunk = 256;

// Run fn(c) for c = 0..n_chunks-1 under the requested policy.
template <typename Fn>
void for_each_chunk(std::size_t n_chunks, ExecutionPolicy policy, Fn&& fn) {
    if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c)
            fn(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    }
}

Matrix combine_chunks(const std::vector<Matrix>& partial, Eigen::Index rows,
                      Eigen::Index cols, double scale) {
    Matrix acc = Matrix::Zero(rows, cols);
    for (const auto& p : partial) acc += p;
    return acc * scale;
}

}  // namespace

Matrix twirl_conjugate(const Matrix& x, const std::vector<Matrix>& conjugators,
                       ExecutionPolicy policy) {
    if (conjugators.empty())
        throw std::invalid_argument("twirl_conjugate: empty conjugator list");
    for (const auto& w : conjugators)
        if (w.rows() != x.rows() || w.cols() != x.rows())
            throw std::invalid_argument("twirl_conjugate: dimension mismatch");

    const std::size_t n = conjugators.size();
    const std::size_t n_chunks = (n + kConjugateChunk - 1) / kConjugateChunk;
    std::vector<Matrix> partial(n_chunks);
    for_each_chunk(n_chunks, policy, [&](std::size_t c) {
        const std::size_t lo = c * kConjugateChunk;
        const std::size_t hi = std::min(n, lo + kConjugateChunk);
        Matrix s = Matrix::Zero(x.rows(), x.cols());
        for (std::size_t k = lo; k < hi; ++k)
            s += conjugators[k] * x * conjugators[k].adjoint();
        partial[c] = std::move(s);
    });
    return combine_chunks(partial, x.rows(), x.cols(), 1.0 / double(n));
}

Matrix twirl_design_pair(const Matrix& y, int d,
                         const std::vector<Matrix>& design,
                         ExecutionPolicy policy) {
    const Eigen::Index d4 = Eigen::Index(d) * d * d * d;
    if (y.rows() != d4 || y.cols() != d4)
        throw std::invalid_argument("twirl_design_pair: y must be d^4 x d^4");
    const Matrix id = Matrix::Identity(d, d);
    std::vector<Matrix> pass1, pass2;
    pass1.reserve(design.size());
    pass2.reserve(design.size());
    for (const auto& u : design) {
        pass1.push_back(tensor({u, id, u.conjugate(), id}));
        pass2.push_back(tensor({id, u, id, u.conjugate()}));
    }
    return twirl_conjugate(twirl_conjugate(y, pass1, policy), pass2, policy);
}

Matrix twirl_haar_pair_mc(const Matrix& y, int d, std::size_t samples,
                          std::uint64_t seed, ExecutionPolicy policy) {
    const Eigen::Index d4 = Eigen::Index(d) * d * d * d;
    if (y.rows() != d4 || y.cols() != d4)
        throw std::invalid_argument("twirl_haar_pair_mc: y must be d^4 x d^4");
    if (samples == 0)
        throw std::invalid_argument("twirl_haar_pair_mc: need samples > 0");

    const std::size_t n_chunks = (samples + kHaarChunk - 1) / kHaarChunk;
    std::vector<Matrix> partial(n_chunks);
    for_each_chunk(n_chunks, policy, [&](std::size_t c) {
        const std::size_t lo = c * kHaarChunk;
        const std::size_t hi = std::min(samples, lo + kHaarChunk);
        Rng rng(mix_seed(seed, c));
        Matrix s = Matrix::Zero(y.rows(), y.cols());
        for (std::size_t k = lo; k < hi; ++k) {
            const Matrix u = haar_random_unitary(d, rng);
            const Matrix v = haar_random_unitary(d, rng);
            const Matrix w = tensor({u, v, u.conjugate(), v.conjugate()});
            s += w * y * w.adjoint();
        }
        partial[c] = std::move(s);
    });
    return combine_chunks(partial, y.rows(), y.cols(), 1.0 / double(samples));
}

RealVector run_trials(std::size_t trials, std::uint64_t seed,
                      const std::function<double(std::size_t, Rng&)>& body,
                      ExecutionPolicy policy) {
    RealVector out = RealVector::Zero(Eigen::Index(trials));
    for_each_chunk(trials, policy, [&](std::size_t t) {
        Rng rng(mix_seed(seed, t));
        out(Eigen::Index(t)) = body(t, rng);
    });
    return out;
}

}  // namespace qtomo
