#pragma once

#include <cstdint>
#include <functional>

#include "qtomo/linops.hpp"

namespace qtomo {

// Every kernel below has a serial reference path and an OpenMP path that
// produce bitwise-identical results: work is split into fixed-size chunks,
// each chunk is accumulated in index order, and the per-chunk partials are
// combined in chunk order regardless of thread count.
enum class ExecutionPolicy { Serial, Parallel };

// (1/n) sum_k W_k X W_k^dag over a fixed conjugator list.
Matrix twirl_conjugate(const Matrix& x, const std::vector<Matrix>& conjugators,
                       ExecutionPolicy policy = ExecutionPolicy::Parallel);

// Average of (U_g x V_h x conj U_g x conj V_h) Y (...)^dag over all pairs of
// design elements, evaluated as two single-group passes.  Y acts on the
// vectorized (out, in) operator space, so it is d^4 x d^4.
Matrix twirl_design_pair(const Matrix& y, int d,
                         const std::vector<Matrix>& design,
                         ExecutionPolicy policy = ExecutionPolicy::Parallel);

// Monte Carlo Haar estimate of the same two-sided average.  Samples are drawn
// in chunks of 256 from streams mix_seed(seed, chunk), so the result depends
// only on (y, d, samples, seed).
Matrix twirl_haar_pair_mc(const Matrix& y, int d, std::size_t samples,
                          std::uint64_t seed,
                          ExecutionPolicy policy = ExecutionPolicy::Parallel);

// Evaluate body(trial, rng) for trial = 0..trials-1, each with its own rng
// seeded from mix_seed(seed, trial); entry t of the result depends only on
// (seed, t), so prefixes agree across different trial counts and policies.
RealVector run_trials(std::size_t trials, std::uint64_t seed,
                      const std::function<double(std::size_t, Rng&)>& body,
                      ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace qtomo
