#pragma once

#include <random>
#include <utility>

#include "qtomo/types.hpp"

namespace qtomo {

// Operators on a tensor-product space H_0 x H_1 x ... are stored as dense
// matrices whose row/column index runs over the factors in row-major order
// (factor 0 is the slowest digit).  A SubsystemShape records the factor
// dimensions and optional integer wire labels used by the link product.
struct SubsystemShape {
    std::vector<int> dims;
    std::vector<int> labels;  // defaults to 0..n-1 when empty

    SubsystemShape() = default;
    explicit SubsystemShape(std::vector<int> d, std::vector<int> l = {});

    int total_dim() const;
    int num_factors() const { return static_cast<int>(dims.size()); }
};

// ------------------------------ vectorization ------------------------------
//
// |X>> = sum_{mn} X_mn |m>|n>, i.e. row-major flattening.  For X of shape
// (rows x cols) the amplitude at index m*cols + n is X(m,n).

Vector vectorize(const Matrix& x);
Matrix devectorize(const Vector& v, int rows, int cols);

// Hilbert-Schmidt inner product <<A|B>> = Tr[A^dag B].
Complex hs_inner(const Matrix& a, const Matrix& b);

// Kronecker product, row-major factor convention (A is the slower digit).
Matrix tensor(const Matrix& a, const Matrix& b);
Matrix tensor(const std::vector<Matrix>& factors);

// ------------------------------ subsystem ops ------------------------------

// Reorder tensor factors: factor at old position perm[k] moves to position k.
Matrix permute_subsystems(const Matrix& x, const SubsystemShape& shape,
                          const std::vector<int>& perm);

// Trace out the factors listed in `which` (positions into shape.dims); the
// result keeps the remaining factors in their original order.
Matrix partial_trace(const Matrix& x, const SubsystemShape& shape,
                     const std::vector<int>& which);

// Transpose the factors listed in `which`, leaving the rest untouched.
Matrix partial_transpose(const Matrix& x, const SubsystemShape& shape,
                         const std::vector<int>& which);

// ------------------------------ link product -------------------------------
//
// A * B = Tr_K[ A^{T_K} (I x B) ] where K is the set of wire labels common to
// both operands.  The result lives on the unconnected wires of A followed by
// the unconnected wires of B, in their original orders.

struct LinkResult {
    Matrix op;
    SubsystemShape shape;
};

LinkResult link_product(const Matrix& a, const SubsystemShape& shape_a,
                        const Matrix& b, const SubsystemShape& shape_b);

// ------------------------------ decompositions -----------------------------

// Moore-Penrose pseudo-inverse; singular values below tol_rel * sigma_max are
// treated as zero.
Matrix moore_penrose(const Matrix& a, double tol_rel = kRankTolRel);

// Hermitian PSD functional calculus (small negative eigenvalues clamped).
Matrix psd_sqrt(const Matrix& a, double tol_rel = kRankTolRel);
Matrix psd_pinv(const Matrix& a, double tol_rel = kRankTolRel);
Matrix psd_pinv_sqrt(const Matrix& a, double tol_rel = kRankTolRel);

double trace_norm(const Matrix& a);

// ------------------------------ random sampling ----------------------------

using Rng = std::mt19937_64;

// Derive an independent stream from (seed, index) via splitmix64.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

Matrix ginibre(int rows, int cols, Rng& rng);
Matrix haar_random_unitary(int d, Rng& rng);
Vector random_pure_state(int d, Rng& rng);
Matrix random_density(int d, Rng& rng);       // Hilbert-Schmidt measure
Matrix random_hermitian(int d, Rng& rng);     // GUE-normalized entries

// Monte-Carlo average of U X U^dag over Haar-random unitaries.
Matrix twirl_check(const Matrix& x, int n_samples, Rng& rng);

}  // namespace qtomo
