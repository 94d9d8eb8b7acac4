#include "qtomo/linops.hpp"

#include <algorithm>
#include <numeric>

namespace qtomo {

namespace {

// Row-major strides over the factor list (factor 0 is the slowest digit).
std::vector<int> strides_of(const std::vector<int>& dims) {
    std::vector<int> s(dims.size());
    int acc = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        s[static_cast<std::size_t>(k)] = acc;
        acc *= dims[static_cast<std::size_t>(k)];
    }
    return s;
}

void check_shape(const Matrix& x, const SubsystemShape& shape,
                 const char* fn) {
    if (x.rows() != x.cols())
        throw std::invalid_argument(std::string(fn) + ": operator not square");
    if (x.rows() != shape.total_dim())
        throw std::invalid_argument(std::string(fn) +
                                    ": shape does not match operator size");
}

void check_which(const SubsystemShape& shape, const std::vector<int>& which,
                 const char* fn) {
    std::vector<char> seen(shape.dims.size(), 0);
    for (int w : which) {
        if (w < 0 || w >= shape.num_factors())
            throw std::invalid_argument(std::string(fn) +
                                        ": factor index out of range");
        if (seen[static_cast<std::size_t>(w)])
            throw std::invalid_argument(std::string(fn) +
                                        ": repeated factor index");
        seen[static_cast<std::size_t>(w)] = 1;
    }
}

}  // namespace

SubsystemShape::SubsystemShape(std::vector<int> d, std::vector<int> l)
    : dims(std::move(d)), labels(std::move(l)) {
    for (int dim : dims)
        if (dim < 1)
            throw std::invalid_argument("SubsystemShape: dims must be >= 1");
    if (labels.empty()) {
        labels.resize(dims.size());
        std::iota(labels.begin(), labels.end(), 0);
    }
    if (labels.size() != dims.size())
        throw std::invalid_argument("SubsystemShape: labels/dims mismatch");
    std::vector<int> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("SubsystemShape: duplicate labels");
}

int SubsystemShape::total_dim() const {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
}

// ------------------------------ vectorization ------------------------------

Vector vectorize(const Matrix& x) {
    Vector v(x.rows() * x.cols());
    for (Eigen::Index m = 0; m < x.rows(); ++m)
        for (Eigen::Index n = 0; n < x.cols(); ++n)
            v(m * x.cols() + n) = x(m, n);
    return v;
}

Matrix devectorize(const Vector& v, int rows, int cols) {
    if (v.size() != static_cast<Eigen::Index>(rows) * cols)
        throw std::invalid_argument("devectorize: size mismatch");
    Matrix x(rows, cols);
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n) x(m, n) = v(m * cols + n);
    return x;
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("hs_inner: dimension mismatch");
    return (a.adjoint() * b).trace();
}

Matrix tensor(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

Matrix tensor(const std::vector<Matrix>& factors) {
    if (factors.empty())
        throw std::invalid_argument("tensor: empty factor list");
    Matrix out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k)
        out = tensor(out, factors[k]);
    return out;
}

// ------------------------------ subsystem ops ------------------------------

Matrix permute_subsystems(const Matrix& x, const SubsystemShape& shape,
                          const std::vector<int>& perm) {
    check_shape(x, shape, "permute_subsystems");
    const int nf = shape.num_factors();
    if (static_cast<int>(perm.size()) != nf)
        throw std::invalid_argument("permute_subsystems: bad permutation size");
    check_which(shape, perm, "permute_subsystems");

    const auto old_strides = strides_of(shape.dims);
    std::vector<int> new_dims(perm.size());
    for (int k = 0; k < nf; ++k)
        new_dims[static_cast<std::size_t>(k)] =
            shape.dims[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
    const auto new_strides = strides_of(new_dims);

    const int total = shape.total_dim();
    // old row index corresponding to each new row index
    std::vector<int> back(static_cast<std::size_t>(total));
    for (int r = 0; r < total; ++r) {
        int rem = r, old_index = 0;
        for (int k = 0; k < nf; ++k) {
            const int digit = rem / new_strides[static_cast<std::size_t>(k)];
            rem %= new_strides[static_cast<std::size_t>(k)];
            old_index += digit *
                old_strides[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
        }
        back[static_cast<std::size_t>(r)] = old_index;
    }

    Matrix out(total, total);
    for (int r = 0; r < total; ++r)
        for (int c = 0; c < total; ++c)
            out(r, c) = x(back[static_cast<std::size_t>(r)],
                          back[static_cast<std::size_t>(c)]);
    return out;
}

Matrix partial_trace(const Matrix& x, const SubsystemShape& shape,
                     const std::vector<int>& which) {
    check_shape(x, shape, "partial_trace");
    check_which(shape, which, "partial_trace");

    const int nf = shape.num_factors();
    std::vector<char> traced(static_cast<std::size_t>(nf), 0);
    for (int w : which) traced[static_cast<std::size_t>(w)] = 1;

    const auto strides = strides_of(shape.dims);
    std::vector<int> keep, kill;
    for (int k = 0; k < nf; ++k)
        (traced[static_cast<std::size_t>(k)] ? kill : keep).push_back(k);

    int keep_dim = 1, kill_dim = 1;
    for (int k : keep) keep_dim *= shape.dims[static_cast<std::size_t>(k)];
    for (int k : kill) kill_dim *= shape.dims[static_cast<std::size_t>(k)];

    // flat offsets of kept / traced multi-indices in the original indexing
    auto offsets = [&](const std::vector<int>& factors, int count) {
        std::vector<int> off(static_cast<std::size_t>(count), 0);
        int rep = 1;
        for (int f = static_cast<int>(factors.size()) - 1; f >= 0; --f) {
            const int k = factors[static_cast<std::size_t>(f)];
            const int dk = shape.dims[static_cast<std::size_t>(k)];
            for (int i = 0; i < count; ++i) {
                const int digit = (i / rep) % dk;
                off[static_cast<std::size_t>(i)] +=
                    digit * strides[static_cast<std::size_t>(k)];
            }
            rep *= dk;
        }
        return off;
    };
    const auto keep_off = offsets(keep, keep_dim);
    const auto kill_off = offsets(kill, kill_dim);

    Matrix out = Matrix::Zero(keep_dim, keep_dim);
    for (int r = 0; r < keep_dim; ++r)
        for (int c = 0; c < keep_dim; ++c) {
            Complex acc = 0.0;
            for (int t = 0; t < kill_dim; ++t)
                acc += x(keep_off[static_cast<std::size_t>(r)] +
                             kill_off[static_cast<std::size_t>(t)],
                         keep_off[static_cast<std::size_t>(c)] +
                             kill_off[static_cast<std::size_t>(t)]);
            out(r, c) = acc;
        }
    return out;
}

Matrix partial_transpose(const Matrix& x, const SubsystemShape& shape,
                         const std::vector<int>& which) {
    check_shape(x, shape, "partial_transpose");
    check_which(shape, which, "partial_transpose");

    const int nf = shape.num_factors();
    std::vector<char> flip(static_cast<std::size_t>(nf), 0);
    for (int w : which) flip[static_cast<std::size_t>(w)] = 1;

    const auto strides = strides_of(shape.dims);
    const int total = shape.total_dim();
    Matrix out(total, total);
    std::vector<int> rdig(static_cast<std::size_t>(nf)),
        cdig(static_cast<std::size_t>(nf));
    for (int r = 0; r < total; ++r)
        for (int c = 0; c < total; ++c) {
            int rem_r = r, rem_c = c;
            for (int k = 0; k < nf; ++k) {
                rdig[static_cast<std::size_t>(k)] =
                    rem_r / strides[static_cast<std::size_t>(k)];
                cdig[static_cast<std::size_t>(k)] =
                    rem_c / strides[static_cast<std::size_t>(k)];
                rem_r %= strides[static_cast<std::size_t>(k)];
                rem_c %= strides[static_cast<std::size_t>(k)];
            }
            int src_r = 0, src_c = 0;
            for (int k = 0; k < nf; ++k) {
                const int rr = flip[static_cast<std::size_t>(k)]
                                   ? cdig[static_cast<std::size_t>(k)]
                                   : rdig[static_cast<std::size_t>(k)];
                const int cc = flip[static_cast<std::size_t>(k)]
                                   ? rdig[static_cast<std::size_t>(k)]
                                   : cdig[static_cast<std::size_t>(k)];
                src_r += rr * strides[static_cast<std::size_t>(k)];
                src_c += cc * strides[static_cast<std::size_t>(k)];
            }
            out(r, c) = x(src_r, src_c);
        }
    return out;
}

// ------------------------------ link product -------------------------------

LinkResult link_product(const Matrix& a, const SubsystemShape& shape_a,
                        const Matrix& b, const SubsystemShape& shape_b) {
    check_shape(a, shape_a, "link_product");
    check_shape(b, shape_b, "link_product");

    std::vector<int> common;
    for (int la : shape_a.labels)
        if (std::find(shape_b.labels.begin(), shape_b.labels.end(), la) !=
            shape_b.labels.end())
            common.push_back(la);
    std::sort(common.begin(), common.end());

    auto position_of = [](const SubsystemShape& s, int label) {
        for (int k = 0; k < s.num_factors(); ++k)
            if (s.labels[static_cast<std::size_t>(k)] == label) return k;
        throw std::invalid_argument("link_product: label lookup failed");
    };
    for (int lk : common) {
        const int da = shape_a.dims[static_cast<std::size_t>(position_of(shape_a, lk))];
        const int db = shape_b.dims[static_cast<std::size_t>(position_of(shape_b, lk))];
        if (da != db)
            throw std::invalid_argument(
                "link_product: common wire dimension mismatch");
    }

    // A reordered to [free_a..., common...], B to [common..., free_b...].
    std::vector<int> perm_a, perm_b, free_a_labels, free_b_labels;
    for (int k = 0; k < shape_a.num_factors(); ++k) {
        const int l = shape_a.labels[static_cast<std::size_t>(k)];
        if (std::find(common.begin(), common.end(), l) == common.end()) {
            perm_a.push_back(k);
            free_a_labels.push_back(l);
        }
    }
    for (int lk : common) perm_a.push_back(position_of(shape_a, lk));
    for (int lk : common) perm_b.push_back(position_of(shape_b, lk));
    for (int k = 0; k < shape_b.num_factors(); ++k) {
        const int l = shape_b.labels[static_cast<std::size_t>(k)];
        if (std::find(common.begin(), common.end(), l) == common.end()) {
            perm_b.push_back(k);
            free_b_labels.push_back(l);
        }
    }

    std::vector<int> dims_a_new, dims_b_new;
    for (int k : perm_a)
        dims_a_new.push_back(shape_a.dims[static_cast<std::size_t>(k)]);
    for (int k : perm_b)
        dims_b_new.push_back(shape_b.dims[static_cast<std::size_t>(k)]);

    Matrix ap = permute_subsystems(a, shape_a, perm_a);
    Matrix bp = permute_subsystems(b, shape_b, perm_b);

    const int n_common = static_cast<int>(common.size());
    int d_free_a = 1, d_common = 1, d_free_b = 1;
    for (std::size_t k = 0; k + common.size() < dims_a_new.size(); ++k)
        d_free_a *= dims_a_new[k];
    for (int lk : common) d_common *= shape_a.dims[static_cast<std::size_t>(position_of(shape_a, lk))];
    for (std::size_t k = common.size(); k < dims_b_new.size(); ++k)
        d_free_b *= dims_b_new[k];

    // transpose A on the connected block
    SubsystemShape ab_shape({d_free_a, d_common});
    Matrix at = (n_common > 0)
                    ? partial_transpose(ap, ab_shape, {1})
                    : ap;

    Matrix big1 = tensor(at, Matrix::Identity(d_free_b, d_free_b));
    Matrix big2 = tensor(Matrix::Identity(d_free_a, d_free_a), bp);
    Matrix prod = big1 * big2;

    SubsystemShape prod_shape({d_free_a, d_common, d_free_b});
    Matrix res = (n_common > 0) ? partial_trace(prod, prod_shape, {1}) : prod;

    std::vector<int> out_dims, out_labels;
    for (std::size_t k = 0; k + common.size() < dims_a_new.size(); ++k)
        out_dims.push_back(dims_a_new[k]);
    for (std::size_t k = common.size(); k < dims_b_new.size(); ++k)
        out_dims.push_back(dims_b_new[k]);
    out_labels = free_a_labels;
    out_labels.insert(out_labels.end(), free_b_labels.begin(),
                      free_b_labels.end());
    if (out_dims.empty()) out_dims = {1};
    if (out_labels.size() < out_dims.size()) {
        // fully connected product collapses to a scalar on a trivial wire
        int fresh = 0;
        for (int l : shape_a.labels) fresh = std::max(fresh, l + 1);
        for (int l : shape_b.labels) fresh = std::max(fresh, l + 1);
        out_labels.push_back(fresh);
    }
    return {std::move(res), SubsystemShape(out_dims, out_labels)};
}

// ------------------------------ decompositions -----------------------------

Matrix moore_penrose(const Matrix& a, double tol_rel) {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return Matrix::Zero(a.cols(), a.rows());
    const double cut = tol_rel * sv(0);
    RealVector inv = RealVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

namespace {

Matrix psd_apply(const Matrix& a, double tol_rel, double (*f)(double, double),
                 const char* fn) {
    if (!is_hermitian(a, 1e-8))
        throw std::invalid_argument(std::string(fn) + ": matrix not hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0);
    const RealVector& ev = es.eigenvalues();
    const double lmax = ev.cwiseAbs().maxCoeff();
    RealVector g(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        g(i) = f(ev(i), tol_rel * lmax);
    return es.eigenvectors() * g.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Matrix psd_sqrt(const Matrix& a, double tol_rel) {
    return psd_apply(
        a, tol_rel,
        [](double x, double cut) { return x > cut ? std::sqrt(x) : 0.0; },
        "psd_sqrt");
}

Matrix psd_pinv(const Matrix& a, double tol_rel) {
    return psd_apply(
        a, tol_rel,
        [](double x, double cut) { return x > cut ? 1.0 / x : 0.0; },
        "psd_pinv");
}

Matrix psd_pinv_sqrt(const Matrix& a, double tol_rel) {
    return psd_apply(
        a, tol_rel,
        [](double x, double cut) { return x > cut ? 1.0 / std::sqrt(x) : 0.0; },
        "psd_pinv_sqrt");
}

double trace_norm(const Matrix& a) {
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues().sum();
}

// ------------------------------ random sampling ----------------------------

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Matrix ginibre(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    return g;
}

Matrix haar_random_unitary(int d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("haar_random_unitary: d must be >= 1");
    Matrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        Complex rii = r(i, i);
        q.col(i) *= (std::abs(rii) > 0) ? rii / std::abs(rii) : Complex(1, 0);
    }
    return q;
}

Vector random_pure_state(int d, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector psi(d);
    for (int i = 0; i < d; ++i) psi(i) = Complex(gauss(rng), gauss(rng));
    psi.normalize();
    return psi;
}

Matrix random_density(int d, Rng& rng) {
    Matrix g = ginibre(d, d, rng);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

Matrix random_hermitian(int d, Rng& rng) {
    Matrix g = ginibre(d, d, rng);
    return (g + g.adjoint()) / 2.0;
}

Matrix twirl_check(const Matrix& x, int n_samples, Rng& rng) {
    if (x.rows() != x.cols())
        throw std::invalid_argument("twirl_check: operator not square");
    if (n_samples < 1)
        throw std::invalid_argument("twirl_check: need at least one sample");
    const int d = static_cast<int>(x.rows());
    Matrix acc = Matrix::Zero(d, d);
    for (int s = 0; s < n_samples; ++s) {
        Matrix u = haar_random_unitary(d, rng);
        acc += u * x * u.adjoint();
    }
    return acc / static_cast<double>(n_samples);
}

}  // namespace qtomo
