#include <doctest.h>

#include "qtomo/linops.hpp"
#include "test_helpers.hpp"

using namespace qtomo;
using qtomo::test::kron_oracle;
using qtomo::test::max_abs_diff;

namespace {

Matrix bell_rank_one(int d) {  // |I>><<I|
    Matrix id = Matrix::Identity(d, d);
    Vector v = vectorize(id);
    return v * v.adjoint();
}

}  // namespace

TEST_CASE("vectorize uses row-major double-ket ordering") {
    Vector v = vectorize(pauli(1));
    REQUIRE(v.size() == 4);
    CHECK(v(0) == Complex(0, 0));
    CHECK(v(1) == Complex(1, 0));
    CHECK(v(2) == Complex(1, 0));
    CHECK(v(3) == Complex(0, 0));

    Rng rng(11);
    Matrix x = ginibre(3, 5, rng);
    CHECK(max_abs_diff(devectorize(vectorize(x), 3, 5), x) == 0.0);

    Matrix y(2, 3);
    y << 1, 2, 3, 4, 5, 6;
    Vector vy = vectorize(y);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 3; ++n)
            CHECK(vy(m * 3 + n) == y(m, n));
}

TEST_CASE("hs_inner matches the vectorized inner product") {
    Rng rng(21);
    Matrix a = ginibre(4, 4, rng), b = ginibre(4, 4, rng);
    Complex direct = (a.adjoint() * b).trace();
    CHECK(std::abs(hs_inner(a, b) - direct) < 1e-13);
    CHECK(std::abs(hs_inner(a, b) - vectorize(a).dot(vectorize(b))) < 1e-13);
    CHECK(std::abs(hs_inner(pauli(3), pauli(3)) - Complex(2, 0)) < 1e-15);
    CHECK(std::abs(hs_inner(pauli(1), pauli(2))) < 1e-15);
    CHECK_THROWS_AS(hs_inner(Matrix::Zero(2, 2), Matrix::Zero(3, 3)),
                    std::invalid_argument);
}

TEST_CASE("tensor agrees with the index-formula oracle") {
    Rng rng(31);
    Matrix a = ginibre(2, 3, rng), b = ginibre(4, 2, rng);
    CHECK(max_abs_diff(tensor(a, b), kron_oracle(a, b)) == 0.0);

    Matrix c = ginibre(2, 2, rng);
    CHECK(max_abs_diff(tensor({a, b, c}), kron_oracle(kron_oracle(a, b), c)) <
          1e-12);
}

TEST_CASE("(A x B)|C>> = |A C B^T>>") {
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix a = ginibre(3, 3, rng), b = ginibre(4, 4, rng),
               c = ginibre(3, 4, rng);
        Vector lhs = tensor(a, b) * vectorize(c);
        Vector rhs = vectorize(a * c * b.transpose());
        CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("partial_trace on elementary cases") {
    Rng rng(51);
    Matrix a = ginibre(3, 3, rng), b = ginibre(4, 4, rng);
    SubsystemShape sh({3, 4});
    Matrix ab = tensor(a, b);
    CHECK(max_abs_diff(partial_trace(ab, sh, {1}), b.trace() * a) < 1e-12);
    CHECK(max_abs_diff(partial_trace(ab, sh, {0}), a.trace() * b) < 1e-12);
    Matrix full = partial_trace(ab, sh, {0, 1});
    CHECK(std::abs(full(0, 0) - ab.trace()) < 1e-12);

    // Tr_1[|I>><<I|] = Tr_2[|I>><<I|] = I
    Matrix bell = bell_rank_one(2);
    SubsystemShape q2({2, 2});
    CHECK(max_abs_diff(partial_trace(bell, q2, {0}), Matrix::Identity(2, 2)) <
          1e-14);
    CHECK(max_abs_diff(partial_trace(bell, q2, {1}), Matrix::Identity(2, 2)) <
          1e-14);
}

TEST_CASE("partial_trace of double-ket dyads") {
    Rng rng(61);
    for (int d : {2, 3}) {
        Matrix a = ginibre(d, d, rng), b = ginibre(d, d, rng);
        Matrix dyad = vectorize(a) * vectorize(b).adjoint();
        SubsystemShape sh({d, d});
        // Tr over the first factor gives A^T conj(B), over the second A B^dag.
        CHECK(max_abs_diff(partial_trace(dyad, sh, {0}),
                           a.transpose() * b.conjugate()) < 1e-12);
        CHECK(max_abs_diff(partial_trace(dyad, sh, {1}), a * b.adjoint()) <
              1e-12);
    }
}

TEST_CASE("partial_trace over middle factor of three") {
    Rng rng(71);
    Matrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng),
           c = ginibre(2, 2, rng);
    Matrix abc = tensor({a, b, c});
    SubsystemShape sh({2, 3, 2});
    CHECK(max_abs_diff(partial_trace(abc, sh, {1}),
                       b.trace() * tensor(a, c)) < 1e-12);
}

TEST_CASE("partial_transpose") {
    Rng rng(81);
    Matrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng);
    SubsystemShape sh({2, 3});
    CHECK(max_abs_diff(partial_transpose(tensor(a, b), sh, {0}),
                       tensor(a.transpose(), b)) < 1e-13);
    CHECK(max_abs_diff(partial_transpose(tensor(a, b), sh, {1}),
                       tensor(a, b.transpose())) < 1e-13);

    Matrix x = ginibre(6, 6, rng);
    Matrix twice = partial_transpose(partial_transpose(x, sh, {1}), sh, {1});
    CHECK(max_abs_diff(twice, x) == 0.0);
    Matrix both = partial_transpose(x, sh, {0, 1});
    CHECK(max_abs_diff(both, x.transpose()) == 0.0);

    // the maximally entangled state has one negative PT eigenvalue -1/2
    Matrix bell = bell_rank_one(2) / 2.0;
    Matrix pt = partial_transpose(bell, SubsystemShape({2, 2}), {1});
    Eigen::SelfAdjointEigenSolver<Matrix> es(pt);
    RealVector ev = es.eigenvalues();
    CHECK(std::abs(ev(0) + 0.5) < 1e-12);
    for (int i = 1; i < 4; ++i) CHECK(std::abs(ev(i) - 0.5) < 1e-12);
}

TEST_CASE("permute_subsystems") {
    Rng rng(91);
    Matrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng),
           c = ginibre(4, 4, rng);
    SubsystemShape sh({2, 3});
    CHECK(max_abs_diff(permute_subsystems(tensor(a, b), sh, {1, 0}),
                       tensor(b, a)) == 0.0);

    SubsystemShape sh3({2, 3, 4});
    Matrix abc = tensor({a, b, c});
    CHECK(max_abs_diff(permute_subsystems(abc, sh3, {2, 0, 1}),
                       tensor({c, a, b})) < 1e-14);

    // inverse permutation restores the operator
    Matrix x = ginibre(24, 24, rng);
    Matrix y = permute_subsystems(x, sh3, {2, 0, 1});
    Matrix z = permute_subsystems(y, SubsystemShape({4, 2, 3}), {1, 2, 0});
    CHECK(max_abs_diff(z, x) == 0.0);

    CHECK_THROWS_AS(permute_subsystems(x, sh3, {0, 0, 1}),
                    std::invalid_argument);
}

namespace {

// Choi operator (out x in ordering) built directly from Kraus operators.
Matrix choi_oracle(const std::vector<Matrix>& kraus) {
    const auto rows = kraus.front().rows() * kraus.front().cols();
    Matrix r = Matrix::Zero(rows, rows);
    for (const auto& k : kraus) r += vectorize(k) * vectorize(k).adjoint();
    return r;
}

}  // namespace

TEST_CASE("link_product with no common wires is the tensor product") {
    Rng rng(101);
    Matrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng);
    auto res = link_product(a, SubsystemShape({2}, {0}), b,
                            SubsystemShape({3}, {1}));
    CHECK(max_abs_diff(res.op, tensor(a, b)) < 1e-13);
    REQUIRE(res.shape.labels == std::vector<int>({0, 1}));
}

TEST_CASE("link_product composes channels like Kraus composition") {
    Rng rng(111);
    const int d = 2;
    // two random CPTP maps from Stinespring blocks
    auto random_kraus = [&](int n) {
        Matrix v = ginibre(d * n, d, rng);
        Eigen::HouseholderQR<Matrix> qr(v);
        Matrix q = Matrix(qr.householderQ()).leftCols(d);
        std::vector<Matrix> ks;
        for (int k = 0; k < n; ++k) ks.push_back(q.middleRows(k * d, d));
        return ks;
    };
    auto k1 = random_kraus(2), k2 = random_kraus(3);

    Matrix r1 = choi_oracle(k1);  // wires: out=1, in=0
    Matrix r2 = choi_oracle(k2);  // wires: out=2, in=1
    auto linked = link_product(r2, SubsystemShape({d, d}, {2, 1}), r1,
                               SubsystemShape({d, d}, {1, 0}));

    std::vector<Matrix> composed;
    for (const auto& x : k2)
        for (const auto& y : k1) composed.push_back(x * y);
    CHECK(max_abs_diff(linked.op, choi_oracle(composed)) < 1e-12);
    REQUIRE(linked.shape.labels == std::vector<int>({2, 0}));

    // commutativity up to wire reordering
    auto flipped = link_product(r1, SubsystemShape({d, d}, {1, 0}), r2,
                                SubsystemShape({d, d}, {2, 1}));
    REQUIRE(flipped.shape.labels == std::vector<int>({0, 2}));
    Matrix reordered =
        permute_subsystems(flipped.op, flipped.shape, {1, 0});
    CHECK(max_abs_diff(reordered, linked.op) < 1e-12);
}

TEST_CASE("link_product applies a channel to a state") {
    Rng rng(121);
    const int d = 3;
    Matrix v = ginibre(d * 2, d, rng);
    Eigen::HouseholderQR<Matrix> qr(v);
    Matrix q = Matrix(qr.householderQ()).leftCols(d);
    std::vector<Matrix> ks = {q.topRows(d), q.bottomRows(d)};
    Matrix rho = random_density(d, rng);

    Matrix rc = choi_oracle(ks);
    auto out = link_product(rc, SubsystemShape({d, d}, {1, 0}), rho,
                            SubsystemShape({d}, {0}));
    Matrix expect = Matrix::Zero(d, d);
    for (const auto& k : ks) expect += k * rho * k.adjoint();
    CHECK(max_abs_diff(out.op, expect) < 1e-12);

    // full contraction yields the scalar Tr[a^T b]
    Matrix a = ginibre(d, d, rng), b = ginibre(d, d, rng);
    auto s = link_product(a, SubsystemShape({d}, {0}), b,
                          SubsystemShape({d}, {0}));
    REQUIRE(s.op.rows() == 1);
    CHECK(std::abs(s.op(0, 0) - (a.transpose() * b).trace()) < 1e-12);

    CHECK_THROWS_AS(link_product(a, SubsystemShape({d}, {0}), rho,
                                 SubsystemShape({d + 1}, {0})),
                    std::invalid_argument);
}

TEST_CASE("moore_penrose satisfies the Penrose axioms") {
    Rng rng(131);
    Matrix a = ginibre(6, 3, rng) * ginibre(3, 4, rng);  // rank <= 3
    Matrix p = moore_penrose(a);
    CHECK(max_abs_diff(a * p * a, a) < 1e-10);
    CHECK(max_abs_diff(p * a * p, p) < 1e-10);
    CHECK(max_abs_diff(Matrix(a * p), Matrix((a * p).adjoint())) < 1e-10);
    CHECK(max_abs_diff(Matrix(p * a), Matrix((p * a).adjoint())) < 1e-10);

    Matrix id3 = Matrix::Identity(3, 3);
    CHECK(max_abs_diff(moore_penrose(id3), id3) < 1e-13);
}

TEST_CASE("psd functional calculus") {
    Rng rng(141);
    Matrix g = ginibre(4, 2, rng);
    Matrix a = g * g.adjoint();  // PSD, rank 2
    Matrix s = psd_sqrt(a);
    CHECK(max_abs_diff(s * s, a) < 1e-10);
    Matrix pi = psd_pinv(a);
    CHECK(max_abs_diff(pi, moore_penrose(a)) < 1e-9);
    Matrix ps = psd_pinv_sqrt(a);
    CHECK(max_abs_diff(ps * ps, pi) < 1e-9);
    CHECK_THROWS_AS(psd_sqrt(ginibre(3, 3, rng)), std::invalid_argument);

    Matrix h = random_hermitian(5, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    CHECK(std::abs(trace_norm(h) - es.eigenvalues().cwiseAbs().sum()) < 1e-10);
}

TEST_CASE("haar_random_unitary is unitary and twirls to the identity") {
    Rng rng(151);
    for (int d : {2, 3, 5}) {
        Matrix u = haar_random_unitary(d, rng);
        CHECK(is_unitary(u, 1e-12));
    }

    Rng rng2(12345);
    Matrix avg = twirl_check(pauli(3), 4000, rng2);
    CHECK(avg.cwiseAbs().maxCoeff() < 0.05);

    Rng rng3(777);
    Matrix x = ginibre(3, 3, rng3);
    Matrix avg3 = twirl_check(x, 6000, rng3);
    Matrix expect = x.trace() / 3.0 * Matrix::Identity(3, 3);
    CHECK((avg3 - expect).cwiseAbs().maxCoeff() < 0.08);
}

TEST_CASE("mix_seed derives distinct deterministic streams") {
    CHECK(mix_seed(7, 0) == mix_seed(7, 0));
    CHECK(mix_seed(7, 0) != mix_seed(7, 1));
    CHECK(mix_seed(7, 0) != mix_seed(8, 0));
}
