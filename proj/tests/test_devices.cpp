#include <doctest.h>

#include "qtomo/devices.hpp"
#include "test_helpers.hpp"

using namespace qtomo;
using qtomo::test::max_abs_diff;

namespace {

std::vector<Matrix> random_cptp_kraus(int d, int n, Rng& rng) {
    Matrix v = ginibre(d * n, d, rng);
    Eigen::HouseholderQR<Matrix> qr(v);
    Matrix q = Matrix(qr.householderQ()).leftCols(d);
    std::vector<Matrix> ks;
    for (int k = 0; k < n; ++k) ks.push_back(q.middleRows(k * d, d));
    return ks;
}

}  // namespace

TEST_CASE("identity and unitary channels") {
    Matrix id2 = Matrix::Identity(2, 2);
    ChoiOperator idc = identity_channel(2);
    CHECK(max_abs_diff(idc.r, Matrix(vectorize(id2) * vectorize(id2).adjoint())) ==
          0.0);

    Rng rng(401);
    Matrix rho = random_density(2, rng);
    CHECK(max_abs_diff(apply_channel(idc, rho), rho) < 1e-13);

    Matrix u = haar_random_unitary(3, rng);
    ChoiOperator uc = unitary_channel(u);
    Matrix sigma = random_density(3, rng);
    CHECK(max_abs_diff(apply_channel(uc, sigma), Matrix(u * sigma * u.adjoint())) <
          1e-12);
    CHECK_THROWS_AS(unitary_channel(Matrix(2.0 * id2)), std::invalid_argument);
}

TEST_CASE("depolarizing channel Choi operator") {
    for (int d : {2, 3}) {
        const double p = 0.3;
        ChoiOperator c = depolarizing_channel(p, d);
        Matrix id = Matrix::Identity(d, d);
        Matrix bell = vectorize(id) * vectorize(id).adjoint();
        Matrix expect = (1.0 - p) * bell +
                        (p / d) * Matrix::Identity(d * d, d * d);
        CHECK(max_abs_diff(c.r, expect) < 1e-12);

        Rng rng(411);
        Matrix rho = random_density(d, rng);
        Matrix out = apply_channel(c, rho);
        CHECK(max_abs_diff(out, Matrix((1.0 - p) * rho + (p / d) * id)) <
              1e-12);

        ChannelCheck chk = validate_channel(c);
        CHECK(chk.completely_positive);
        CHECK(chk.trace_preserving);
        CHECK(chk.unital);
    }
}

TEST_CASE("channel composition through the link product") {
    Rng rng(421);
    auto k1 = random_cptp_kraus(2, 2, rng);
    auto k2 = random_cptp_kraus(2, 3, rng);
    ChoiOperator c1 = choi_from_kraus(k1), c2 = choi_from_kraus(k2);
    ChoiOperator both = compose(c2, c1);

    std::vector<Matrix> composed;
    for (const auto& a : k2)
        for (const auto& b : k1) composed.push_back(a * b);
    CHECK(max_abs_diff(both.r, choi_from_kraus(composed).r) < 1e-12);
    CHECK(validate_channel(both).trace_preserving);
}

TEST_CASE("validate_channel flags the transpose map") {
    // Choi of the transpose map is the swap operator, which is not PSD
    ChoiOperator t;
    t.d_out = t.d_in = 2;
    Matrix id = Matrix::Identity(2, 2);
    t.r = partial_transpose(Matrix(vectorize(id) * vectorize(id).adjoint()),
                            SubsystemShape({2, 2}), {1});
    ChannelCheck chk = validate_channel(t);
    CHECK_FALSE(chk.completely_positive);
    CHECK(std::abs(chk.cp_min_eigenvalue + 1.0) < 1e-12);
    CHECK(chk.trace_preserving);
}

TEST_CASE("choi JSON round-trip") {
    Rng rng(431);
    ChoiOperator c = choi_from_kraus(random_cptp_kraus(2, 2, rng));
    ChoiOperator back = choi_from_json(Json::parse(choi_to_json(c).dump()));
    CHECK(back.d_out == c.d_out);
    CHECK(back.d_in == c.d_in);
    CHECK(max_abs_diff(back.r, c.r) == 0.0);
}

TEST_CASE("maximally entangled state is faithful with condition number 1") {
    for (int d : {2, 3}) {
        FaithfulState t = max_entangled_faithful(d);
        FaithfulCheck chk = is_faithful(t);
        CHECK(chk.faithful);
        CHECK(std::abs(chk.min_singular_value - 1.0 / d) < 1e-12);
        CHECK(std::abs(chk.condition_number - 1.0) < 1e-10);

        // the induced map is P -> P^T / d
        Rng rng(441);
        Matrix p = ginibre(d, d, rng);
        Matrix big = tensor(p, Matrix::Identity(d, d));
        Matrix mapped =
            partial_trace(Matrix(big * t.t), SubsystemShape({d, d}), {0});
        CHECK(max_abs_diff(mapped, Matrix(p.transpose() / d)) < 1e-13);
    }
}

TEST_CASE("product states are not faithful") {
    Rng rng(451);
    FaithfulState t;
    t.d_probe = t.d_ref = 2;
    t.t = tensor(random_density(2, rng), random_density(2, rng));
    CHECK_FALSE(is_faithful(t).faithful);

    FaithfulState g;
    g.d_probe = g.d_ref = 2;
    g.t = random_density(4, rng);
    CHECK(is_faithful(g).faithful);  // generic bipartite states are faithful
}

TEST_CASE("channel_output_state agrees with the Kraus computation") {
    Rng rng(461);
    auto ks = random_cptp_kraus(2, 2, rng);
    ChoiOperator c = choi_from_kraus(ks);
    FaithfulState t;
    t.d_probe = t.d_ref = 2;
    t.t = random_density(4, rng);

    Matrix expect = Matrix::Zero(4, 4);
    for (const auto& k : ks) {
        Matrix big = tensor(k, Matrix::Identity(2, 2));
        expect += big * t.t * big.adjoint();
    }
    CHECK(max_abs_diff(channel_output_state(c, t), expect) < 1e-12);

    // with T maximally entangled the output is R_C / d
    FaithfulState me = max_entangled_faithful(2);
    CHECK(max_abs_diff(channel_output_state(c, me), Matrix(c.r / 2.0)) <
          1e-12);
}

TEST_CASE("process tomography from exact statistics") {
    Rng rng(471);
    Povm joint_povm = povm_tensor(pauli_povm(), pauli_povm());
    REQUIRE(is_info_complete(joint_povm));

    for (int trial = 0; trial < 2; ++trial) {
        ChoiOperator truth = choi_from_kraus(random_cptp_kraus(2, 2, rng));
        FaithfulState t;
        if (trial == 0) {
            t = max_entangled_faithful(2);
        } else {
            t.d_probe = t.d_ref = 2;
            t.t = random_density(4, rng);
            REQUIRE(is_faithful(t).faithful);
        }
        Matrix rho_out = channel_output_state(truth, t);
        RealVector freq = probabilities(rho_out, joint_povm);
        ChoiOperator rec = process_tomography(joint_povm, t, 2, freq);
        CHECK(max_abs_diff(rec.r, truth.r) < 1e-9);
    }
}

TEST_CASE("povm tomography from exact statistics") {
    Rng rng(481);
    Povm unknown = pauli_povm();
    Povm reference = random_ic_povm(2, 6, rng);

    for (int trial = 0; trial < 2; ++trial) {
        FaithfulState t;
        if (trial == 0) {
            t = max_entangled_faithful(2);
        } else {
            t.d_probe = t.d_ref = 2;
            t.t = random_density(4, rng);
            REQUIRE(is_faithful(t).faithful);
        }
        Eigen::MatrixXd joint = joint_probabilities(unknown, reference, t);
        Povm rec = povm_tomography(reference, t, joint);
        REQUIRE(rec.num_outcomes() == unknown.num_outcomes());
        for (std::size_t i = 0; i < unknown.elements.size(); ++i)
            CHECK(max_abs_diff(rec.elements[i], unknown.elements[i]) < 1e-9);
    }
}
