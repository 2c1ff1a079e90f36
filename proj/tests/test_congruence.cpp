#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_support.hpp"

using namespace systolic;

namespace {

RingInteger qint(long v) { return RingInteger(Rational(v), FieldDescriptor::rationals()); }

} // namespace

TEST_CASE("membership in Gamma(alpha)") {
    SpinElement s = systest::spin_fixture_q();
    DiagonalForm f = s.form();
    SpinElement one = SpinElement::certify(CliffordElement::one(f));

    CHECK(in_gamma_alpha(one, qint(7)));
    CHECK(in_gamma_alpha(s, qint(2)));
    CHECK_FALSE(in_gamma_alpha(s, qint(3)));
    CHECK_THROWS_AS(in_gamma_alpha(s, RingInteger::zero(f.field())), precondition_error);

    // rational (non-integral) spin elements are rejected, not rescaled
    FieldDescriptor q = f.field();
    CliffordElement half(f);
    half.add_term(0, FieldElement(Rational(5, 4), q));
    half.add_term(0b011, FieldElement(Rational(3, 4), q));
    half.add_term(0b101, FieldElement(Rational(0), q));
    SpinElement half_spin = SpinElement::certify(half); // (5/4)^2 - (3/4)^2 - 0 = 1
    CHECK_THROWS_AS(in_gamma_alpha(half_spin, qint(2)), precondition_error);
}

TEST_CASE("membership in Gamma_tau(alpha)") {
    SpinElement s = systest::spin_fixture_q();
    DiagonalForm f = s.form();
    FieldDescriptor q = f.field();
    SpinElement one = SpinElement::certify(CliffordElement::one(f));

    CongruenceLevel level4(qint(4), qint(3)); // 3^2 = 9 = 1 mod 4
    CHECK(in_gamma_tau_alpha(one, level4));
    // the fixture has s_R = 3 = tau, but coefficients 2 are not divisible by 4
    CHECK_FALSE(in_gamma_tau_alpha(s, level4));

    // s' = 7 + 8 e01 + 4 e12: norm 49 - 64 - 0 + 16 = 1, s'_R = 3 mod 4,
    // all blade coefficients divisible by 4 -> tau-coset member
    CliffordElement sp(f);
    sp.add_term(0, FieldElement(Rational(7), q));
    sp.add_term(0b011, FieldElement(Rational(8), q));
    sp.add_term(0b110, FieldElement(Rational(4), q));
    SpinElement tau_member = SpinElement::certify(sp);
    CHECK_FALSE(in_gamma_alpha(tau_member, qint(4)));
    CHECK(in_gamma_tau_alpha(tau_member, level4));

    CongruenceLevel no_tau(qint(4));
    CHECK_THROWS_AS(in_gamma_tau_alpha(s, no_tau), precondition_error);
    CHECK_THROWS_AS(CongruenceLevel(qint(4), qint(2)), precondition_error); // 4 = 3 != 0 mod 4
}

TEST_CASE("real-part residue lemma") {
    SpinElement s = systest::spin_fixture_q();
    DiagonalForm f = s.form();
    SpinElement one = SpinElement::certify(CliffordElement::one(f));

    CHECK(realpart_residue(one, qint(2)) == qint(0));
    CHECK(realpart_residue(s, qint(2)) == qint(1));
    CHECK_THROWS_AS(realpart_residue(s, qint(3)), precondition_error);
}

TEST_CASE("shifted real-part residue (complement lemma)") {
    SpinElement s = systest::spin_fixture_q(); // s - s_R in 2Q, so s is a valid base
    SpinElement r = s;                         // r in Gamma(2)
    SpinElement product = s * r;
    // (s^2)_R = 17, base 3: 2(17-3)/4 = 7
    CHECK(realpart_residue_shifted(product.real_part(), s.real_part(), qint(2)) == qint(7));
}

TEST_CASE("real-part residue never fails on constructed members of Gamma(2)") {
    SpinElement s = systest::spin_fixture_q();
    SpinElement g = s;
    for (int i = 0; i < 6; ++i) {
        g = g * s;
        if (in_gamma_alpha(g, qint(2))) {
            CHECK_NOTHROW(realpart_residue(g, qint(2)));
        }
    }
}

TEST_CASE("group closure and normality at desk scale") {
    SpinElement s = systest::spin_fixture_q();
    DiagonalForm f = s.form();
    FieldDescriptor q = f.field();

    std::vector<SpinElement> gamma2{s, s.inverse(), s * s, s * s * s};
    for (const auto& g : gamma2) REQUIRE(in_gamma_alpha(g, qint(2)));
    for (const auto& g : gamma2)
        for (const auto& h : gamma2) {
            REQUIRE(in_gamma_alpha(g * h, qint(2)));
            REQUIRE(in_gamma_alpha(g.inverse(), qint(2)));
        }

    // Gamma_tau(alpha) is normal: conjugation by ambient group elements stays inside
    CliffordElement e12 = CliffordElement::basis(f, 0b110, FieldElement::one(q));
    std::vector<SpinElement> ambient{SpinElement::certify(e12), s,
                                     SpinElement::certify(e12) * s};
    CongruenceLevel level(qint(2), qint(1));
    for (const auto& g : ambient)
        for (const auto& member : gamma2) {
            REQUIRE(in_gamma_tau_alpha(g * member * g.inverse(), level));
        }
}

TEST_CASE("displacement lower bounds") {
    FieldDescriptor k2 = FieldDescriptor::quadratic(2);

    CHECK(realpart_lower_bound(qint(1), 1) == Rational(-1, 2));
    CHECK(realpart_lower_bound(qint(2), 1) == 1);
    CHECK(realpart_lower_bound(RingInteger(Rational(3), Rational(1), k2), 2) == Rational(41, 8));

    CHECK(shifted_lower_bound(qint(2), Rational(0), 1) == 2);
    // N(15)^2 = 50625 in a quadratic field: 50625/8 - 26 = 50417/8
    CHECK(shifted_lower_bound(qint(15), Rational(26), 1) == Rational(225, 2) - 26);
    FieldDescriptor k5 = FieldDescriptor::quadratic(5);
    CHECK(shifted_lower_bound(RingInteger(Rational(15), Rational(0), k5), Rational(26), 2) ==
          Rational(50417, 8));
    CHECK(shifted_lower_bound(qint(1), Rational(1), 2) == Rational(-7, 8));

    CHECK_THROWS_AS(realpart_lower_bound(qint(2), 3), precondition_error);
    CHECK_THROWS_AS(shifted_lower_bound(qint(2), Rational(-1), 1), precondition_error);
}

TEST_CASE("length lower bound") {
    CHECK(length_lower_bound(1.0) == 0.0);
    CHECK(length_lower_bound(0.3) == 0.0);
    CHECK(std::abs(length_lower_bound(3.0) - 2.0 * std::log(3.0 + 2.0 * std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(length_lower_bound(std::cosh(1.0)) - 2.0) < 1e-12);
    CHECK_THROWS_AS(length_lower_bound(-0.1), precondition_error);
}

TEST_CASE("index upper bound") {
    CHECK(index_upper_bound(qint(1), 5) == 1);
    CHECK(index_upper_bound(qint(15), 2) == 3375);
    CHECK(index_upper_bound(qint(15), 3) == 11390625);
    CHECK_THROWS_AS(index_upper_bound(qint(15), 1), precondition_error);
}

TEST_CASE("kissing lower bound") {
    CHECK(kissing_lower_bound(1, 10, 2) == 5);
    CHECK(kissing_lower_bound(7, 100, 2) == 350);
    CHECK(kissing_lower_bound(13, 97, 1) == 13 * 97);
    CHECK(kissing_lower_bound(3, 10, 4) == 7); // floor(30/4)
    CHECK_THROWS_AS(kissing_lower_bound(0, 10, 2), precondition_error);
    CHECK_THROWS_AS(kissing_lower_bound(1, -3, 2), precondition_error);
}

TEST_CASE("monotonicity of the real-part bound in the ideal norm") {
    Rational prev = realpart_lower_bound(qint(1), 1);
    for (long a = 2; a <= 40; ++a) {
        Rational cur = realpart_lower_bound(qint(a), 1);
        REQUIRE(cur > prev);
        prev = cur;
    }
}

TEST_CASE("enumerated loxodromic members of Gamma(alpha) satisfy the real-part bound") {
    // quaternionic slice over Q: w + x e01 + y e02 + z e12, w^2-x^2-y^2+z^2 = 1.
    // The bound holds non-strictly and is sharp: s = -7 + 8 e02 + 4 e12 lies
    // in Gamma(4) with residue zeta = -1 and |s_R| = 7 = N(4)^2/2 - 1.
    auto spins = systest::enumerate_spin_quaternions_q(20);
    REQUIRE(spins.size() > 100);
    long checked = 0;
    bool equality_witnessed = false;
    for (const auto& s : spins) {
        Rational w = s.real_part().a();
        bool loxodromic = rational_abs(w) > 1;
        for (long a : {2L, 4L}) {
            if (!in_gamma_alpha(s, qint(a)) || !loxodromic) continue;
            ++checked;
            Rational bound = realpart_lower_bound(qint(a), 1);
            REQUIRE(Rational(rational_abs(w)) >= bound);
            if (a == 4 && Rational(rational_abs(w)) == bound) equality_witnessed = true;
        }
    }
    REQUIRE(checked > 0);
    REQUIRE(equality_witnessed);
}
