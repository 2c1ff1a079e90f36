#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_support.hpp"

using namespace systolic;

namespace {

FieldDescriptor Q = FieldDescriptor::rationals();

RingInteger qint(long v) { return RingInteger(Rational(v), Q); }

SalemQuartic degenerate(long x0) {
    return SalemQuartic(qint(x0), qint(1), RingInteger(Rational(x0 * x0 - 1), Q));
}

// independent oracle: binary powering of (A + B sqrt(D)) on coordinate pairs
std::pair<FieldElement, FieldElement> power_oracle(const SalemQuartic& sq, unsigned exp) {
    const FieldDescriptor& k = sq.field();
    FieldElement D = sq.D().value();
    auto mul = [&](std::pair<FieldElement, FieldElement> x,
                   std::pair<FieldElement, FieldElement> y) {
        return std::pair<FieldElement, FieldElement>{x.first * y.first + x.second * y.second * D,
                                                     x.first * y.second + x.second * y.first};
    };
    std::pair<FieldElement, FieldElement> acc{FieldElement::one(k), FieldElement::zero(k)};
    std::pair<FieldElement, FieldElement> base{sq.t().value(), sq.u().value()};
    while (exp > 0) {
        if (exp & 1) acc = mul(acc, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return acc;
}

SalemQuartic fixture_sqrt2_m0() { // t = 5 + 3 sqrt(2), sigma(t)^2 = 0.574 > 1/2
    FieldDescriptor k = FieldDescriptor::quadratic(2);
    RingInteger t(Rational(5), Rational(3), k);
    RingInteger D(t.value() * t.value() - FieldElement::one(k));
    return SalemQuartic(t, RingInteger::one(k), D);
}

SalemQuartic fixture_sqrt13_m1() { // t = (3 + sqrt(13))/2, half-integer basis
    FieldDescriptor k = FieldDescriptor::quadratic(13);
    RingInteger t(Rational(3, 2), Rational(1, 2), k);
    RingInteger D(t.value() * t.value() - FieldElement::one(k));
    return SalemQuartic(t, RingInteger::one(k), D);
}

SalemQuartic fixture_sqrt2_m2() { // t = 2 + sqrt(2)
    FieldDescriptor k = FieldDescriptor::quadratic(2);
    RingInteger t(Rational(2), Rational(1), k);
    RingInteger D(t.value() * t.value() - FieldElement::one(k));
    return SalemQuartic(t, RingInteger::one(k), D);
}

} // namespace

TEST_CASE("salem quartic construction guards") {
    FieldDescriptor k = FieldDescriptor::quadratic(2);

    CHECK_NOTHROW(degenerate(2));
    CHECK_NOTHROW(fixture_sqrt2_m2());

    // t = 1 is the parabolic/elliptic boundary
    CHECK_THROWS_AS(degenerate(1), precondition_error);
    // unit relation violated
    CHECK_THROWS_AS(SalemQuartic(qint(2), qint(1), qint(2)), precondition_error);
    // |sigma(t)| >= 1 is not a Salem input
    RingInteger bad_t(Rational(3), Rational(1), k);
    CHECK_THROWS_AS(
        SalemQuartic(bad_t, RingInteger::one(k),
                     RingInteger(bad_t.value() * bad_t.value() - FieldElement::one(k))),
        precondition_error);
    // imaginary base field rejected
    FieldDescriptor ki = FieldDescriptor::quadratic(-1);
    CHECK_THROWS_AS(SalemQuartic(RingInteger(Rational(2), ki), RingInteger::one(ki),
                                 RingInteger(Rational(3), ki)),
                    precondition_error);
}

TEST_CASE("salem extraction from spin elements") {
    SpinElement s = systest::spin_fixture_q(); // s_R = 3
    SalemQuartic sq = salem_from_spin(s);
    CHECK(sq.t() == qint(3));
    CHECK(sq.u() == qint(1));
    CHECK(sq.D() == qint(8));

    // -s has real part -3; extraction is projective
    SpinElement neg = SpinElement::certify(-s.element());
    SalemQuartic sq2 = salem_from_spin(neg);
    CHECK(sq2.t() == qint(3));

    SalemQuartic sqk = salem_from_spin(systest::spin_fixture_sqrt2());
    FieldDescriptor k = FieldDescriptor::quadratic(2);
    CHECK(sqk.t() == RingInteger(Rational(2), Rational(1), k));
    CHECK(sqk.D() == RingInteger(Rational(5), Rational(4), k));

    // |s_R| = 1 is not loxodromic
    SpinElement one = SpinElement::certify(CliffordElement::one(s.form()));
    CHECK_THROWS_AS(salem_from_spin(one), precondition_error);
}

TEST_CASE("salem power recurrence examples") {
    SalemQuartic sq = degenerate(2); // lambda = 2 + sqrt(3)
    auto [t0, u0] = salem_power(sq, 0);
    CHECK(t0 == qint(2));
    CHECK(u0 == qint(1));
    auto [t1, u1] = salem_power(sq, 1);
    CHECK(t1 == qint(7));
    CHECK(u1 == qint(4));
    auto [t2, u2] = salem_power(sq, 2);
    CHECK(t2 == qint(26));
    CHECK(u2 == qint(15));
}

TEST_CASE("salem powers: unit invariant and oracle equivalence, n <= 50") {
    std::vector<SalemQuartic> inputs{degenerate(2), degenerate(10), fixture_sqrt2_m0(),
                                     fixture_sqrt13_m1(), fixture_sqrt2_m2()};
    for (const auto& sq : inputs) {
        const FieldDescriptor& k = sq.field();
        for (unsigned n = 0; n <= 50; n += (n < 8 ? 1 : 7)) {
            auto [tn, un] = salem_power(sq, n);
            REQUIRE(tn.value() * tn.value() - un.value() * un.value() * sq.D().value() ==
                    FieldElement::one(k));
            auto oracle = power_oracle(sq, n + 1);
            REQUIRE(tn.value() == oracle.first);
            REQUIRE(un.value() == oracle.second);
        }
    }
}

TEST_CASE("salem power asymptotics") {
    // |t_n / (2^n x0^(n+1)) - 1| <= 2n/x0 and |u_n / (2^n x0^n) - 1| <= 2n/x0
    for (long x0 : {10L, 100L, 1000L}) {
        SalemQuartic sq = degenerate(x0);
        for (unsigned n = 1; n <= 8; ++n) {
            auto [tn, un] = salem_power(sq, n);
            Rational denom_t = rational_pow(Rational(2), n) * rational_pow(Rational(x0), n + 1);
            Rational denom_u = rational_pow(Rational(2), n) * rational_pow(Rational(x0), n);
            Rational bound(2 * static_cast<long>(n), x0);
            bound.canonicalize();
            REQUIRE(rational_abs(tn.value().a() / denom_t - 1) <= bound);
            REQUIRE(rational_abs(un.value().a() / denom_u - 1) <= bound);
        }
    }
}

TEST_CASE("rotation power selection") {
    CHECK(choose_rotation_power(degenerate(2)) == 0);
    CHECK(choose_rotation_power(fixture_sqrt2_m0()) == 0);
    CHECK(choose_rotation_power(fixture_sqrt13_m1()) == 1);
    // t = 2 + sqrt(2): sigma(t0)^2 = 6-4 sqrt2 = 0.34, sigma(t1)^2 = 249-176 sqrt2 = 0.099,
    // sigma(t2)^2 = 11094-7844 sqrt2 = 0.909 -> m = 2
    CHECK(choose_rotation_power(fixture_sqrt2_m2()) == 2);
}

TEST_CASE("angle covering of the rotation-power selection") {
    // every nu in (0,pi) off the exceptional rational multiples of pi has
    // cos(2 k nu) > 0 for some k in {1,2,3}; grid points avoid the
    // exceptional set {pi/4, 3pi/8, 5pi/8, 3pi/4} by construction
    const int grid = 10000;
    for (int i = 1; i <= grid; ++i) {
        double nu = std::numbers::pi * i / (grid + 1);
        bool covered = false;
        for (int k = 1; k <= 3 && !covered; ++k) covered = std::cos(2.0 * k * nu) > 0.0;
        REQUIRE(covered);
    }
}

TEST_CASE("level selection") {
    LevelCertificate cert = level_from_salem(degenerate(2));
    CHECK(cert.l == 2);
    CHECK(cert.m == 0);
    CHECK(cert.alpha == qint(15));
    CHECK(cert.t_l == qint(26));
    // independent cube oracle: the sqrt(D)-coefficient of lambda^3 is 15
    auto cube = power_oracle(degenerate(2), 3);
    CHECK(cube.second == FieldElement(Rational(15), Q));

    LevelCertificate c0 = level_from_salem(fixture_sqrt2_m0());
    FieldDescriptor k2 = FieldDescriptor::quadratic(2);
    CHECK(c0.l == 2);
    CHECK(c0.alpha == RingInteger(Rational(171), Rational(120), k2));

    LevelCertificate c1 = level_from_salem(fixture_sqrt13_m1());
    FieldDescriptor k13 = FieldDescriptor::quadratic(13);
    CHECK(c1.l == 5);
    CHECK(c1.alpha == RingInteger(Rational(867), Rational(240), k13));

    LevelCertificate c2 = level_from_salem(fixture_sqrt2_m2());
    CHECK(c2.l == 8);
    CHECK(c2.m == 2);
    CHECK(c2.alpha == RingInteger(Rational(44375), Rational(31376), k2));

    // the conjugate window 1 <= |sigma(alpha_l)| <= 5 is recorded and holds
    for (const LevelCertificate* c : {&c0, &c1, &c2}) {
        REQUIRE(c->checks.size() == 2);
        for (const auto& check : c->checks) REQUIRE(check.holds);
    }
}

TEST_CASE("surface systole certification") {
    LevelCertificate cert = certify_surface_systole(degenerate(2), 1);
    CHECK(cert.certified);
    REQUIRE(cert.checks.size() == 2);
    // (i) 225/2 - 1 >= 26, (ii) 225/2 >= 52, sides recorded exactly
    CHECK(cert.checks[0].lhs == "223/2");
    CHECK(cert.checks[0].rhs == "26");
    CHECK(cert.checks[0].holds);
    CHECK(cert.checks[1].lhs == "225/2");
    CHECK(cert.checks[1].rhs == "52");
    CHECK(cert.checks[1].holds);

    CHECK(certify_surface_systole(fixture_sqrt2_m0(), 2).certified);
    CHECK(certify_surface_systole(fixture_sqrt13_m1(), 2).certified);
    CHECK(certify_surface_systole(fixture_sqrt2_m2(), 2).certified);

    CHECK_THROWS_AS(certify_surface_systole(degenerate(2), 3), precondition_error);
}

TEST_CASE("certified ratio trend alpha_l / t^(2(l+1)/3) -> 2^(2m+2)") {
    // degenerate family, m = 0: |alpha/t^2 - 4| = 1/t^2 <= 5/t
    for (long x0 : {10L, 100L, 1000L}) {
        LevelCertificate cert = level_from_salem(degenerate(x0));
        Rational ratio = cert.alpha.value().a() / Rational(x0 * x0);
        REQUIRE(rational_abs(ratio - 4) <= Rational(5, x0));
    }
    // quadratic fixtures: relative deviation |alpha/(C t^p) - 1| <= 5/t,
    // decided exactly as |alpha - C t^p| <= 5 C t^(p-1)
    struct Case { SalemQuartic sq; int m; };
    std::vector<Case> cases{{fixture_sqrt2_m0(), 0}, {fixture_sqrt13_m1(), 1},
                            {fixture_sqrt2_m2(), 2}};
    for (const auto& c : cases) {
        LevelCertificate cert = level_from_salem(c.sq);
        const FieldDescriptor& k = c.sq.field();
        int p = 2 * (c.m + 1);
        FieldElement tp = FieldElement::one(k);
        for (int i = 0; i < p; ++i) tp *= c.sq.t().value();
        FieldElement C(Rational(1L << (2 * c.m + 2)), k);
        FieldElement dev = abs_identity(cert.alpha.value() - C * tp);
        FieldElement cap = FieldElement(Rational(5), k) * C * abs_identity(tp / c.sq.t().value());
        REQUIRE(compare_identity(dev, cap) <= 0);
    }
}
