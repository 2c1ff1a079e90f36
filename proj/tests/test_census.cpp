#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "test_support.hpp"
#include "systolic/serialize.hpp"

using namespace systolic;

namespace {

FieldDescriptor QI = FieldDescriptor::quadratic(-1);

// independent census oracle built on the quadruple brute force: distinct
// normalized loxodromic traces with |t|^2 <= N, with realization counts
std::map<std::pair<long long, long long>, long long> census_oracle(long long dd, long long H,
                                                                   long long N) {
    std::map<std::pair<long long, long long>, long long> out;
    int denom = ((-dd) % 4 + 4) % 4 == 1 ? 2 : 1;
    for (const auto& m : systest::brute_force_sl2(dd, H)) {
        long long tu = m.au + m.du, tv = m.av + m.dv;
        if (tv == 0 && std::llabs(tu) <= 2 * denom) continue; // not loxodromic
        if (tu * tu + tv * tv * dd > N * denom * denom) continue;
        if (tv < 0 || (tv == 0 && tu < 0)) { tu = -tu; tv = -tv; } // normalize
        out[{tu, tv}] += 1;
    }
    return out;
}

} // namespace

TEST_CASE("lattice point counts") {
    CHECK(lattice_count(QI, Rational(0)) == 1);
    CHECK(lattice_count(QI, Rational(1)) == 5);
    CHECK(lattice_count(QI, Rational(2)) == 13);
    CHECK(lattice_count(QI, Rational(5)) == 81);

    // Q(sqrt(-3)): six units on the unit circle plus the origin
    FieldDescriptor q3 = FieldDescriptor::quadratic(-3);
    CHECK(lattice_count(q3, Rational(1)) == 7);

    CHECK_THROWS_AS(lattice_count(FieldDescriptor::quadratic(2), Rational(1)), precondition_error);

    // Gauss circle: |count/R^2 - pi| <= 4/R
    for (long R : {10L, 20L, 40L}) {
        double ratio = lattice_count(QI, Rational(R)).get_d() / double(R * R);
        REQUIRE(std::abs(ratio - std::numbers::pi) <= 4.0 / double(R));
    }

    // exhaustive cross-check against a plain double loop
    for (long R = 0; R <= 12; ++R) {
        long count = 0;
        for (long x = -R; x <= R; ++x)
            for (long y = -R; y <= R; ++y)
                if (x * x + y * y <= R * R) ++count;
        REQUIRE(lattice_count(QI, Rational(R)) == count);
    }
}

TEST_CASE("trace power polynomials") {
    FieldDescriptor q = FieldDescriptor::rationals();
    FieldElement x(Rational(3), q);
    CHECK(trace_power_polynomial(x, 0) == FieldElement(Rational(2), q));
    CHECK(trace_power_polynomial(x, 1) == x);
    CHECK(trace_power_polynomial(x, 2) == FieldElement(Rational(7), q));   // 3^2-2
    CHECK(trace_power_polynomial(x, 3) == FieldElement(Rational(18), q));  // 27-9

    // T(z^k) = p_k(T(z)) numerically
    std::complex<double> z(1.7, 0.6);
    for (int k = 2; k <= 5; ++k) {
        std::complex<double> t = z + 1.0 / z;
        std::complex<double> zk = std::pow(z, k);
        std::complex<double> want = zk + 1.0 / zk;
        // evaluate p_k at T(z) via the recurrence in doubles
        std::complex<double> prev = 2.0, cur = t;
        for (int i = 1; i < k; ++i) {
            std::complex<double> next = t * cur - prev;
            prev = cur;
            cur = next;
        }
        REQUIRE(std::abs(cur - want) < 1e-9);
    }
}

TEST_CASE("primitive trace filter") {
    auto nt = [&](long u, long v) {
        return NormalizedTrace::normalize(FieldElement(Rational(u), Rational(v), QI));
    };
    CHECK_FALSE(primitive_trace_filter(nt(7, 0), 2)); // 7 = p_2(3)
    CHECK_FALSE(primitive_trace_filter(nt(-7, 0), 2)); // normalization folds the sign
    CHECK(primitive_trace_filter(nt(1, 1), 3));
    CHECK_FALSE(primitive_trace_filter(nt(-2, 2), 2)); // -2+2i = p_2(1+i)
    // over Z[i], 3 is p_2(i) up to sign: the trace-3 class is the square of
    // the trace-i class ([[0,-1],[1,i]]^2 = [[-1,-i],[i,-2]], trace -3)
    CHECK_FALSE(primitive_trace_filter(nt(3, 0), 3));
    // over Z[sqrt(-2)] there is no such root and 3 is primitive
    FieldDescriptor q2 = FieldDescriptor::quadratic(-2);
    CHECK(primitive_trace_filter(NormalizedTrace::normalize(FieldElement(Rational(3), q2)), 3));
    CHECK_THROWS_AS(primitive_trace_filter(nt(2, 0), 2), precondition_error);
    CHECK_THROWS_AS(primitive_trace_filter(nt(7, 0), 1), precondition_error);
}

TEST_CASE("census examples") {
    // N = 1, H = 2: the only loxodromic normalized trace with |t|^2 <= 1 is i
    CensusQuery q1 = CensusQuery::make(QI, Rational(1), 0.0, 2.0 * std::numbers::pi, 2, false);
    CensusReport r1 = trace_census(q1);
    REQUIRE(r1.tau_hat == 1);
    REQUIRE(r1.records.size() == 1);
    CHECK(r1.records[0].trace == FieldElement(Rational(0), Rational(1), QI));
    CHECK(std::abs(r1.records[0].holonomy_reduced - std::numbers::pi) < 1e-12);
    CHECK(std::abs(r1.records[0].length - 2.0 * std::log((1.0 + std::sqrt(5.0)) / 2.0)) < 1e-12);
    CHECK(r1.records[0].realization_count >= 1);
    CHECK(r1.records[0].axis_class_count >= 1);
    CHECK(r1.mu_defined);

    // N = 0: trace 0 is elliptic
    CensusQuery q0 = CensusQuery::make(QI, Rational(0), 0.0, 2.0 * std::numbers::pi, 2, false);
    CHECK(trace_census(q0).tau_hat == 0);
}

TEST_CASE("census agrees with the quadruple brute-force oracle") {
    // d = 3 takes the half-integer-basis coordinate path end to end
    for (long long dd : {1, 3}) {
        FieldDescriptor field = FieldDescriptor::quadratic(-dd);
        for (long long H : {2, 3}) {
            for (long long N : {1, 9, 25}) {
                auto oracle = census_oracle(dd, H, N);
                CensusQuery q = CensusQuery::make(field, Rational(static_cast<long>(N)), 0.0,
                                                  2.0 * std::numbers::pi, H, false);
                CensusReport rep = trace_census(q);
                REQUIRE(rep.tau_hat == static_cast<long long>(oracle.size()));
                for (const auto& rec : rep.records) {
                    auto co = RingInteger(rec.trace).coordinates();
                    auto it = oracle.find({co.u.get_si(), co.v.get_si()});
                    REQUIRE(it != oracle.end());
                    REQUIRE(rec.realization_count == it->second);
                }
            }
        }
    }
}

TEST_CASE("census surrogate soundness and record self-consistency") {
    CensusQuery q = CensusQuery::make(QI, Rational(25), 0.0, 2.0 * std::numbers::pi, 4, false);
    CensusReport rep = trace_census(q);
    REQUIRE(rep.tau_hat > 0);

    // every normalized trace is a lattice point in the norm-N disk
    CHECK(rep.tau_hat <= lattice_count_norm(QI, Rational(25)).get_si());

    long long sigma = 0;
    for (const auto& rec : rep.records) {
        NormalizedTrace t = NormalizedTrace::normalize(rec.trace);
        auto [lhs, rhs] = trace_identity_sides(t, rec.length);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
        REQUIRE(rec.holonomy_reduced >= 0.0);
        REQUIRE(rec.holonomy_reduced <= 2.0 * std::numbers::pi);
        REQUIRE(rec.axis_class_count <= rec.realization_count);
        if (rec.primitive) sigma += rec.axis_class_count;
    }
    CHECK(sigma == rep.sigma_hat);
    if (rep.tau_hat > 0) {
        CHECK(rep.mu_hat == to_rational(rep.sigma_hat, rep.tau_hat));
    }
}

TEST_CASE("imprimitive traces are flagged via the matrix-level oracle") {
    // delta = [[1,1],[1,2]] has trace 3; delta^2 = [[2,3],[3,5]] has trace 7,
    // and 7 = p_2(3) must be flagged imprimitive once both are in range.
    // Over Z[i] trace 3 is itself a square (of the trace-i class), so both
    // real records are imprimitive while trace i stays primitive.
    CensusQuery q = CensusQuery::make(QI, Rational(49), 0.0, 2.0 * std::numbers::pi, 5, false);
    CensusReport rep = trace_census(q);
    bool saw3 = false, saw7 = false, sawi = false;
    for (const auto& rec : rep.records) {
        if (rec.trace == FieldElement(Rational(3), Rational(0), QI)) {
            saw3 = true;
            CHECK_FALSE(rec.primitive);
        }
        if (rec.trace == FieldElement(Rational(7), Rational(0), QI)) {
            saw7 = true;
            CHECK_FALSE(rec.primitive);
        }
        if (rec.trace == FieldElement(Rational(0), Rational(1), QI)) {
            sawi = true;
            CHECK(rec.primitive);
        }
    }
    REQUIRE(saw3);
    REQUIRE(saw7);
    REQUIRE(sawi);

    // primitive_only drops the imprimitive records
    CensusQuery qp = CensusQuery::make(QI, Rational(49), 0.0, 2.0 * std::numbers::pi, 5, true);
    CensusReport repp = trace_census(qp);
    for (const auto& rec : repp.records) {
        REQUIRE(rec.trace != FieldElement(Rational(7), Rational(0), QI));
        REQUIRE(rec.primitive);
    }
}

TEST_CASE("census determinism across worker counts") {
    CensusQuery q = CensusQuery::make(QI, Rational(16), 0.0, 2.0 * std::numbers::pi, 4, false);
    std::string csv1 = census_csv(trace_census(q, 1));
    std::string csv4 = census_csv(trace_census(q, 4));
    std::string csv3 = census_csv(trace_census(q, 3));
    REQUIRE(csv1 == csv4);
    REQUIRE(csv1 == csv3);
    REQUIRE(csv1.find("trace,") == 0);
}

TEST_CASE("holonomy interval filtering") {
    // restrict to a window around pi: the trace-i record survives, real traces drop
    CensusQuery q = CensusQuery::make(QI, Rational(25), 3.0, 3.3, 3, false);
    CensusReport rep = trace_census(q);
    for (const auto& rec : rep.records) {
        REQUIRE(rec.holonomy_reduced >= 3.0);
        REQUIRE(rec.holonomy_reduced <= 3.3);
    }
    bool has_i = false;
    for (const auto& rec : rep.records)
        if (rec.trace == FieldElement(Rational(0), Rational(1), QI)) has_i = true;
    CHECK(has_i);
}

TEST_CASE("growth table") {
    std::vector<Rational> norms{Rational(4), Rational(9), Rational(16)};
    auto rows = growth_table(QI, norms, 0.0, 2.0 * std::numbers::pi, 3);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].tau_hat >= rows[i - 1].tau_hat);
    std::string csv = growth_csv(rows);
    CHECK(csv.find("max_norm,tau_hat,sigma_hat_surrogate,mu_hat,n_over_log_n,mu_hat_log_n_over_n\n") == 0);

    // the shared-pool rows equal independent per-N census aggregates
    for (std::size_t i = 0; i < norms.size(); ++i) {
        CensusQuery q = CensusQuery::make(QI, norms[i], 0.0, 2.0 * std::numbers::pi, 3, false);
        CensusReport rep = trace_census(q);
        REQUIRE(rows[i].tau_hat == rep.tau_hat);
        REQUIRE(rows[i].sigma_hat == rep.sigma_hat);
        REQUIRE(rows[i].mu_defined == rep.mu_defined);
        if (rep.mu_defined) REQUIRE(rows[i].mu_hat == rep.mu_hat);
    }

    CHECK_THROWS_AS(growth_table(QI, {Rational(9), Rational(4)}, 0.0, 1.0, 2), precondition_error);
}
