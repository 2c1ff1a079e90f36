#pragma once

// Trace census over arithmetic Kleinian groups at bounded height: distinct
// normalized traces tau_hat, the axis-class multiplicity surrogate sigma_hat,
// mean multiplicity mu_hat, lattice-point counts, and growth tables.
//
// The multiplicity count sigma ranges over primitive conjugacy classes;
// exact conjugacy enumeration in an infinite group is out of reach, so
// sigma_hat counts axis classes (distinct boundary fixed-point pairs) among
// enumerated elements -- a lower bound for sigma at any height, labeled a
// surrogate in all outputs.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "systolic/errors.hpp"
#include "systolic/kleinian.hpp"
#include "systolic/quadfield.hpp"

namespace systolic {

namespace detail {

// largest v >= 0 with v^2 <= x, exact
inline Integer floor_sqrt_rational(const Rational& x) {
    require(x >= 0, "floor_sqrt_rational: negative argument");
    Integer approx = integer_isqrt(x.get_num() / x.get_den());
    while (Rational((approx + 1) * (approx + 1)) <= x) ++approx;
    while (Rational(approx * approx) > x) --approx;
    return approx;
}

inline Integer count_with_parity(const Integer& max_abs, int parity) {
    Integer m = max_abs;
    if (parity == 0) return 2 * (m / 2) + 1;
    return 2 * ((m + 1) / 2);
}

} // namespace detail

// #{x in O_k : |x|^2 <= norm_bound}, exact
inline Integer lattice_count_norm(const FieldDescriptor& field, const Rational& norm_bound) {
    require(field.is_imaginary(), "lattice_count: imaginary quadratic field expected");
    if (norm_bound < 0) return 0;
    Integer dd = to_integer(-field.d());
    int denom = field.half_basis() ? 2 : 1;
    Rational S = norm_bound * denom * denom; // u^2 + |d| v^2 <= S
    Integer v_max = detail::floor_sqrt_rational(S / Rational(dd));
    Integer count = 0;
    for (Integer v = -v_max; v <= v_max; ++v) {
        Rational rem = S - Rational(v * v * dd);
        Integer u_max = detail::floor_sqrt_rational(rem);
        if (denom == 1)
            count += 2 * u_max + 1;
        else
            count += detail::count_with_parity(u_max, static_cast<int>(Integer(abs(v % 2)).get_si()));
    }
    return count;
}

// #{x in O_k : |x| <= R}
inline Integer lattice_count(const FieldDescriptor& field, const Rational& radius) {
    require(radius >= 0, "lattice_count: radius must be nonnegative");
    return lattice_count_norm(field, radius * radius);
}

// Chebyshev-like trace-power family: p_0 = 2, p_1 = x, p_{k+1} = x p_k - p_{k-1};
// T(z^k) = p_k(T(z)).
inline FieldElement trace_power_polynomial(const FieldElement& x, int k) {
    require(k >= 0, "trace_power_polynomial: negative power");
    const FieldDescriptor& f = x.field();
    FieldElement prev(Rational(2), f); // p_0
    if (k == 0) return prev;
    FieldElement cur = x; // p_1
    for (int i = 1; i < k; ++i) {
        FieldElement next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// false iff t is the trace of a proper power: some integral loxodromic t'
// with p_k(t') = +-t for k in [2, max_k]. The candidate search radius
// (|t|+2)^(1/k) + 2 is evaluated in floating point and enlarged, the
// equality test is exact.
inline bool primitive_trace_filter(const NormalizedTrace& t, int max_k) {
    require(classify(t) == ElementType::loxodromic, "primitive_trace_filter: trace is not loxodromic");
    require(max_k >= 2, "primitive_trace_filter: max_k must be at least 2");
    const FieldDescriptor& field = t.value().field();
    double abs_t = std::sqrt(t.norm().get_d());
    for (int k = 2; k <= max_k; ++k) {
        double radius = std::pow(abs_t + 2.0, 1.0 / k) + 2.0;
        Rational norm_cap = to_rational(static_cast<long long>(std::ceil(radius * radius)) + 1);
        int denom = field.half_basis() ? 2 : 1;
        long long box = static_cast<long long>(std::ceil(denom * radius)) + 2;
        for (long long u = -box; u <= box; ++u) {
            long long v_lo = field.degree() == 1 ? 0 : -box;
            long long v_hi = field.degree() == 1 ? 0 : box;
            for (long long v = v_lo; v <= v_hi; ++v) {
                if (denom == 2 && ((u - v) & 1)) continue;
                Rational a = to_rational(u, denom), b = to_rational(v, denom);
                FieldElement cand = field.degree() == 1 ? FieldElement(a, field)
                                                        : FieldElement(a, b, field);
                if (complex_norm(cand) > norm_cap) continue;
                NormalizedTrace nc = NormalizedTrace::normalize(cand);
                if (classify(nc) != ElementType::loxodromic) continue;
                FieldElement p = trace_power_polynomial(cand, k);
                if (p == t.value() || p == -t.value()) return false;
            }
        }
    }
    return true;
}

struct CensusQuery {
    FieldDescriptor field = FieldDescriptor::rationals();
    Rational max_norm;    // |t|^2 <= N, exact
    double hol_lo = 0.0;  // reduced-holonomy interval, subset of [0, 2pi]
    double hol_hi = 2.0 * std::numbers::pi;
    long long height = 1;
    bool primitive_only = false;

    static CensusQuery make(FieldDescriptor field, Rational max_norm, double hol_lo, double hol_hi,
                            long long height, bool primitive_only) {
        require(field.is_imaginary(), "CensusQuery: imaginary quadratic field expected");
        require(max_norm >= 0, "CensusQuery: norm bound must be nonnegative");
        require(0.0 <= hol_lo && hol_lo <= hol_hi && hol_hi <= 2.0 * std::numbers::pi + 1e-12,
                "CensusQuery: holonomy interval must satisfy 0 <= lo <= hi <= 2pi");
        require(height >= 1, "CensusQuery: height must be at least 1");
        return CensusQuery{field, std::move(max_norm), hol_lo, hol_hi, height, primitive_only};
    }
};

struct CensusRecord {
    FieldElement trace = FieldElement::zero(FieldDescriptor::rationals()); // normalized
    Rational trace_norm;
    double length = 0;
    double holonomy = 0;         // 2 Arg(lambda), unreduced
    double holonomy_reduced = 0; // [0, 2pi)
    long long realization_count = 0;
    long long axis_class_count = 0;
    bool primitive = true;
};

struct CensusReport {
    CensusQuery query;
    std::vector<CensusRecord> records;
    long long tau_hat = 0;  // distinct realized normalized traces
    long long sigma_hat = 0; // axis classes summed over primitive records (surrogate)
    Rational mu_hat;         // sigma_hat / tau_hat when defined
    bool mu_defined = false;
};

namespace detail {

struct TraceBucket {
    long long realizations = 0;
    std::set<std::string> axes;
};

// canonical key for the unordered boundary fixed-point pair: the projective
// class of (c, d-a, -b), pivot-normalized
inline std::string axis_class_key(const MoebiusElement& g) {
    FieldElement t0 = g.c().value();
    FieldElement t1 = g.d().value() - g.a().value();
    FieldElement t2 = -g.b().value();
    FieldElement* triple[3] = {&t0, &t1, &t2};
    int pivot = -1;
    for (int i = 0; i < 3 && pivot < 0; ++i)
        if (!triple[i]->is_zero()) pivot = i;
    ensure(pivot >= 0, "axis_class_key: loxodromic element with zero axis polynomial");
    std::string key = std::to_string(pivot);
    for (int i = 0; i < 3; ++i) {
        if (i == pivot) continue;
        FieldElement q = *triple[i] / *triple[pivot];
        key += "|" + to_string(q.a()) + "|" + to_string(q.b());
    }
    return key;
}

} // namespace detail

namespace detail {

// Enumeration and exact aggregation shared by trace_census and growth_table:
// all loxodromic trace records with |t|^2 <= max_norm and reduced holonomy in
// the interval, before primitivity flags and per-norm aggregation.
inline std::vector<CensusRecord> census_record_pool(const CensusQuery& q, int workers) {
    require(workers >= 1, "trace_census: worker count must be positive");
    detail::ImagRing ring(q.field, q.height);

    long long denom = ring.denom();
    // cheap exact pre-filter in coordinates: loxodromic and |t|^2 <= N
    auto survives = [&](const detail::CoordMatrix& m) {
        detail::QuadCoord tc = ring.add(m.a, m.d);
        if (tc.v == 0 && std::llabs(tc.u) <= 2 * denom) return false; // |t| <= 2 real
        return to_rational(ring.norm(tc)) <= q.max_norm;
    };

    std::vector<std::vector<detail::CoordMatrix>> slices(workers);
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                detail::enumerate_sl2_coords(
                    ring, q.height, std::nullopt,
                    [&](const detail::CoordMatrix& m) {
                        if (survives(m)) slices[w].push_back(m);
                    },
                    w, workers);
            });
        }
        for (auto& th : pool) th.join();
    }

    // exact processing of the survivors; QuadCoord keys give a canonical order
    std::map<detail::QuadCoord, detail::TraceBucket> buckets;
    for (const auto& slice : slices) {
        for (const auto& m : slice) {
            MoebiusElement g(ring.lift(m.a), ring.lift(m.b), ring.lift(m.c), ring.lift(m.d));
            NormalizedTrace t = g.trace();
            ensure(classify(t) == ElementType::loxodromic, "trace_census: pre-filter admitted a non-loxodromic element");
            GeodesicInvariant inv = length_holonomy(t);
            double hol = inv.holonomy_reduced();
            if (hol < q.hol_lo || hol > q.hol_hi) continue;
            auto co = RingInteger(t.value()).coordinates();
            detail::QuadCoord key{co.u.get_si(), co.v.get_si()};
            auto& bucket = buckets[key];
            bucket.realizations += 1;
            bucket.axes.insert(detail::axis_class_key(g));
        }
    }

    std::vector<CensusRecord> pool;
    for (const auto& [key, bucket] : buckets) {
        RingInteger t = ring.lift(key);
        NormalizedTrace nt = NormalizedTrace::normalize(t.value());
        GeodesicInvariant inv = length_holonomy(nt);
        CensusRecord rec;
        rec.trace = nt.value();
        rec.trace_norm = nt.norm();
        rec.length = inv.length;
        rec.holonomy = inv.holonomy;
        rec.holonomy_reduced = inv.holonomy_reduced();
        rec.realization_count = bucket.realizations;
        rec.axis_class_count = static_cast<long long>(bucket.axes.size());
        pool.push_back(std::move(rec));
    }
    return pool;
}

// Restrict the pool to |t|^2 <= max_norm, flag primitivity against the
// restricted report's own shortest length, and aggregate.
inline CensusReport finalize_census(const std::vector<CensusRecord>& pool, const CensusQuery& q) {
    CensusReport report;
    report.query = q;
    double min_length = 0;
    for (const auto& rec : pool) {
        if (rec.trace_norm > q.max_norm) continue;
        report.records.push_back(rec);
        if (report.records.size() == 1 || rec.length < min_length) min_length = rec.length;
    }

    for (auto& rec : report.records) {
        // powers beyond ceil(l / l_min) cannot fold a shorter enumerated geodesic
        int max_k = static_cast<int>(std::ceil(rec.length / min_length - 1e-9));
        rec.primitive = max_k < 2 ||
                        primitive_trace_filter(NormalizedTrace::normalize(rec.trace), max_k);
    }

    if (q.primitive_only) {
        std::erase_if(report.records, [](const CensusRecord& r) { return !r.primitive; });
    }

    std::sort(report.records.begin(), report.records.end(),
              [](const CensusRecord& x, const CensusRecord& y) {
                  if (x.trace_norm != y.trace_norm) return x.trace_norm < y.trace_norm;
                  if (x.trace.a() != y.trace.a()) return x.trace.a() < y.trace.a();
                  return x.trace.b() < y.trace.b();
              });

    report.tau_hat = static_cast<long long>(report.records.size());
    for (const auto& rec : report.records)
        if (rec.primitive) report.sigma_hat += rec.axis_class_count;
    if (report.tau_hat > 0) {
        report.mu_hat = to_rational(report.sigma_hat, report.tau_hat);
        report.mu_defined = true;
    }
    return report;
}

} // namespace detail

// Full census pass. Enumeration splits the (a, b) outer loop across workers;
// aggregation merges per-worker counts into canonical maps, so the report is
// byte-identical for any worker count.
inline CensusReport trace_census(const CensusQuery& q, int workers = 1) {
    return detail::finalize_census(detail::census_record_pool(q, workers), q);
}

struct GrowthRow {
    Rational max_norm;
    long long tau_hat = 0;
    long long sigma_hat = 0;
    Rational mu_hat;
    bool mu_defined = false;
    double n_over_log_n = 0;  // N / log N
    double mu_scaled = 0;     // mu_hat * log N / N
};

inline std::vector<GrowthRow> growth_table(const FieldDescriptor& field,
                                           const std::vector<Rational>& norm_list,
                                           double hol_lo, double hol_hi, long long height,
                                           bool primitive_only = false, int workers = 1) {
    require(!norm_list.empty(), "growth_table: empty norm list");
    for (std::size_t i = 1; i < norm_list.size(); ++i)
        require(norm_list[i - 1] < norm_list[i], "growth_table: norm list must be strictly increasing");
    // one enumeration pass at the largest norm; each row is the exact
    // restriction of the shared record pool to its own bound
    CensusQuery widest =
        CensusQuery::make(field, norm_list.back(), hol_lo, hol_hi, height, primitive_only);
    std::vector<CensusRecord> pool = detail::census_record_pool(widest, workers);
    std::vector<GrowthRow> rows;
    for (const Rational& n : norm_list) {
        CensusQuery q = CensusQuery::make(field, n, hol_lo, hol_hi, height, primitive_only);
        CensusReport rep = detail::finalize_census(pool, q);
        GrowthRow row;
        row.max_norm = n;
        row.tau_hat = rep.tau_hat;
        row.sigma_hat = rep.sigma_hat;
        row.mu_hat = rep.mu_hat;
        row.mu_defined = rep.mu_defined;
        double nd = n.get_d();
        row.n_over_log_n = nd / std::log(nd);
        row.mu_scaled = rep.mu_defined ? rep.mu_hat.get_d() * std::log(nd) / nd : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace systolic
