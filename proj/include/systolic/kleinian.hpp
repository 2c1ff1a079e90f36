#pragma once

// Dimension-3 toolkit for arithmetic Kleinian groups over an imaginary
// quadratic field: trace normalization and classification, eigenvalues,
// length/holonomy, the trace-length identity, the congruence trace lemma,
// the h-function positivity analysis, square-systole certification, and
// bounded-height enumeration of SL2 over the ring of integers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "systolic/errors.hpp"
#include "systolic/quadfield.hpp"

namespace systolic {

enum class ElementType { elliptic, parabolic_or_identity, loxodromic };

inline std::string to_string(ElementType t) {
    switch (t) {
        case ElementType::elliptic: return "elliptic";
        case ElementType::parabolic_or_identity: return "parabolic_or_identity";
        case ElementType::loxodromic: return "loxodromic";
    }
    return "?";
}

// complex embedding of a + b sqrt(d), d < 0 (or a rational scalar)
inline std::complex<double> complex_embedding(const FieldElement& x) {
    if (x.field().degree() == 1) return {x.a().get_d(), 0.0};
    require(x.field().is_imaginary(), "complex_embedding: element of a real quadratic field");
    double root = std::sqrt(static_cast<double>(-x.field().d()));
    return {x.a().get_d(), x.b().get_d() * root};
}

// Trace with the sign mu in {+1,-1} chosen so that the complex embedding has
// argument in [0,pi), or is a nonnegative real. Decided exactly from the
// coordinate signs.
class NormalizedTrace {
public:
    static NormalizedTrace normalize(const FieldElement& raw) {
        require(raw.field().degree() == 1 || raw.field().is_imaginary(),
                "NormalizedTrace: trace must lie in Q or an imaginary quadratic field");
        int mu;
        if (sign(raw.b()) != 0)
            mu = sign(raw.b()) > 0 ? 1 : -1;
        else
            mu = sign(raw.a()) >= 0 ? 1 : -1;
        return NormalizedTrace(mu > 0 ? raw : -raw, mu);
    }

    const FieldElement& value() const { return value_; }
    int mu() const { return mu_; }
    bool is_integral() const { return is_ring_integer(value_); }
    Rational norm() const { return complex_norm(value_); } // |t|^2, exact
    std::complex<double> embedding() const { return complex_embedding(value_); }

    bool operator==(const NormalizedTrace& rhs) const { return value_ == rhs.value_; }

private:
    NormalizedTrace(FieldElement value, int mu) : value_(std::move(value)), mu_(mu) {}

    FieldElement value_;
    int mu_;
};

// real t: |t| < 2 elliptic, |t| = 2 parabolic-or-identity, |t| > 2
// loxodromic; every non-real trace is loxodromic. Exact.
inline ElementType classify(const NormalizedTrace& t) {
    if (sign(t.value().b()) != 0) return ElementType::loxodromic;
    Rational a = rational_abs(t.value().a());
    if (a < 2) return ElementType::elliptic;
    if (a == 2) return ElementType::parabolic_or_identity;
    return ElementType::loxodromic;
}

// the root of x^2 - t x + 1 with |lambda| >= 1; ties (elliptic case) take the
// branch with nonnegative imaginary part
inline std::complex<double> eigenvalue_large(const NormalizedTrace& t) {
    require(classify(t) != ElementType::parabolic_or_identity,
            "eigenvalue_large: parabolic input has no eigenvalue gap");
    std::complex<double> z = t.embedding();
    std::complex<double> s = std::sqrt(z * z - 4.0);
    if (std::abs(z + s) < std::abs(z - s)) s = -s;
    return (z + s) / 2.0;
}

struct GeodesicInvariant {
    double length;                  // 2 log|lambda| > 0
    double holonomy;                // 2 Arg(lambda), unreduced, in (-2pi, 2pi)
    std::complex<double> eigenvalue;
    ElementType type;

    double holonomy_reduced() const { // census bucketing convention, [0, 2pi)
        double h = holonomy;
        if (h < 0) h += 4.0 * std::numbers::pi;
        double r = std::fmod(h, 2.0 * std::numbers::pi);
        return r;
    }
};

inline GeodesicInvariant length_holonomy(const NormalizedTrace& t) {
    require(classify(t) == ElementType::loxodromic, "length_holonomy: element is not loxodromic");
    std::complex<double> lambda = eigenvalue_large(t);
    return GeodesicInvariant{2.0 * std::log(std::abs(lambda)), 2.0 * std::arg(lambda), lambda,
                             ElementType::loxodromic};
}

// both sides of 4 cosh(l/2) = |tr - 2| + |tr + 2|
inline std::pair<double, double> trace_identity_sides(const NormalizedTrace& t, double ell) {
    require(ell >= 0, "trace_identity_sides: length must be nonnegative");
    std::complex<double> z = t.embedding();
    double lhs = 4.0 * std::cosh(ell / 2.0);
    double rhs = std::abs(z - 2.0) + std::abs(z + 2.0);
    return {lhs, rhs};
}

// both sides of tan(Arg(T(z))) = (|z|-|z|^-1)/(|z|+|z|^-1) tan(Arg(z)),
// T(z) = z + 1/z, valid for |z| > 1 away from the imaginary axis and the
// branch cut of Arg
inline std::pair<double, double> arg_tan_relation(const std::complex<double>& z) {
    double r = std::abs(z);
    require(r > 1.0, "arg_tan_relation: |z| must exceed 1");
    require(z.real() != 0.0, "arg_tan_relation: |Arg z| = pi/2 is excluded");
    std::complex<double> T = z + 1.0 / z;
    require(!(T.imag() == 0.0 && T.real() <= 0.0), "arg_tan_relation: T(z) on the branch cut");
    double lhs = std::tan(std::arg(T));
    double rhs = (r - 1.0 / r) / (r + 1.0 / r) * std::tan(std::arg(z));
    return {lhs, rhs};
}

// Unimodular 2x2 matrix over the ring of integers of Q or an imaginary
// quadratic field; det = 1 is verified exactly at construction.
class MoebiusElement {
public:
    MoebiusElement(RingInteger a, RingInteger b, RingInteger c, RingInteger d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        const FieldDescriptor& k = a_.field();
        require(k.degree() == 1 || k.is_imaginary(),
                "MoebiusElement: entries must lie in Q or an imaginary quadratic field");
        require(b_.field() == k && c_.field() == k && d_.field() == k, "MoebiusElement: mixed fields");
        FieldElement det = a_.value() * d_.value() - b_.value() * c_.value();
        require(det == FieldElement::one(k), "MoebiusElement: determinant is not 1");
    }

    const RingInteger& a() const { return a_; }
    const RingInteger& b() const { return b_; }
    const RingInteger& c() const { return c_; }
    const RingInteger& d() const { return d_; }
    const FieldDescriptor& field() const { return a_.field(); }

    FieldElement raw_trace() const { return a_.value() + d_.value(); }
    NormalizedTrace trace() const { return NormalizedTrace::normalize(raw_trace()); }

    MoebiusElement inverse() const { return MoebiusElement(d_, -b_, -c_, a_); }

    // max absolute integer coordinate over all entries (half-basis doubled)
    Integer height() const {
        Integer h = 0;
        for (const RingInteger* e : {&a_, &b_, &c_, &d_}) {
            auto co = e->coordinates();
            h = std::max(h, Integer(abs(co.u)));
            h = std::max(h, Integer(abs(co.v)));
        }
        return h;
    }

    bool operator==(const MoebiusElement& rhs) const {
        return a_ == rhs.a_ && b_ == rhs.b_ && c_ == rhs.c_ && d_ == rhs.d_;
    }

private:
    RingInteger a_, b_, c_, d_;
};

// Congruence trace lemma: gamma = 1 mod I entry-wise implies
// tr(gamma) = 2 mod I^2. Returns (a + d - 2) / I_gen^2; a divisibility
// failure contradicts the lemma and is reported as a bug.
inline RingInteger trace_mod_level(const MoebiusElement& g, const RingInteger& level) {
    require(!level.is_zero(), "trace_mod_level: level must be nonzero");
    const FieldDescriptor& k = g.field();
    FieldElement one = FieldElement::one(k);
    bool member = divides(level, g.a().value() - one) && divides(level, g.b()) &&
                  divides(level, g.c()) && divides(level, g.d().value() - one);
    require(member, "trace_mod_level: matrix is not congruent to the identity mod the level");
    FieldElement sq = level.value() * level.value();
    FieldElement num = g.raw_trace() - FieldElement(Rational(2), k);
    FieldElement res = num / sq;
    ensure(is_ring_integer(res), "trace_mod_level: trace residue escaped the ring of integers");
    return RingInteger(res);
}

// h_{P,zeta}(phi) = |P e^{i phi} + 2 + 4 zeta|^2 - |P e^{i phi} - 2|^2.
// For |zeta| = 1 this equals 16(1+Re zeta) + 8 P cos(phi)(1 + Re zeta +
// Im zeta tan(phi)); both are evaluated and must agree to 1e-12 (relative).
inline double h_function(double P, std::complex<double> zeta, double phi) {
    require(P > 1.0, "h_function: P must exceed 1");
    require(std::abs(phi) < std::numbers::pi / 2, "h_function: phi must lie in (-pi/2, pi/2)");
    std::complex<double> e = std::polar(P, phi);
    double definition = std::norm(e + 2.0 + 4.0 * zeta) - std::norm(e - 2.0);
    double closed = 16.0 * (1.0 + zeta.real()) +
                    8.0 * P * std::cos(phi) * (1.0 + zeta.real() + zeta.imag() * std::tan(phi));
    double scale = 1.0 + std::abs(definition) + std::abs(closed);
    ensure(std::abs(definition - closed) <= 1e-12 * scale,
           "h_function: modulus definition and closed form disagree (|zeta| != 1?)");
    return closed;
}

// gate 0 <= theta < epsilon with epsilon = (1/2) arctan(1/2)
inline double holonomy_epsilon() { return 0.5 * std::atan(0.5); }

inline bool holonomy_gate(double theta) {
    return theta >= 0.0 && theta < holonomy_epsilon();
}

// the unit set J = {+-1, +-i, +-omega, +-omega^2}, omega = 1/2 - i sqrt(3)/2
inline const std::vector<std::pair<std::string, std::complex<double>>>& unit_set_J() {
    static const std::vector<std::pair<std::string, std::complex<double>>> J = [] {
        double s = std::sqrt(3.0) / 2.0;
        std::vector<std::pair<std::string, std::complex<double>>> v;
        v.emplace_back("1", std::complex<double>(1.0, 0.0));
        v.emplace_back("-1", std::complex<double>(-1.0, 0.0));
        v.emplace_back("i", std::complex<double>(0.0, 1.0));
        v.emplace_back("-i", std::complex<double>(0.0, -1.0));
        v.emplace_back("omega", std::complex<double>(0.5, -s));
        v.emplace_back("-omega", std::complex<double>(-0.5, s));
        v.emplace_back("omega^2", std::complex<double>(-0.5, -s));
        v.emplace_back("-omega^2", std::complex<double>(0.5, s));
        return v;
    }();
    return J;
}

// torsion units of the ring of integers, exact: +-1 always, +-i for Q(i),
// the six sixth-roots of unity for Q(sqrt(-3))
inline std::vector<FieldElement> torsion_units(const FieldDescriptor& field) {
    require(field.is_imaginary(), "torsion_units: imaginary quadratic field expected");
    std::vector<FieldElement> out;
    out.emplace_back(FieldElement::one(field));
    out.emplace_back(-FieldElement::one(field));
    if (field.d() == -1) {
        out.emplace_back(Rational(0), Rational(1), field);
        out.emplace_back(Rational(0), Rational(-1), field);
    } else if (field.d() == -3) {
        for (int pa : {1, -1})
            for (int pb : {1, -1})
                out.emplace_back(Rational(pa, 2), Rational(pb, 2), field);
    }
    return out;
}

struct SystoleGateParams {
    double n0;
    double l0;

    // N0 = 2(4 + sqrt(17)) makes the Case-1 remainder bound effective:
    // 1 - N^-2 - 4 N^-1 = 3/4 at N = N0, so |zeta R| >= sqrt(2) * 3/4 > 1.
    static SystoleGateParams defaults() {
        double n0 = 2.0 * (4.0 + std::sqrt(17.0));
        return {n0, 4.0 * std::log(n0)};
    }

    static SystoleGateParams with_n0(double n0) {
        require(n0 > 1.0, "SystoleGateParams: N0 must exceed 1");
        return {n0, 4.0 * std::log(n0)};
    }
};

struct HFunctionCheck {
    std::string zeta;
    double value;
    bool nonnegative;

    bool operator==(const HFunctionCheck&) const = default;
};

struct SquareSystoleCertificate {
    bool certified = false;
    bool length_ok = false;
    bool holonomy_ok = false;
    double length = 0;
    double holonomy = 0;
    double n0 = 0;
    double l0 = 0;
    double epsilon = 0;
    std::string trace_text;
    std::vector<HFunctionCheck> h_checks;
    std::string note;

    bool operator==(const SquareSystoleCertificate&) const = default;
};

// gamma^2 realizes the systole of Gamma(tr gamma)\H^3 when the length and
// holonomy gates hold; the certificate also records the h-function values at
// P = |T(lambda^2)|, phi = Arg(T(lambda^2)) for every zeta in J.
inline SquareSystoleCertificate certify_square_systole(
    const NormalizedTrace& t, SystoleGateParams params = SystoleGateParams::defaults()) {
    require(classify(t) == ElementType::loxodromic, "certify_square_systole: trace is not loxodromic");
    require(t.is_integral(), "certify_square_systole: trace must be integral");

    GeodesicInvariant inv = length_holonomy(t);
    SquareSystoleCertificate cert;
    cert.length = inv.length;
    cert.holonomy = inv.holonomy;
    cert.n0 = params.n0;
    cert.l0 = params.l0;
    cert.epsilon = holonomy_epsilon();
    cert.trace_text = to_string(t.value());
    cert.length_ok = inv.length > params.l0;
    cert.holonomy_ok = holonomy_gate(inv.holonomy);
    cert.note = "case-1 remainder read as |zeta R| > 3 sqrt(2)/4, i.e. |R| > 3/4";

    std::complex<double> z = t.embedding();
    std::complex<double> T2 = z * z - 2.0; // T(lambda^2) = t^2 - 2
    double P = std::abs(T2);
    double phi = std::arg(T2);
    if (P > 1.0 && std::abs(phi) < std::numbers::pi / 2) {
        for (const auto& [label, zeta] : unit_set_J()) {
            double value = h_function(P, zeta, phi);
            cert.h_checks.push_back({label, value, value >= -1e-9});
        }
    }

    cert.certified = cert.length_ok && cert.holonomy_ok;
    if (cert.certified) {
        for (const auto& hc : cert.h_checks)
            ensure(hc.nonnegative, "certify_square_systole: h-function negative inside the gated region");
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Bounded-height enumeration of SL2 over the ring of integers of an
// imaginary quadratic field.
//
// Elements are handled as doubled integer coordinates (u, v), value
// (u + v sqrt(d))/denom, in plain int64 arithmetic with __int128
// intermediates; the ranges admitted by the preconditions make this exact.
// Every matrix handed to the public callback is re-verified through the
// exact rational path by the MoebiusElement constructor.
// ---------------------------------------------------------------------------

namespace detail {

struct QuadCoord {
    long long u = 0, v = 0;
    auto operator<=>(const QuadCoord&) const = default;
};

class ImagRing {
public:
    ImagRing(const FieldDescriptor& field, long long height_cap)
        : field_(field), d_(field.d()), denom_(field.half_basis() ? 2 : 1) {
        require(field.is_imaginary(), "sl2 enumeration: imaginary quadratic field expected");
        require(height_cap >= 0 && height_cap <= 100000 && -d_ <= 100000,
                "sl2 enumeration: height/discriminant outside the supported exact-int64 range");
    }

    const FieldDescriptor& field() const { return field_; }
    int denom() const { return denom_; }
    QuadCoord zero() const { return {0, 0}; }
    QuadCoord one() const { return {denom_, 0}; }
    QuadCoord minus_one() const { return {-denom_, 0}; }

    bool is_zero(QuadCoord x) const { return x.u == 0 && x.v == 0; }
    QuadCoord neg(QuadCoord x) const { return {-x.u, -x.v}; }
    QuadCoord add(QuadCoord x, QuadCoord y) const { return {x.u + y.u, x.v + y.v}; }
    QuadCoord sub(QuadCoord x, QuadCoord y) const { return {x.u - y.u, x.v - y.v}; }
    QuadCoord conj(QuadCoord x) const { return {x.u, -x.v}; }

    QuadCoord mul(QuadCoord x, QuadCoord y) const {
        __int128 u = static_cast<__int128>(x.u) * y.u + static_cast<__int128>(x.v) * y.v * d_;
        __int128 v = static_cast<__int128>(x.u) * y.v + static_cast<__int128>(x.v) * y.u;
        if (denom_ == 2) { u /= 2; v /= 2; }
        return {narrow(u), narrow(v)};
    }

    // N(x) = |x|^2 = (u^2 - v^2 d) / denom^2, a nonnegative integer
    long long norm(QuadCoord x) const {
        __int128 n = static_cast<__int128>(x.u) * x.u - static_cast<__int128>(x.v) * x.v * d_;
        return narrow(n / (denom_ * denom_));
    }

    std::optional<QuadCoord> div_exact(QuadCoord x, QuadCoord y) const {
        long long n = norm(y);
        if (n == 0) return std::nullopt;
        QuadCoord m = mul(x, conj(y));
        if (m.u % n != 0 || m.v % n != 0) return std::nullopt;
        QuadCoord q{m.u / n, m.v / n};
        if (denom_ == 2 && ((q.u - q.v) & 1)) return std::nullopt;
        return q;
    }

    bool congruent(QuadCoord x, QuadCoord r, QuadCoord alpha) const {
        return div_exact(sub(x, r), alpha).has_value();
    }

    long long height(QuadCoord x) const { return std::max(std::llabs(x.u), std::llabs(x.v)); }

    double modulus(QuadCoord x) const { return std::sqrt(static_cast<double>(norm(x))); }

    // all ring elements of height <= H, lexicographic in (u, v)
    std::vector<QuadCoord> elements(long long H) const {
        std::vector<QuadCoord> out;
        for (long long u = -H; u <= H; ++u)
            for (long long v = -H; v <= H; ++v) {
                if (denom_ == 2 && ((u - v) & 1)) continue;
                out.push_back({u, v});
            }
        return out;
    }

    // elements congruent to r mod alpha with height <= H, sorted
    std::vector<QuadCoord> congruence_class(QuadCoord r, QuadCoord alpha, long long H) const {
        require(!is_zero(alpha), "sl2 enumeration: zero level");
        double max_mod = static_cast<double>(H) * (1.0 + std::sqrt(static_cast<double>(-d_))) / denom_;
        long long box = static_cast<long long>(
                            std::ceil(denom_ * (max_mod + modulus(r)) / modulus(alpha))) + 2;
        std::vector<QuadCoord> out;
        for (long long mu = -box; mu <= box; ++mu)
            for (long long mv = -box; mv <= box; ++mv) {
                if (denom_ == 2 && ((mu - mv) & 1)) continue;
                QuadCoord x = add(r, mul(alpha, {mu, mv}));
                if (height(x) <= H) out.push_back(x);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    RingInteger lift(QuadCoord x) const {
        return RingInteger(FieldElement(to_rational(x.u, denom_), to_rational(x.v, denom_), field_));
    }

    QuadCoord lower(const RingInteger& x) const {
        auto co = x.coordinates();
        require(co.u.fits_slong_p() && co.v.fits_slong_p(),
                "sl2 enumeration: level coordinates outside the exact-int64 range");
        return {co.u.get_si(), co.v.get_si()};
    }

private:
    static long long narrow(__int128 x) {
        ensure(x <= INT64_MAX && x >= INT64_MIN, "sl2 enumeration: int64 range exceeded");
        return static_cast<long long>(x);
    }

    FieldDescriptor field_;
    long long d_;
    int denom_;
};

struct CoordMatrix {
    QuadCoord a, b, c, d;
};

// Iterates (a, b) in lexicographic order, completing each pair to det-1
// matrices: d = (1 + b c)/a when a != 0 and the division is exact; the a = 0
// stratum needs b c = -1 and d free. The optional level restricts to
// congruence classes +-1 (diagonal) / 0 (off-diagonal) before completion.
// Workers split the (a, b) loop by index; each slice preserves the order.
template <typename Fn>
inline void enumerate_sl2_coords(const ImagRing& ring, long long H,
                                 const std::optional<QuadCoord>& level, Fn&& fn,
                                 int worker_index = 0, int worker_count = 1) {
    require(H >= 1, "enumerate_sl2: height must be at least 1");
    require(worker_count >= 1 && worker_index >= 0 && worker_index < worker_count,
            "enumerate_sl2: bad worker slice");

    std::vector<QuadCoord> all = ring.elements(H);
    std::vector<QuadCoord> a_list, bc_list;
    if (level) {
        std::vector<QuadCoord> plus = ring.congruence_class(ring.one(), *level, H);
        std::vector<QuadCoord> minus = ring.congruence_class(ring.minus_one(), *level, H);
        a_list.reserve(plus.size() + minus.size());
        std::merge(plus.begin(), plus.end(), minus.begin(), minus.end(), std::back_inserter(a_list));
        a_list.erase(std::unique(a_list.begin(), a_list.end()), a_list.end());
        bc_list = ring.congruence_class(ring.zero(), *level, H);
    } else {
        a_list = all;
        bc_list = all;
    }

    auto diagonal_pair_ok = [&](QuadCoord a, QuadCoord d) {
        if (!level) return true;
        if (ring.congruent(a, ring.one(), *level) && ring.congruent(d, ring.one(), *level)) return true;
        return ring.congruent(a, ring.minus_one(), *level) &&
               ring.congruent(d, ring.minus_one(), *level);
    };

    std::size_t pair_index = 0;
    for (const QuadCoord& a : a_list) {
        bool a_zero = ring.is_zero(a);
        for (const QuadCoord& b : bc_list) {
            if (pair_index++ % static_cast<std::size_t>(worker_count) !=
                static_cast<std::size_t>(worker_index))
                continue;
            if (a_zero) {
                if (ring.is_zero(b)) continue;
                auto c = ring.div_exact(ring.minus_one(), b);
                if (!c || ring.height(*c) > H) continue;
                if (level && !ring.congruent(*c, ring.zero(), *level)) continue;
                for (const QuadCoord& d : all) {
                    if (!diagonal_pair_ok(a, d)) continue;
                    fn(CoordMatrix{a, b, *c, d});
                }
            } else {
                for (const QuadCoord& c : bc_list) {
                    QuadCoord num = ring.add(ring.one(), ring.mul(b, c));
                    auto d = ring.div_exact(num, a);
                    if (!d || ring.height(*d) > H) continue;
                    if (!diagonal_pair_ok(a, *d)) continue;
                    fn(CoordMatrix{a, b, c, *d});
                }
            }
        }
    }
}

} // namespace detail

// Stream of all height-<= H unimodular matrices over O_k, optionally filtered
// to +-identity mod the level; deterministic order.
inline void enumerate_sl2(const FieldDescriptor& field, long long height,
                          const std::optional<RingInteger>& level,
                          const std::function<void(const MoebiusElement&)>& fn,
                          int worker_index = 0, int worker_count = 1) {
    detail::ImagRing ring(field, height);
    std::optional<detail::QuadCoord> lvl;
    if (level) {
        require(level->field() == field, "enumerate_sl2: level lies in a different field");
        require(!level->is_zero(), "enumerate_sl2: zero level");
        lvl = ring.lower(*level);
    }
    detail::enumerate_sl2_coords(
        ring, height, lvl,
        [&](const detail::CoordMatrix& m) {
            fn(MoebiusElement(ring.lift(m.a), ring.lift(m.b), ring.lift(m.c), ring.lift(m.d)));
        },
        worker_index, worker_count);
}

} // namespace systolic
