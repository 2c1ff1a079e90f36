#pragma once

// Degree-4 Salem machinery over a real quadratic field K: powers of
// lambda = t + u sqrt(D) as integral pairs (t_n, u_n), rotation-power
// selection, the congruence level alpha_l = 4 t_m^2 - 1, and the exact
// inequality checks certifying that a surface systole is a manifold systole.
//
// A degenerate mode with K = Q (no conjugate embedding) is allowed for
// recurrence and formula tests; certification there uses the d = 1 constants.

#include <string>
#include <utility>
#include <vector>

#include "systolic/clifford.hpp"
#include "systolic/errors.hpp"
#include "systolic/quadfield.hpp"

namespace systolic {

// lambda = t + u sqrt(D), a norm-one unit: t^2 - u^2 D = 1, lambda > 1.
// For quadratic K the conjugate lambda must sit on the unit-circle side,
// i.e. sigma(t)^2 < 1; checked exactly at construction.
class SalemQuartic {
public:
    SalemQuartic(RingInteger t, RingInteger u, RingInteger D)
        : t_(std::move(t)), u_(std::move(u)), D_(std::move(D)) {
        const FieldDescriptor& k = t_.field();
        require(k.is_real(), "SalemQuartic: base field must be Q or real quadratic");
        require(u_.field() == k && D_.field() == k, "SalemQuartic: mixed fields");
        FieldElement unit_check = t_.value() * t_.value() - u_.value() * u_.value() * D_.value();
        require(unit_check == FieldElement::one(k), "SalemQuartic: t^2 - u^2 D != 1");
        require(compare_identity(t_.value(), FieldElement::one(k)) > 0,
                "SalemQuartic: t must exceed 1 (loxodromic case)");
        require(sign_identity(D_.value()) > 0, "SalemQuartic: D must be positive at the identity embedding");
        require(sign_identity(u_.value()) > 0, "SalemQuartic: u must be positive (lambda > 1 branch)");
        if (k.degree() == 2) {
            FieldElement st = galois_conj(t_.value());
            require(compare_identity(st * st, FieldElement::one(k)) < 0,
                    "SalemQuartic: |sigma(t)| must be < 1 (genuine Salem input)");
        }
    }

    const RingInteger& t() const { return t_; }
    const RingInteger& u() const { return u_; }
    const RingInteger& D() const { return D_; }
    const FieldDescriptor& field() const { return t_.field(); }

    // the coupled recurrences below need lambda = x0 + sqrt(x0^2 - 1)
    bool unit_slice() const {
        return u_ == RingInteger::one(field()) &&
               D_.value() == t_.value() * t_.value() - FieldElement::one(field());
    }

private:
    RingInteger t_, u_, D_;
};

// Extraction from a loxodromic spin element of the quaternionic slice:
// (t, u, D) = (|s_R|, 1, s_R^2 - 1). The sign of s_R is projectively
// irrelevant (s and -s induce the same isometry).
inline SalemQuartic salem_from_spin(const SpinElement& s) {
    require(s.form().generators() == 3, "salem_from_spin: spin element must live in the quaternionic slice");
    FieldElement r = s.real_part();
    const FieldDescriptor& k = r.field();
    require(compare_identity(abs_identity(r), FieldElement::one(k)) > 0,
            "salem_from_spin: |s_R| <= 1, element is not loxodromic");
    FieldElement t = abs_identity(r);
    return SalemQuartic(RingInteger(t), RingInteger::one(k), RingInteger(t * t - FieldElement::one(k)));
}

// lambda^(n+1) = t_n + u_n sqrt(D). Uses the coupled recurrences
//   t_k = (x0^2 - 1) u_{k-1} + x0 t_{k-1},  u_k = x0 u_{k-1} + t_{k-1}
// on the unit slice, and direct exact exponentiation otherwise.
inline std::pair<RingInteger, RingInteger> salem_power(const SalemQuartic& sq, unsigned n) {
    const FieldDescriptor& k = sq.field();
    if (sq.unit_slice()) {
        FieldElement x0 = sq.t().value();
        FieldElement d = sq.D().value(); // x0^2 - 1
        FieldElement t = x0, u = FieldElement::one(k);
        for (unsigned i = 0; i < n; ++i) {
            FieldElement t_next = d * u + x0 * t;
            u = x0 * u + t;
            t = t_next;
        }
        return {RingInteger(t), RingInteger(u)};
    }
    FieldElement t = sq.t().value(), u = sq.u().value(), d = sq.D().value();
    FieldElement a = t, b = u;
    for (unsigned i = 0; i < n; ++i) {
        FieldElement a_next = a * t + b * u * d;
        b = a * u + b * t;
        a = a_next;
    }
    return {RingInteger(a), RingInteger(b)};
}

// Smallest m in {0,1,2} with sigma(t_m)^2 > 1/2 (exact comparison of
// 2 sigma(t_m)^2 against 1). In degenerate mode sigma is the identity and
// t_0 >= 2 always wins. Existence is guaranteed for Salem inputs; running out
// of candidates signals a bug or a non-Salem input.
inline int choose_rotation_power(const SalemQuartic& sq) {
    const FieldDescriptor& k = sq.field();
    for (int m = 0; m <= 2; ++m) {
        auto [t_m, u_m] = salem_power(sq, static_cast<unsigned>(m));
        FieldElement st = k.degree() == 2 ? galois_conj(t_m.value()) : t_m.value();
        FieldElement two(Rational(2), k);
        if (compare_identity(two * st * st, FieldElement::one(k)) > 0) return m;
    }
    throw invariant_violation("choose_rotation_power: no m in {0,1,2} works; input cannot be a Salem unit");
}

struct InequalityCheck {
    std::string name;
    std::string lhs; // exact
    std::string rhs; // exact
    bool holds;

    bool operator==(const InequalityCheck&) const = default;
};

struct LevelCertificate {
    int l = 0;              // 3(m+1) - 1, in {2,5,8}
    int m = 0;              // rotation power
    RingInteger alpha;      // 4 t_m^2 - 1
    RingInteger t_l;        // real part of lambda^(l+1)
    std::vector<InequalityCheck> checks;
    bool certified = false;

    bool operator==(const LevelCertificate&) const = default;
};

// Level selection: l = 3(m+1)-1, alpha_l = 4 t_m^2 - 1, with the conjugate
// window 1 <= |sigma(alpha_l)| <= 5 verified exactly (quadratic fields; the
// degenerate field has no conjugate embedding to test).
inline LevelCertificate level_from_salem(const SalemQuartic& sq) {
    const FieldDescriptor& k = sq.field();
    int m = choose_rotation_power(sq);
    auto [t_m, u_m] = salem_power(sq, static_cast<unsigned>(m));
    FieldElement four(Rational(4), k);
    RingInteger alpha(four * t_m.value() * t_m.value() - FieldElement::one(k));
    int l = 3 * (m + 1) - 1;
    auto [t_l, u_l] = salem_power(sq, static_cast<unsigned>(l));

    LevelCertificate cert{l, m, alpha, t_l, {}, false};
    if (k.degree() == 2) {
        FieldElement sa = abs_identity(galois_conj(alpha.value()));
        bool lower = compare_identity(sa, FieldElement::one(k)) >= 0;
        bool upper = compare_identity(sa, FieldElement(Rational(5), k)) <= 0;
        cert.checks.push_back({"sigma_window_lower", "1", to_string(sa), lower});
        cert.checks.push_back({"sigma_window_upper", to_string(sa), "5", upper});
        ensure(lower && upper,
               "level_from_salem: |sigma(alpha_l)| outside [1,5]; input cannot be a Salem unit");
    }
    return cert;
}

// Certification that lambda^(l+1) has minimal displacement in
// Gamma_tau_l(alpha_l): both sufficient inequalities are decided exactly.
//   (i)  N(alpha_l)^2 / 2^(2d-1) - 1 >= t_l   (covers Gamma(alpha_l))
//   (ii) N(alpha_l)^2 / 2^(2d-1)    >= 2 t_l  (covers the tau_l coset)
// certified = true is the computational content of the equal-systoles
// corollary for this instance.
inline LevelCertificate certify_surface_systole(const SalemQuartic& sq, int degree_d) {
    require(degree_d == 1 || degree_d == 2, "certify_surface_systole: degree must be 1 or 2");
    LevelCertificate cert = level_from_salem(sq);
    const FieldDescriptor& k = sq.field();

    Integer n = ideal_norm(cert.alpha);
    Rational norm_term(n * n, Integer(1) << (2 * degree_d - 1));
    norm_term.canonicalize();

    FieldElement lhs_i(norm_term - 1, k);
    bool check_i = compare_identity(lhs_i, cert.t_l.value()) >= 0;
    cert.checks.push_back({"gamma_alpha_bound", to_string(norm_term - 1), to_string(cert.t_l), check_i});

    FieldElement lhs_ii(norm_term, k);
    FieldElement two_tl = FieldElement(Rational(2), k) * cert.t_l.value();
    bool check_ii = compare_identity(lhs_ii, two_tl) >= 0;
    cert.checks.push_back({"tau_coset_bound", to_string(norm_term), to_string(two_tl), check_ii});

    cert.certified = check_i && check_ii;
    return cert;
}

} // namespace systolic
