#pragma once

// Principal congruence subgroups Gamma(alpha) of Spin_f(O_k), the order-two
// extension Gamma_tau(alpha), the real-part residue lemmas and the
// displacement / index / kissing bounds built on them.

#include <cmath>
#include <optional>
#include <string>

#include "systolic/clifford.hpp"
#include "systolic/errors.hpp"
#include "systolic/quadfield.hpp"

namespace systolic {

// Level data (alpha, tau): tau_rep represents a class of order two in
// (O_k/alpha O_k)^x, i.e. alpha | tau^2 - 1.
class CongruenceLevel {
public:
    explicit CongruenceLevel(RingInteger alpha, std::optional<RingInteger> tau_rep = std::nullopt)
        : alpha_(std::move(alpha)), tau_rep_(std::move(tau_rep)) {
        require(!alpha_.is_zero(), "CongruenceLevel: alpha must be nonzero");
        if (tau_rep_) {
            require(tau_rep_->field() == alpha_.field(), "CongruenceLevel: tau and alpha live in different fields");
            RingInteger t = *tau_rep_;
            require(divides(alpha_, t * t - RingInteger::one(alpha_.field())),
                    "CongruenceLevel: tau^2 != 1 mod alpha");
        }
    }

    const RingInteger& alpha() const { return alpha_; }
    const std::optional<RingInteger>& tau_rep() const { return tau_rep_; }

private:
    RingInteger alpha_;
    std::optional<RingInteger> tau_rep_;
};

// s in Gamma(alpha): s integral, alpha | s_M for all nonempty M, alpha | s_R - 1
inline bool in_gamma_alpha(const SpinElement& s, const RingInteger& alpha) {
    require(!alpha.is_zero(), "in_gamma_alpha: alpha must be nonzero");
    require(s.integral(), "in_gamma_alpha: spin element has non-integral coefficients (not in the order Q)");
    for (const auto& [mask, c] : s.element().terms()) {
        FieldElement target = mask == 0 ? c - FieldElement::one(c.field()) : c;
        if (!divides(alpha, target)) return false;
    }
    // empty-mask coefficient absent means s_R = 0, so s_R - 1 = -1 must be checked
    if (s.element().terms().find(0) == s.element().terms().end()) {
        if (!divides(alpha, -FieldElement::one(alpha.field()))) return false;
    }
    return true;
}

// s in Gamma_tau(alpha): s in Gamma(alpha), or s = tau mod alpha*Q
// (alpha | s_M for nonempty M and alpha | s_R - tau)
inline bool in_gamma_tau_alpha(const SpinElement& s, const CongruenceLevel& level) {
    require(level.tau_rep().has_value(), "in_gamma_tau_alpha: level has no tau representative");
    if (in_gamma_alpha(s, level.alpha())) return true;
    require(s.integral(), "in_gamma_tau_alpha: spin element has non-integral coefficients");
    for (const auto& [mask, c] : s.element().terms()) {
        FieldElement target = mask == 0 ? c - level.tau_rep()->value() : c;
        if (!divides(level.alpha(), target)) return false;
    }
    if (s.element().terms().find(0) == s.element().terms().end()) {
        if (!divides(level.alpha(), -level.tau_rep()->value())) return false;
    }
    return true;
}

// Lemma: s in Gamma(alpha) has s_R = 1 + (1/2) alpha^2 zeta with zeta in O_k.
// Returns zeta = 2 (s_R - 1) / alpha^2; a non-integral zeta is a bug, never
// rounded.
inline RingInteger realpart_residue(const SpinElement& s, const RingInteger& alpha) {
    require(in_gamma_alpha(s, alpha), "realpart_residue: element is not in Gamma(alpha)");
    FieldElement num = s.real_part() - FieldElement::one(alpha.field());
    FieldElement two(Rational(2), alpha.field());
    FieldElement zeta = two * num / (alpha.value() * alpha.value());
    ensure(is_ring_integer(zeta), "realpart_residue: residue escaped the ring of integers");
    return RingInteger(zeta);
}

// Shifted variant: for s with s - s_R in alpha*Q and r in Gamma(alpha),
// (s r)_R = s_R + (1/2) alpha^2 zeta. Takes the two real parts directly.
inline RingInteger realpart_residue_shifted(const FieldElement& product_real,
                                            const FieldElement& base_real,
                                            const RingInteger& alpha) {
    require(!alpha.is_zero(), "realpart_residue_shifted: alpha must be nonzero");
    FieldElement two(Rational(2), alpha.field());
    FieldElement zeta = two * (product_real - base_real) / (alpha.value() * alpha.value());
    ensure(is_ring_integer(zeta), "realpart_residue_shifted: residue escaped the ring of integers");
    return RingInteger(zeta);
}

// |r_R| > N(alpha)^2 / 2^(2d-1) - 1 for loxodromic r in Gamma(alpha);
// returned exactly as a rational.
inline Rational realpart_lower_bound(const RingInteger& alpha, int degree_d) {
    require(!alpha.is_zero(), "realpart_lower_bound: alpha must be nonzero");
    require(degree_d == 1 || degree_d == 2, "realpart_lower_bound: degree must be 1 or 2");
    Integer n = ideal_norm(alpha);
    Rational bound(n * n, Integer(1) << (2 * degree_d - 1));
    bound.canonicalize();
    return bound - 1;
}

// Coset version: |gamma_R| > N(alpha)^2 / 2^(2d-1) - |s_R|.
inline Rational shifted_lower_bound(const RingInteger& alpha, const Rational& s_abs, int degree_d) {
    require(!alpha.is_zero(), "shifted_lower_bound: alpha must be nonzero");
    require(degree_d == 1 || degree_d == 2, "shifted_lower_bound: degree must be 1 or 2");
    require(s_abs >= 0, "shifted_lower_bound: |s_R| must be nonnegative");
    Integer n = ideal_norm(alpha);
    Rational bound(n * n, Integer(1) << (2 * degree_d - 1));
    bound.canonicalize();
    return bound - s_abs;
}

// l(r) >= 2 arcosh(|r_R|) for loxodromic r; vacuous (0) when |r_R| <= 1.
inline double length_lower_bound(double r_abs) {
    require(r_abs >= 0, "length_lower_bound: |r_R| must be nonnegative");
    if (r_abs <= 1.0) return 0.0;
    return 2.0 * std::acosh(r_abs);
}

// [Gamma : Gamma(alpha)] <= N(alpha)^(n(n+1)/2), exact.
inline Integer index_upper_bound(const RingInteger& alpha, int n) {
    require(!alpha.is_zero(), "index_upper_bound: alpha must be nonzero");
    require(n >= 2, "index_upper_bound: dimension must be at least 2");
    return integer_pow(ideal_norm(alpha), static_cast<unsigned long>(n) * (n + 1) / 2);
}

// Disjoint deck-group orbits of the systole classes, each of size at least
// |G| / isotropy_cap: Kiss >= floor(classes * |G| / cap).
inline Integer kissing_lower_bound(const Integer& num_systole_classes,
                                   const Integer& group_order,
                                   const Integer& isotropy_cap) {
    require(num_systole_classes > 0 && group_order > 0 && isotropy_cap > 0,
            "kissing_lower_bound: all inputs must be positive");
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), Integer(num_systole_classes * group_order).get_mpz_t(),
               isotropy_cap.get_mpz_t());
    return out;
}

// A bound with its inputs echoed; bound_exact is the rational value when the
// formula is exact, bound_approx its double image.
struct BoundReport {
    std::string quantity;
    std::string bound_exact;
    double bound_approx = 0;
    std::vector<std::pair<std::string, std::string>> inputs;
    bool certified = false;

    bool operator==(const BoundReport&) const = default;
};

inline BoundReport realpart_bound_report(const RingInteger& alpha, int degree_d) {
    Rational bound = realpart_lower_bound(alpha, degree_d);
    BoundReport report;
    report.quantity = "realpart_lower_bound";
    report.bound_exact = to_string(bound);
    report.bound_approx = bound.get_d();
    report.inputs = {{"alpha", to_string(alpha)}, {"degree", std::to_string(degree_d)}};
    report.certified = true;
    return report;
}

} // namespace systolic
