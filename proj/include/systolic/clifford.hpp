#pragma once

// Clifford algebra C(f,k) of a diagonal quadratic form
//   f = -a0 x0^2 + a1 x1^2 + ... + an xn^2
// over Q or a quadratic field, with the generator relations
// e_v^2 = f(e_v), e_v e_mu = -e_mu e_v. Basis blades e_M are indexed by
// subset masks M of {0,...,n}; elements are sparse mask -> coefficient maps.

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "systolic/errors.hpp"
#include "systolic/quadfield.hpp"

namespace systolic {

using Mask = std::uint32_t;

inline int grade(Mask m) { return std::popcount(m); }

class DiagonalForm {
public:
    // coefficients a_0..a_n; the x0^2 term carries the negative sign
    explicit DiagonalForm(std::vector<RingInteger> coeffs) : coeffs_(std::move(coeffs)) {
        require(!coeffs_.empty() && coeffs_.size() <= 13,
                "DiagonalForm: need 1..13 coefficients (dimension cap n <= 12)");
        for (const auto& c : coeffs_) {
            require(c.field() == coeffs_.front().field(), "DiagonalForm: mixed coefficient fields");
            require(!c.is_zero(), "DiagonalForm: degenerate form (zero coefficient)");
        }
    }

    static DiagonalForm from_strings(const std::vector<std::string>& coeffs, FieldDescriptor field) {
        std::vector<RingInteger> parsed;
        parsed.reserve(coeffs.size());
        for (const auto& s : coeffs) parsed.push_back(parse_ring_integer(s, field));
        return DiagonalForm(std::move(parsed));
    }

    int generators() const { return static_cast<int>(coeffs_.size()); }
    int dimension() const { return generators() - 1; }
    const FieldDescriptor& field() const { return coeffs_.front().field(); }
    const RingInteger& coefficient(int i) const { return coeffs_.at(i); }
    Mask full_mask() const { return (Mask{1} << generators()) - 1; }

    // f(e_v): -a_0 for the timelike generator, a_v otherwise
    FieldElement generator_square(int v) const {
        const FieldElement& a = coeffs_.at(v).value();
        return v == 0 ? -a : a;
    }

    bool operator==(const DiagonalForm& rhs) const { return coeffs_ == rhs.coeffs_; }

private:
    std::vector<RingInteger> coeffs_;
};

struct AdmissibilityResult {
    bool admissible;
    std::string reason; // empty when admissible
};

// Signature (n,1) at the identity embedding, definite at the conjugate
// embedding: a_i > 0 for all i, and for quadratic fields sigma(a_0) < 0,
// sigma(a_i) > 0 for i >= 1. All signs decided exactly.
inline AdmissibilityResult admissible_check(const DiagonalForm& f) {
    require(f.field().is_real(), "admissible_check: base field must be Q or real quadratic");
    for (int i = 0; i < f.generators(); ++i) {
        if (sign_identity(f.coefficient(i).value()) <= 0)
            return {false, "coefficient a_" + std::to_string(i) + " is not positive at the identity embedding"};
    }
    if (f.field().degree() == 2) {
        if (sign_conjugate(f.coefficient(0).value()) >= 0)
            return {false, "sigma(a_0) is not negative, so the conjugate form is indefinite"};
        for (int i = 1; i < f.generators(); ++i) {
            if (sign_conjugate(f.coefficient(i).value()) <= 0)
                return {false, "sigma(a_" + std::to_string(i) + ") is not positive, so the conjugate form is indefinite"};
        }
    }
    return {true, ""};
}

// e_M * e_N = coeff * e_{M xor N}. The sign counts the transpositions that
// interleave the two ascending generator strings; each generator shared by
// M and N contracts to f(e_v).
inline std::pair<FieldElement, Mask> basis_mul(Mask m, Mask n, const DiagonalForm& f) {
    require((m | n) <= f.full_mask(), "basis_mul: mask outside form dimension");
    long inversions = 0;
    for (Mask rest = n; rest != 0; rest &= rest - 1) {
        int v = std::countr_zero(rest);
        inversions += std::popcount(m >> (v + 1));
    }
    FieldElement coeff = FieldElement(Rational(inversions % 2 == 0 ? 1 : -1), f.field());
    for (Mask shared = m & n; shared != 0; shared &= shared - 1)
        coeff *= f.generator_square(std::countr_zero(shared));
    return {coeff, m ^ n};
}

class CliffordElement {
public:
    explicit CliffordElement(DiagonalForm form) : form_(std::move(form)) {}

    CliffordElement(DiagonalForm form, std::map<Mask, FieldElement> terms)
        : form_(std::move(form)) {
        for (auto& [mask, c] : terms) add_term(mask, c);
    }

    static CliffordElement scalar(const DiagonalForm& form, FieldElement value) {
        CliffordElement out(form);
        out.add_term(0, value);
        return out;
    }

    static CliffordElement one(const DiagonalForm& form) {
        return scalar(form, FieldElement::one(form.field()));
    }

    static CliffordElement basis(const DiagonalForm& form, Mask mask, FieldElement coeff) {
        require(mask <= form.full_mask(), "CliffordElement: mask outside form dimension");
        CliffordElement out(form);
        out.add_term(mask, std::move(coeff));
        return out;
    }

    const DiagonalForm& form() const { return form_; }
    const std::map<Mask, FieldElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    FieldElement coefficient(Mask mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? FieldElement::zero(form_.field()) : it->second;
    }

    // zero coefficients are pruned eagerly, so this is mathematical equality
    bool operator==(const CliffordElement& rhs) const {
        return form_ == rhs.form_ && terms_ == rhs.terms_;
    }

    CliffordElement operator+(const CliffordElement& rhs) const {
        check_same_form(rhs);
        CliffordElement out = *this;
        for (const auto& [mask, c] : rhs.terms_) out.add_term(mask, c);
        return out;
    }

    CliffordElement operator-() const {
        CliffordElement out(form_);
        for (const auto& [mask, c] : terms_) out.terms_.emplace(mask, -c);
        return out;
    }

    CliffordElement operator-(const CliffordElement& rhs) const { return *this + (-rhs); }

    bool even_support() const {
        for (const auto& [mask, c] : terms_)
            if (grade(mask) % 2 != 0) return false;
        return true;
    }

    // membership in the order Q (all coefficients in O_k)
    bool integral() const {
        for (const auto& [mask, c] : terms_)
            if (!is_ring_integer(c)) return false;
        return true;
    }

    void add_term(Mask mask, const FieldElement& coeff) {
        require(mask <= form_.full_mask(), "CliffordElement: mask outside form dimension");
        auto [it, inserted] = terms_.emplace(mask, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) terms_.erase(it);
        } else if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }

private:
    void check_same_form(const CliffordElement& rhs) const {
        require(form_ == rhs.form_, "CliffordElement: mismatched forms");
    }

    DiagonalForm form_;
    std::map<Mask, FieldElement> terms_;
};

// bilinear extension of basis_mul; associative and unital
inline CliffordElement cliff_mul(const CliffordElement& x, const CliffordElement& y) {
    require(x.form() == y.form(), "cliff_mul: mismatched forms");
    CliffordElement out(x.form());
    for (const auto& [mx, cx] : x.terms()) {
        for (const auto& [my, cy] : y.terms()) {
            auto [coeff, mask] = basis_mul(mx, my, x.form());
            out.add_term(mask, coeff * cx * cy);
        }
    }
    return out;
}

inline CliffordElement operator*(const CliffordElement& x, const CliffordElement& y) {
    return cliff_mul(x, y);
}

// the anti-involution *: e_M -> (-1)^{v(v-1)/2} e_M with v = |M|
inline CliffordElement star(const CliffordElement& x) {
    CliffordElement out(x.form());
    for (const auto& [mask, c] : x.terms()) {
        int v = grade(mask);
        out.add_term(mask, (v * (v - 1) / 2) % 2 == 0 ? c : -c);
    }
    return out;
}

inline FieldElement real_part(const CliffordElement& x) {
    return x.coefficient(0);
}

struct SpinCheck {
    bool spin;
    std::string reason; // empty when spin
};

// s in Spin_f iff s is even, s s* = 1, and conjugation preserves the
// quadratic space; the generator-by-generator check s e_i s* decides the
// latter, since the generators span it.
inline SpinCheck is_spin(const CliffordElement& x) {
    if (!x.even_support()) return {false, "odd-grade support"};
    if (!(cliff_mul(x, star(x)) == CliffordElement::one(x.form())))
        return {false, "s s* != 1"};
    CliffordElement xs = star(x);
    for (int i = 0; i < x.form().generators(); ++i) {
        CliffordElement e = CliffordElement::basis(x.form(), Mask{1} << i, FieldElement::one(x.form().field()));
        CliffordElement conj = cliff_mul(cliff_mul(x, e), xs);
        for (const auto& [mask, c] : conj.terms()) {
            if (grade(mask) != 1)
                return {false, "conjugation of e_" + std::to_string(i) + " leaves the quadratic space"};
        }
    }
    return {true, ""};
}

// An even Clifford element with a verified spin certificate.
class SpinElement {
public:
    static SpinElement certify(CliffordElement x) {
        SpinCheck check = is_spin(x);
        require(check.spin, "SpinElement: not a spin element (" + check.reason + ")");
        return SpinElement(std::move(x));
    }

    const CliffordElement& element() const { return element_; }
    const DiagonalForm& form() const { return element_.form(); }
    FieldElement real_part() const { return systolic::real_part(element_); }
    bool integral() const { return element_.integral(); }

    // s* is the inverse of s
    SpinElement inverse() const { return SpinElement(star(element_)); }

    SpinElement operator*(const SpinElement& rhs) const {
        return SpinElement(cliff_mul(element_, rhs.element_));
    }

    bool operator==(const SpinElement& rhs) const { return element_ == rhs.element_; }

private:
    friend SpinElement embed_even_subalgebra(const SpinElement&, const DiagonalForm&);
    explicit SpinElement(CliffordElement x) : element_(std::move(x)) {}

    CliffordElement element_;
};

// Inclusion C+(f') -> C+(f) for f' the restriction of f to generators
// {0,1,2}: identical coefficients, masks reinterpreted in the larger algebra.
inline CliffordElement embed_even_subalgebra(const CliffordElement& x, const DiagonalForm& f) {
    const DiagonalForm& sub = x.form();
    require(sub.generators() == 3, "embed_even_subalgebra: source must be the quaternionic slice (generators {0,1,2})");
    require(f.generators() >= 3, "embed_even_subalgebra: target form too small");
    require(f.field() == sub.field(), "embed_even_subalgebra: mismatched fields");
    for (int i = 0; i < 3; ++i)
        require(f.coefficient(i) == sub.coefficient(i),
                "embed_even_subalgebra: coefficient mismatch on shared generator " + std::to_string(i));
    CliffordElement out(f);
    for (const auto& [mask, c] : x.terms()) out.add_term(mask, c);
    return out;
}

// spin certificates carry over: the inclusion is an algebra map and the new
// generators commute with the even subalgebra on {0,1,2}
inline SpinElement embed_even_subalgebra(const SpinElement& s, const DiagonalForm& f) {
    return SpinElement(embed_even_subalgebra(s.element(), f));
}

} // namespace systolic
