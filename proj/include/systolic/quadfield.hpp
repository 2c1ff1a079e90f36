#pragma once

// Exact arithmetic in Q and in quadratic fields Q(sqrt(d)), d squarefree,
// d > 0 real, d < 0 imaginary. Elements are coordinate pairs of exact
// rationals; every comparison and sign decision is made in rational
// arithmetic, never in floating point.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "systolic/errors.hpp"
#include "systolic/rational.hpp"

namespace systolic {

class FieldDescriptor {
public:
    static FieldDescriptor rationals() { return FieldDescriptor(0, 1); }

    static FieldDescriptor quadratic(long long d) {
        require(d != 0 && d != 1, "FieldDescriptor: d must be a nonzero squarefree integer != 1");
        require(is_squarefree(d), "FieldDescriptor: d must be squarefree");
        return FieldDescriptor(d, 2);
    }

    long long d() const { return d_; }
    int degree() const { return degree_; }
    bool is_rational_field() const { return degree_ == 1; }
    bool is_real() const { return degree_ == 1 || d_ > 0; }
    bool is_imaginary() const { return degree_ == 2 && d_ < 0; }

    // true when the ring of integers carries the half-integer basis (1+sqrt(d))/2
    bool half_basis() const { return degree_ == 2 && mod4(d_) == 1; }

    // d as an exact rational, for use in coordinate arithmetic
    Rational d_rational() const { return Rational(static_cast<long>(d_)); }

    bool operator==(const FieldDescriptor&) const = default;

    std::string name() const {
        if (degree_ == 1) return "Q";
        return "Q(sqrt(" + std::to_string(d_) + "))";
    }

private:
    FieldDescriptor(long long d, int degree) : d_(d), degree_(degree) {}

    long long d_;
    int degree_;
};

// Element a + b*sqrt(d) with exact rational coordinates; b == 0 when degree 1.
class FieldElement {
public:
    FieldElement(Rational a, FieldDescriptor field)
        : a_(std::move(a)), b_(0), field_(field) {
        a_.canonicalize();
    }

    FieldElement(Rational a, Rational b, FieldDescriptor field)
        : a_(std::move(a)), b_(std::move(b)), field_(field) {
        a_.canonicalize();
        b_.canonicalize();
        require(field_.degree() == 2 || b_ == 0,
                "FieldElement: nonzero sqrt coordinate in a degree-1 field");
    }

    static FieldElement zero(FieldDescriptor field) { return FieldElement(Rational(0), field); }
    static FieldElement one(FieldDescriptor field) { return FieldElement(Rational(1), field); }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    const FieldDescriptor& field() const { return field_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational_value() const { return b_ == 0; }

    bool operator==(const FieldElement& rhs) const {
        return field_ == rhs.field_ && a_ == rhs.a_ && b_ == rhs.b_;
    }

    FieldElement operator-() const { return FieldElement(-a_, -b_, field_); }

    FieldElement operator+(const FieldElement& rhs) const {
        check_same_field(rhs);
        return FieldElement(a_ + rhs.a_, b_ + rhs.b_, field_);
    }

    FieldElement operator-(const FieldElement& rhs) const {
        check_same_field(rhs);
        return FieldElement(a_ - rhs.a_, b_ - rhs.b_, field_);
    }

    FieldElement operator*(const FieldElement& rhs) const {
        check_same_field(rhs);
        // (a1 + b1 s)(a2 + b2 s) = a1 a2 + b1 b2 d + (a1 b2 + b1 a2) s
        return FieldElement(a_ * rhs.a_ + b_ * rhs.b_ * field_.d_rational(),
                            a_ * rhs.b_ + b_ * rhs.a_, field_);
    }

    FieldElement operator/(const FieldElement& rhs) const {
        check_same_field(rhs);
        require(!rhs.is_zero(), "FieldElement: division by zero");
        // multiply by the conjugate; the denominator a^2 - b^2 d is the norm
        Rational n = rhs.a_ * rhs.a_ - rhs.b_ * rhs.b_ * field_.d_rational();
        return FieldElement((a_ * rhs.a_ - b_ * rhs.b_ * field_.d_rational()) / n,
                            (b_ * rhs.a_ - a_ * rhs.b_) / n, field_);
    }

    FieldElement& operator+=(const FieldElement& rhs) { return *this = *this + rhs; }
    FieldElement& operator-=(const FieldElement& rhs) { return *this = *this - rhs; }
    FieldElement& operator*=(const FieldElement& rhs) { return *this = *this * rhs; }

    // structural order (lexicographic on coordinates); used for canonical
    // sorting of reports, not as a numeric comparison
    int structural_order(const FieldElement& rhs) const {
        int c = cmp(a_, rhs.a_);
        if (c != 0) return c;
        return cmp(b_, rhs.b_);
    }

private:
    void check_same_field(const FieldElement& rhs) const {
        require(field_ == rhs.field_, "FieldElement: mismatched fields");
    }

    Rational a_, b_;
    FieldDescriptor field_;
};

inline FieldElement field_rational(const Rational& q, FieldDescriptor field) {
    return FieldElement(q, field);
}

enum class FieldOp { add, sub, mul, div };

inline FieldElement field_arith(const FieldElement& x, const FieldElement& y, FieldOp op) {
    switch (op) {
        case FieldOp::add: return x + y;
        case FieldOp::sub: return x - y;
        case FieldOp::mul: return x * y;
        case FieldOp::div: return x / y;
    }
    throw precondition_error("field_arith: unknown op");
}

// Nontrivial embedding a + b sqrt(d) -> a - b sqrt(d); an involution fixing Q.
inline FieldElement galois_conj(const FieldElement& x) {
    require(x.field().degree() == 2, "galois_conj: degree-1 field has no nontrivial embedding");
    return FieldElement(x.a(), -x.b(), x.field());
}

// x * sigma(x) for quadratic fields; x itself for Q.
inline Rational element_norm(const FieldElement& x) {
    if (x.field().degree() == 1) return x.a();
    return x.a() * x.a() - x.b() * x.b() * x.field().d_rational();
}

// Exact sign of the image of x under the identity embedding (real fields only).
inline int sign_identity(const FieldElement& x) {
    require(x.field().is_real(), "sign_identity: imaginary field is not ordered");
    int sa = sign(x.a());
    int sb = sign(x.b());
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 against b^2 d exactly
    int cmp = sign(Rational(x.a() * x.a() - x.b() * x.b() * x.field().d_rational()));
    return sa > 0 ? cmp : -cmp;
}

// Exact sign of sigma(x) = a - b sqrt(d) (real quadratic fields).
inline int sign_conjugate(const FieldElement& x) {
    return sign_identity(galois_conj(x));
}

inline FieldElement abs_identity(const FieldElement& x) {
    return sign_identity(x) < 0 ? -x : x;
}

// exact comparison of identity embeddings: sign of x - y
inline int compare_identity(const FieldElement& x, const FieldElement& y) {
    return sign_identity(x - y);
}

// |x|^2 = a^2 + |d| b^2 under the complex embedding (imaginary fields);
// coincides with element_norm there.
inline Rational complex_norm(const FieldElement& x) {
    require(x.field().degree() == 1 || x.field().is_imaginary(),
            "complex_norm: element of a real quadratic field is not a complex scalar");
    if (x.field().degree() == 1) return x.a() * x.a();
    return element_norm(x);
}

inline bool is_ring_integer(const FieldElement& x) {
    if (x.field().degree() == 1) return is_integer(x.a());
    if (x.field().half_basis()) {
        // (p + q sqrt(d))/2 with p == q mod 2
        Rational p = 2 * x.a(), q = 2 * x.b();
        if (!is_integer(p) || !is_integer(q)) return false;
        return (p.get_num() - q.get_num()) % 2 == 0;
    }
    return is_integer(x.a()) && is_integer(x.b());
}

// An element of the ring of integers O_k; membership checked at construction.
class RingInteger {
public:
    explicit RingInteger(FieldElement value) : value_(std::move(value)) {
        require(is_ring_integer(value_),
                "RingInteger: coordinates do not lie in the ring of integers");
    }

    RingInteger(Rational a, FieldDescriptor field) : RingInteger(FieldElement(std::move(a), field)) {}
    RingInteger(Rational a, Rational b, FieldDescriptor field)
        : RingInteger(FieldElement(std::move(a), std::move(b), field)) {}

    static RingInteger zero(FieldDescriptor field) { return RingInteger(FieldElement::zero(field)); }
    static RingInteger one(FieldDescriptor field) { return RingInteger(FieldElement::one(field)); }

    const FieldElement& value() const { return value_; }
    const FieldDescriptor& field() const { return value_.field(); }
    bool is_zero() const { return value_.is_zero(); }

    bool operator==(const RingInteger& rhs) const { return value_ == rhs.value_; }

    RingInteger operator-() const { return RingInteger(-value_); }
    RingInteger operator+(const RingInteger& rhs) const { return RingInteger(value_ + rhs.value_); }
    RingInteger operator-(const RingInteger& rhs) const { return RingInteger(value_ - rhs.value_); }
    RingInteger operator*(const RingInteger& rhs) const { return RingInteger(value_ * rhs.value_); }

    // doubled coordinates (u, v): value = (u + v sqrt(d)) / denom, both integers
    struct Coordinates {
        Integer u, v;
        int denom;
    };

    Coordinates coordinates() const {
        int denom = field().half_basis() ? 2 : 1;
        Rational u = denom * value_.a(), v = denom * value_.b();
        return Coordinates{u.get_num(), v.get_num(), denom};
    }

private:
    FieldElement value_;
};

// |N_{k/Q}(alpha)| as a nonnegative integer; multiplicative.
inline Integer ideal_norm(const RingInteger& alpha) {
    require(!alpha.is_zero(), "ideal_norm: zero element generates the zero ideal");
    Rational n = element_norm(alpha.value());
    ensure(is_integer(n), "ideal_norm: norm of a ring integer must be a rational integer");
    Integer z = n.get_num();
    return z < 0 ? Integer(-z) : z;
}

// true iff x / alpha lies in O_k
inline bool divides(const RingInteger& alpha, const RingInteger& x) {
    require(!alpha.is_zero(), "divides: division by zero");
    return is_ring_integer(x.value() / alpha.value());
}

inline bool divides(const RingInteger& alpha, const FieldElement& x) {
    require(!alpha.is_zero(), "divides: division by zero");
    return is_ring_integer(x / alpha.value());
}

// ---- serialization: "a+b*sqrt(d)" with rationals in "p/q" form ----

inline std::string to_string(const FieldElement& x) {
    if (x.field().degree() == 1) return to_string(x.a());
    std::string out = to_string(x.a());
    if (sign(x.b()) >= 0)
        out += "+" + to_string(x.b());
    else
        out += "-" + to_string(Rational(-x.b()));
    out += "*sqrt(" + std::to_string(x.field().d()) + ")";
    return out;
}

inline std::string to_string(const RingInteger& x) { return to_string(x.value()); }

namespace detail {

struct ParsedTerm {
    Rational coeff;
    bool has_root = false;
    long long d = 0;
};

inline ParsedTerm parse_term(const std::string& s) {
    ParsedTerm t{Rational(1), false, 0};
    std::string body = s;
    std::size_t star = body.find("*sqrt(");
    std::size_t plain = body.rfind("sqrt(", 0);
    if (star != std::string::npos) {
        t.coeff = parse_rational(body.substr(0, star));
        body = body.substr(star + 1);
        plain = 0;
    }
    if (plain == 0 && body.rfind("sqrt(", 0) == 0) {
        require(body.back() == ')', "parse: unterminated sqrt in '" + s + "'");
        std::string inner = body.substr(5, body.size() - 6);
        try {
            t.d = std::stoll(inner);
        } catch (...) {
            throw precondition_error("parse: bad sqrt argument '" + inner + "'");
        }
        t.has_root = true;
        return t;
    }
    require(star == std::string::npos, "parse: malformed term '" + s + "'");
    t.coeff = parse_rational(body);
    return t;
}

} // namespace detail

// Accepts "a", "a+b*sqrt(d)", "a-b*sqrt(d)", "b*sqrt(d)", "sqrt(d)" and
// signed/whitespace variants. When `expected` is given the element is
// coerced into (and checked against) that field.
inline FieldElement parse_field_element(const std::string& text,
                                        std::optional<FieldDescriptor> expected = std::nullopt) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s += c;
    require(!s.empty(), "parse: empty field element");

    Rational a(0), b(0);
    std::optional<long long> seen_d;
    std::size_t i = 0;
    while (i < s.size()) {
        int sgn_term = 1;
        if (s[i] == '+' || s[i] == '-') {
            sgn_term = s[i] == '-' ? -1 : 1;
            ++i;
        }
        // scan until the next top-level +/- (signs directly after '*' or '(' belong to the term)
        std::size_t j = i;
        int depth = 0;
        while (j < s.size()) {
            char c = s[j];
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if ((c == '+' || c == '-') && depth == 0 && j > i && s[j - 1] != '*' && s[j - 1] != '/')
                break;
            ++j;
        }
        require(j > i, "parse: malformed field element '" + text + "'");
        auto term = detail::parse_term(s.substr(i, j - i));
        if (term.has_root) {
            require(!seen_d || *seen_d == term.d, "parse: mixed radicands in '" + text + "'");
            seen_d = term.d;
            b += sgn_term * term.coeff;
        } else {
            a += sgn_term * term.coeff;
        }
        i = j;
    }

    FieldDescriptor field = FieldDescriptor::rationals();
    if (expected) {
        field = *expected;
        if (seen_d) {
            require(field.degree() == 2 && field.d() == *seen_d,
                    "parse: element of Q(sqrt(" + std::to_string(*seen_d) + ")) does not live in " + field.name());
        }
    } else if (seen_d) {
        field = FieldDescriptor::quadratic(*seen_d);
    }
    if (field.degree() == 1) {
        require(b == 0, "parse: sqrt term in a rational-field element");
        return FieldElement(a, field);
    }
    return FieldElement(a, b, field);
}

inline RingInteger parse_ring_integer(const std::string& text,
                                      std::optional<FieldDescriptor> expected = std::nullopt) {
    return RingInteger(parse_field_element(text, expected));
}

} // namespace systolic
