#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "usl3/num.hpp"

namespace usl3 {

// Element of the graded ring Z[a,b,c] with q(a)=2, q(b)=4, q(c)=6.
// Exact integer coefficients, normalized (no zero terms stored).
class GroundElt {
public:
    // exponent triple packed as (ea<<16)|(eb<<8)|ec; exponents stay tiny
    using Key = std::uint32_t;

    GroundElt() = default;
    explicit GroundElt(long n) { if (n != 0) terms_[0] = n; }
    explicit GroundElt(const Int& n) { if (n != 0) terms_[0] = n; }

    static GroundElt zero() { return GroundElt(); }
    static GroundElt one() { return GroundElt(1); }
    static GroundElt var_a() { return monomial(1, 0, 0, 1); }
    static GroundElt var_b() { return monomial(0, 1, 0, 1); }
    static GroundElt var_c() { return monomial(0, 0, 1, 1); }
    static GroundElt monomial(int ea, int eb, int ec, const Int& coeff);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // unit in Z[a,b,c], i.e. the constant +1 or -1
    bool is_unit() const;
    int unit_sign() const; // valid only if is_unit()

    GroundElt operator-() const;
    GroundElt& operator+=(const GroundElt& o);
    GroundElt& operator-=(const GroundElt& o);
    GroundElt operator+(const GroundElt& o) const { GroundElt r = *this; r += o; return r; }
    GroundElt operator-(const GroundElt& o) const { GroundElt r = *this; r -= o; return r; }
    GroundElt operator*(const GroundElt& o) const;
    GroundElt& operator*=(const GroundElt& o) { *this = *this * o; return *this; }
    GroundElt operator*(const Int& n) const;
    bool operator==(const GroundElt& o) const { return terms_ == o.terms_; }
    bool operator!=(const GroundElt& o) const { return !(*this == o); }
    bool operator<(const GroundElt& o) const { return terms_ < o.terms_; }

    // q-grading: homogeneous iff all monomials share 2ea+4eb+6ec.
    bool is_homogeneous(int* degree_out = nullptr) const;

    Rational substitute(const Rational& a, const Rational& b, const Rational& c) const;

    std::string to_string() const;

    const std::map<Key, Int>& terms() const { return terms_; }

private:
    static Key pack(int ea, int eb, int ec) {
        return (static_cast<Key>(ea) << 16) | (static_cast<Key>(eb) << 8) | static_cast<Key>(ec);
    }
    std::map<Key, Int> terms_;
};

inline GroundElt operator*(const Int& n, const GroundElt& p) { return p * n; }

} // namespace usl3
