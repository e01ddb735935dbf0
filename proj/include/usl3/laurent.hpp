#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "usl3/num.hpp"

namespace usl3 {

// Laurent polynomial in q with integer coefficients.
class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(const Int& n) { if (n != 0) c_[0] = n; }

    static LaurentPoly q_power(int e, const Int& coeff = 1) {
        LaurentPoly p;
        if (coeff != 0) p.c_[e] = coeff;
        return p;
    }
    // quantum integers [2] = q^-1+q, [3] = q^-2+1+q^2
    static LaurentPoly quantum2() { LaurentPoly p; p.c_[-1] = 1; p.c_[1] = 1; return p; }
    static LaurentPoly quantum3() { LaurentPoly p; p.c_[-2] = 1; p.c_[0] = 1; p.c_[2] = 1; return p; }

    bool is_zero() const { return c_.empty(); }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (auto& [e, v] : o.c_) add(e, v);
        return *this;
    }
    LaurentPoly operator+(const LaurentPoly& o) const { LaurentPoly r = *this; r += o; return r; }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (auto& [e, v] : o.c_) add(e, -v);
        return *this;
    }
    LaurentPoly operator-(const LaurentPoly& o) const { LaurentPoly r = *this; r -= o; return r; }
    LaurentPoly operator*(const LaurentPoly& o) const {
        LaurentPoly r;
        for (auto& [e1, v1] : c_)
            for (auto& [e2, v2] : o.c_) r.add(e1 + e2, v1 * v2);
        return r;
    }
    LaurentPoly operator*(const Int& n) const {
        LaurentPoly r;
        for (auto& [e, v] : c_) r.add(e, v * n);
        return r;
    }
    LaurentPoly shifted(int j) const {
        LaurentPoly r;
        for (auto& [e, v] : c_) r.c_[e + j] = v;
        return r;
    }
    bool operator==(const LaurentPoly& o) const { return c_ == o.c_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    bool palindromic() const {
        for (auto& [e, v] : c_) {
            auto it = c_.find(-e);
            if (it == c_.end() || it->second != v) return false;
        }
        return true;
    }

    Int eval_at_one() const {
        Int s = 0;
        for (auto& [e, v] : c_) { (void)e; s += v; }
        return s;
    }

    const std::map<int, Int>& coeffs() const { return c_; }

    std::string to_string() const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [e, v] : c_) {
            Int coeff = v;
            if (first) {
                if (coeff < 0) { os << "-"; coeff = -coeff; }
            } else {
                os << (coeff < 0 ? " - " : " + ");
                if (coeff < 0) coeff = -coeff;
            }
            first = false;
            if (e == 0) { os << coeff.str(); continue; }
            if (coeff != 1) os << coeff.str() << "*";
            os << "q";
            if (e != 1) os << "^" << e;
        }
        return os.str();
    }

private:
    void add(int e, const Int& v) {
        auto it = c_.find(e);
        if (it == c_.end()) {
            if (v != 0) c_[e] = v;
        } else {
            it->second += v;
            if (it->second == 0) c_.erase(it);
        }
    }
    std::map<int, Int> c_;
};

// Laurent polynomial in t and q, for Poincare polynomials.
class Poincare {
public:
    void add(int t, int q, const Int& v) {
        auto key = std::make_pair(t, q);
        auto it = c_.find(key);
        if (it == c_.end()) {
            if (v != 0) c_[key] = v;
        } else {
            it->second += v;
            if (it->second == 0) c_.erase(it);
        }
    }
    bool operator==(const Poincare& o) const { return c_ == o.c_; }
    bool operator!=(const Poincare& o) const { return !(*this == o); }
    bool empty() const { return c_.empty(); }

    LaurentPoly graded_euler() const {
        LaurentPoly e;
        for (auto& [k, v] : c_) e += LaurentPoly::q_power(k.second, k.first % 2 == 0 ? v : -v);
        return e;
    }

    const std::map<std::pair<int, int>, Int>& coeffs() const { return c_; }

    std::string to_string() const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [k, v] : c_) {
            Int coeff = v;
            if (first) {
                if (coeff < 0) { os << "-"; coeff = -coeff; }
            } else {
                os << (coeff < 0 ? " - " : " + ");
                if (coeff < 0) coeff = -coeff;
            }
            first = false;
            bool have = false;
            if (coeff != 1 || (k.first == 0 && k.second == 0)) { os << coeff.str(); have = true; }
            auto emit = [&](const char* n, int e) {
                if (!e) return;
                if (have) os << "*";
                os << n;
                if (e != 1) os << "^" << e;
                have = true;
            };
            emit("t", k.first);
            emit("q", k.second);
        }
        return os.str();
    }

private:
    std::map<std::pair<int, int>, Int> c_;
};

} // namespace usl3
