#include "usl3/ground.hpp"

#include <sstream>

namespace usl3 {

GroundElt GroundElt::monomial(int ea, int eb, int ec, const Int& coeff) {
    GroundElt p;
    if (coeff != 0) p.terms_[pack(ea, eb, ec)] = coeff;
    return p;
}

bool GroundElt::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

bool GroundElt::is_unit() const {
    if (terms_.size() != 1) return false;
    auto& [k, v] = *terms_.begin();
    return k == 0 && (v == 1 || v == -1);
}

int GroundElt::unit_sign() const {
    return terms_.begin()->second > 0 ? 1 : -1;
}

GroundElt GroundElt::operator-() const {
    GroundElt r;
    for (auto& [k, v] : terms_) r.terms_[k] = -v;
    return r;
}

GroundElt& GroundElt::operator+=(const GroundElt& o) {
    for (auto& [k, v] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_[k] = v;
        } else {
            it->second += v;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

GroundElt& GroundElt::operator-=(const GroundElt& o) {
    for (auto& [k, v] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_[k] = -v;
        } else {
            it->second -= v;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

GroundElt GroundElt::operator*(const GroundElt& o) const {
    GroundElt r;
    for (auto& [k1, v1] : terms_)
        for (auto& [k2, v2] : o.terms_) {
            Key k = k1 + k2; // exponentwise add, no carries at sane sizes
            auto it = r.terms_.find(k);
            if (it == r.terms_.end()) {
                r.terms_[k] = v1 * v2;
                if (r.terms_[k] == 0) r.terms_.erase(k);
            } else {
                it->second += v1 * v2;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
    return r;
}

GroundElt GroundElt::operator*(const Int& n) const {
    GroundElt r;
    if (n == 0) return r;
    for (auto& [k, v] : terms_) r.terms_[k] = v * n;
    return r;
}

bool GroundElt::is_homogeneous(int* degree_out) const {
    if (terms_.empty()) {
        if (degree_out) *degree_out = 0;
        return true;
    }
    bool first = true;
    int deg = 0;
    for (auto& [k, v] : terms_) {
        (void)v;
        int ea = (k >> 16) & 0xff, eb = (k >> 8) & 0xff, ec = k & 0xff;
        int d = 2 * ea + 4 * eb + 6 * ec;
        if (first) {
            deg = d;
            first = false;
        } else if (d != deg) {
            return false;
        }
    }
    if (degree_out) *degree_out = deg;
    return true;
}

Rational GroundElt::substitute(const Rational& a, const Rational& b, const Rational& c) const {
    Rational total = 0;
    for (auto& [k, v] : terms_) {
        int ea = (k >> 16) & 0xff, eb = (k >> 8) & 0xff, ec = k & 0xff;
        Rational t(v);
        for (int i = 0; i < ea; ++i) t *= a;
        for (int i = 0; i < eb; ++i) t *= b;
        for (int i = 0; i < ec; ++i) t *= c;
        total += t;
    }
    return total;
}

std::string GroundElt::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, v] : terms_) {
        int ea = (k >> 16) & 0xff, eb = (k >> 8) & 0xff, ec = k & 0xff;
        Int coeff = v;
        if (first) {
            if (coeff < 0) { os << "-"; coeff = -coeff; }
        } else {
            os << (coeff < 0 ? " - " : " + ");
            if (coeff < 0) coeff = -coeff;
        }
        first = false;
        bool has_vars = ea || eb || ec;
        if (coeff != 1 || !has_vars) os << coeff.str();
        bool need_star = coeff != 1;
        auto emit = [&](const char* name, int e) {
            if (!e) return;
            if (need_star) os << "*";
            os << name;
            if (e > 1) os << "^" << e;
            need_star = true;
        };
        emit("a", ea);
        emit("b", eb);
        emit("c", ec);
    }
    return os.str();
}

} // namespace usl3
