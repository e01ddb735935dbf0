#include <algorithm>
#include <array>
#include <functional>
#include <map>

#include "usl3/eval.hpp"

namespace usl3 {

namespace {

// polynomials in the three roots X1, X2, X3
struct P3 {
    std::map<std::array<int, 3>, Int> t;

    static P3 one() {
        P3 p;
        p.t[{0, 0, 0}] = 1;
        return p;
    }
    bool zero() const { return t.empty(); }
    void add(const std::array<int, 3>& m, const Int& c) {
        auto it = t.find(m);
        if (it == t.end()) {
            if (c != 0) t[m] = c;
        } else {
            it->second += c;
            if (it->second == 0) t.erase(it);
        }
    }
    P3 operator+(const P3& o) const {
        P3 r = *this;
        for (auto& [m, c] : o.t) r.add(m, c);
        return r;
    }
    P3 operator-(const P3& o) const {
        P3 r = *this;
        for (auto& [m, c] : o.t) r.add(m, -c);
        return r;
    }
    P3 operator*(const P3& o) const {
        P3 r;
        for (auto& [m1, c1] : t)
            for (auto& [m2, c2] : o.t)
                r.add({m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]}, c1 * c2);
        return r;
    }
    P3 operator*(const Int& k) const {
        P3 r;
        if (k == 0) return r;
        for (auto& [m, c] : t) r.t[m] = c * k;
        return r;
    }
};

// X_a - X_b as a polynomial (0-indexed variables)
P3 var_diff(int a, int b) {
    P3 p;
    std::array<int, 3> m1{0, 0, 0}, m2{0, 0, 0};
    m1[a] = 1;
    m2[b] = 1;
    p.t[m1] = 1;
    p.t[m2] = -1;
    return p;
}

P3 var_pow(int a, int e) {
    P3 p;
    std::array<int, 3> m{0, 0, 0};
    m[a] = e;
    p.t[m] = 1;
    return p;
}

// exact division by (X_a - X_b), a < b in lex priority
P3 divide_exact(P3 p, int a, int b) {
    P3 q;
    while (!p.zero()) {
        // leading monomial, lex order prioritizing X_a
        auto lead = p.t.begin();
        for (auto it = p.t.begin(); it != p.t.end(); ++it) {
            auto key = [&](const std::array<int, 3>& m) {
                return std::array<int, 3>{m[a], m[b], m[3 - a - b]};
            };
            if (key(it->first) > key(lead->first)) lead = it;
        }
        auto [m, c] = *lead;
        if (m[a] == 0) throw InternalError("state sum: inexact division by a root difference");
        std::array<int, 3> mt = m;
        mt[a] -= 1;
        P3 term;
        term.t[mt] = c;
        q = q + term;
        p = p - term * var_diff(a, b);
    }
    return q;
}

// rewrite a symmetric polynomial in elementary symmetric functions and
// substitute e1 = a, e2 = -b, e3 = c
GroundElt to_ground(P3 p) {
    P3 e1, e2, e3;
    e1.t[{1, 0, 0}] = 1;
    e1.t[{0, 1, 0}] = 1;
    e1.t[{0, 0, 1}] = 1;
    e2.t[{1, 1, 0}] = 1;
    e2.t[{1, 0, 1}] = 1;
    e2.t[{0, 1, 1}] = 1;
    e3.t[{1, 1, 1}] = 1;
    GroundElt out;
    int guard = 0;
    while (!p.zero()) {
        if (++guard > 100000) throw InternalError("state sum: symmetric reduction diverged");
        auto lead = p.t.rbegin(); // std::map is lex-ordered; rbegin is the lex max
        auto [m, c] = *lead;
        if (!(m[0] >= m[1] && m[1] >= m[2]))
            throw InternalError("state sum produced a non-symmetric polynomial");
        int p1 = m[0] - m[1], p2 = m[1] - m[2], p3 = m[2];
        Int coeff = c * ((p2 % 2 == 0) ? 1 : -1); // e2 = -b
        out += GroundElt::monomial(p1, p2, p3, coeff);
        P3 sub = P3::one();
        for (int i = 0; i < p1; ++i) sub = sub * e1;
        for (int i = 0; i < p2; ++i) sub = sub * e2;
        for (int i = 0; i < p3; ++i) sub = sub * e3;
        p = p - sub * c;
    }
    return out;
}

int perm_sign(int a, int b, int c) {
    // sign of (a,b,c) as a permutation of (0,1,2)
    int inv = 0;
    int v[3] = {a, b, c};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (v[i] > v[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

} // namespace

GroundElt evaluate_statesum(const AbstractFoam& f) {
    size_t n = f.facets.size();
    if (n == 0) return GroundElt::one();

    std::vector<int> color(n, -1);
    std::vector<std::vector<int>> colorings;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == n) {
            colorings.push_back(color);
            return;
        }
        for (int c = 0; c < 3; ++c) {
            color[i] = c;
            bool ok = true;
            for (auto& circ : f.circles) {
                for (int s = 0; s < 3 && ok; ++s) {
                    int gA = circ.germ[s], gB = circ.germ[(s + 1) % 3];
                    if ((size_t)gA <= i && (size_t)gB <= i && color[gA] == color[gB]) ok = false;
                }
                if (!ok) break;
            }
            if (ok) rec(i + 1);
        }
        color[i] = -1;
    };
    rec(0);

    if (colorings.empty()) return GroundElt::zero();

    struct TermData {
        std::array<int, 3> chiF;   // chi of F_1, F_2, F_3
        int sgn;                   // total sign
        std::array<int, 3> dotexp; // dot exponents per color
        std::array<int, 3> eij;    // chi(F_ij)/2 for pairs (0,1),(0,2),(1,2)
    };
    std::vector<TermData> terms;
    for (auto& col : colorings) {
        TermData td{};
        for (size_t i = 0; i < n; ++i) {
            td.chiF[col[i]] += f.facets[i].chi;
            td.dotexp[col[i]] += f.facets[i].dots;
        }
        int sexp = 1 * td.chiF[0] + 2 * td.chiF[1] + 3 * td.chiF[2];
        if (sexp % 2 != 0) throw InternalError("state sum: odd sign exponent");
        td.sgn = ((sexp / 2) % 2 == 0) ? 1 : -1;
        for (auto& circ : f.circles)
            td.sgn *= perm_sign(col[circ.germ[0]], col[circ.germ[1]], col[circ.germ[2]]);
        auto half = [&](int x) {
            if (x % 2 != 0) throw InternalError("state sum: odd bicolored Euler characteristic");
            return x / 2;
        };
        td.eij = {half(td.chiF[0] + td.chiF[1]), half(td.chiF[0] + td.chiF[2]),
                  half(td.chiF[1] + td.chiF[2])};
        terms.push_back(td);
    }

    std::array<int, 3> E{0, 0, 0};
    for (auto& td : terms)
        for (int k = 0; k < 3; ++k) E[k] = std::max(E[k], td.eij[k]);

    const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    P3 total;
    for (auto& td : terms) {
        P3 term = P3::one() * Int(td.sgn);
        for (int c = 0; c < 3; ++c)
            if (td.dotexp[c]) term = term * var_pow(c, td.dotexp[c]);
        for (int k = 0; k < 3; ++k) {
            int extra = E[k] - td.eij[k];
            for (int t = 0; t < extra; ++t) term = term * var_diff(pairs[k].first, pairs[k].second);
        }
        total = total + term;
    }
    for (int k = 0; k < 3; ++k)
        for (int t = 0; t < E[k]; ++t) total = divide_exact(total, pairs[k].first, pairs[k].second);

    return to_ground(total);
}

GroundElt evaluate_statesum(const FoamMovie& m) { return evaluate_statesum(extract_closed(m)); }

GroundElt evaluate_statesum(const FoamExpression& e) {
    GroundElt total;
    for (auto& [c, m] : e.terms) total += c * evaluate_statesum(m);
    return total;
}

} // namespace usl3
