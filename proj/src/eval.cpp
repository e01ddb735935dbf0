#include "usl3/eval.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace usl3 {

GroundElt sphere_value(int dots) {
    if (dots < 2) return GroundElt::zero();
    if (dots == 2) return GroundElt(-1);
    // (3D): trade three dots for a,b,c
    return GroundElt::var_a() * sphere_value(dots - 1) +
           GroundElt::var_b() * sphere_value(dots - 2) +
           GroundElt::var_c() * sphere_value(dots - 3);
}

GroundElt theta_value(int d1, int d2, int d3) {
    if (d1 >= 3)
        return GroundElt::var_a() * theta_value(d1 - 1, d2, d3) +
               GroundElt::var_b() * theta_value(d1 - 2, d2, d3) +
               GroundElt::var_c() * theta_value(d1 - 3, d2, d3);
    if (d2 >= 3)
        return GroundElt::var_a() * theta_value(d1, d2 - 1, d3) +
               GroundElt::var_b() * theta_value(d1, d2 - 2, d3) +
               GroundElt::var_c() * theta_value(d1, d2 - 3, d3);
    if (d3 >= 3)
        return GroundElt::var_a() * theta_value(d1, d2, d3 - 1) +
               GroundElt::var_b() * theta_value(d1, d2, d3 - 2) +
               GroundElt::var_c() * theta_value(d1, d2, d3 - 3);
    // (Theta): +1 on (1,2,0) up to cyclic rotation, -1 on (2,1,0) up to cyclic
    auto cyc = [&](int a, int b, int c) {
        return (d1 == a && d2 == b && d3 == c) || (d1 == b && d2 == c && d3 == a) ||
               (d1 == c && d2 == a && d3 == b);
    };
    if (cyc(1, 2, 0)) return GroundElt(1);
    if (cyc(2, 1, 0)) return GroundElt(-1);
    return GroundElt::zero();
}

std::array<std::array<GroundElt, 3>, 3> circle_pairing() {
    std::array<std::array<GroundElt, 3>, 3> p;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p[i][j] = sphere_value(i + j);
    return p;
}

std::array<std::array<GroundElt, 3>, 3> circle_pairing_inverse() {
    // adjugate; det(P) = 1 over Z[a,b,c]
    auto p = circle_pairing();
    auto det2 = [&](int r1, int c1, int r2, int c2) {
        return p[r1][c1] * p[r2][c2] - p[r1][c2] * p[r2][c1];
    };
    GroundElt det = p[0][0] * det2(1, 1, 1, 2, 2, 2);
    // full 3x3 determinant
    det = p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) -
          p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0]) +
          p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0]);
    if (!(det == GroundElt(1) || det == GroundElt(-1)))
        throw InternalError("circle pairing is not unimodular: det = " + det.to_string());
    int s = det == GroundElt(1) ? 1 : -1;
    std::array<std::array<GroundElt, 3>, 3> inv;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r1 = (j + 1) % 3, r2 = (j + 2) % 3;
            int c1 = (i + 1) % 3, c2 = (i + 2) % 3;
            // cofactor with sign folded into the cyclic index choice
            GroundElt cof = p[r1][c1] * p[r2][c2] - p[r1][c2] * p[r2][c1];
            inv[i][j] = s > 0 ? cof : -cof;
        }
    return inv;
}

namespace {

using Measure = std::tuple<int, int, int, int, int>; // circles, genus, excess, dots, facets

Measure measure_of(const AbstractFoam& f) {
    int genus = 0, excess = 0, dots = 0;
    std::vector<int> slot_count(f.facets.size(), 0);
    for (auto& c : f.circles)
        for (int g : c.germ) slot_count[g]++;
    for (size_t i = 0; i < f.facets.size(); ++i) {
        genus += f.facets[i].genus();
        excess += std::max(0, slot_count[i] - 1);
        dots += f.facets[i].dots;
    }
    return {(int)f.circles.size(), genus, excess, dots, (int)f.facets.size()};
}

std::vector<AbstractFoam> components(const AbstractFoam& f) {
    // union facets through circles
    std::vector<int> parent(f.facets.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& c : f.circles) {
        find(c.germ[0]);
        parent[find(c.germ[1])] = find(c.germ[0]);
        parent[find(c.germ[2])] = find(c.germ[0]);
    }
    std::map<int, int> comp_ix;
    std::vector<AbstractFoam> out;
    std::vector<std::map<int, int>> relabel;
    for (size_t i = 0; i < f.facets.size(); ++i) {
        int r = find((int)i);
        if (!comp_ix.count(r)) {
            comp_ix[r] = (int)out.size();
            out.emplace_back();
            relabel.emplace_back();
        }
        int ci = comp_ix[r];
        relabel[ci][(int)i] = (int)out[ci].facets.size();
        out[ci].facets.push_back(f.facets[i]);
    }
    for (auto& c : f.circles) {
        int ci = comp_ix[find(c.germ[0])];
        AbstractFoam::Circle nc = c;
        for (int i = 0; i < 3; ++i) nc.germ[i] = relabel[ci].at(c.germ[i]);
        out[ci].circles.push_back(nc);
    }
    return out;
}

struct Evaluator {
    std::map<std::string, GroundElt> memo;
    TraceSink trace;

    GroundElt eval(const AbstractFoam& f, const Measure* bound);
    GroundElt eval_component(const AbstractFoam& f, const Measure* bound);
};

GroundElt Evaluator::eval(const AbstractFoam& f, const Measure* bound) {
    GroundElt result = GroundElt::one();
    for (auto& comp : components(f)) {
        result *= eval_component(comp, bound);
        if (result.is_zero()) return result;
    }
    return result;
}

GroundElt Evaluator::eval_component(const AbstractFoam& f, const Measure* bound) {
    if (f.facets.empty()) return GroundElt::one();
    Measure me = measure_of(f);
    if (bound && !(me < *bound))
        throw InternalError("closed-foam evaluation: termination measure failed to decrease");
    std::string key = f.canonical_key();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (trace) trace("eval " + key);

    auto done = [&](const GroundElt& v) {
        memo[key] = v;
        if (trace) trace("  = " + v.to_string());
        return v;
    };

    std::vector<int> slot_count(f.facets.size(), 0);
    for (auto& c : f.circles)
        for (int g : c.germ) slot_count[g]++;

    // (3D): at most two dots per facet
    for (size_t i = 0; i < f.facets.size(); ++i) {
        if (f.facets[i].dots < 3) continue;
        GroundElt coeffs[3] = {GroundElt::var_a(), GroundElt::var_b(), GroundElt::var_c()};
        GroundElt total;
        for (int k = 0; k < 3; ++k) {
            AbstractFoam g = f;
            g.facets[i].dots -= k + 1;
            total += coeffs[k] * eval_component(g, &me);
        }
        return done(total);
    }

    // twisted circles kill every admissible coloring; the state sum
    // evaluates such components to zero
    for (auto& c : f.circles)
        if (c.twisted()) return done(GroundElt::zero());

    // closed surface components
    if (f.circles.empty()) {
        if (f.facets.size() != 1)
            throw InternalError("evaluation: disconnected component");
        const auto& fc = f.facets[0];
        if (fc.boundary_circles != 0) throw InternalError("evaluation: stray boundary");
        int g = fc.genus();
        if (g == 0) return done(sphere_value(fc.dots));
        // (CN) along a genus-reducing circle
        AbstractFoam g2 = f;
        g2.facets[0].chi += 2;
        GroundElt total;
        {
            AbstractFoam t = g2;
            t.facets[0].dots += 2;
            total += GroundElt(-3) * eval_component(t, &me);
        }
        {
            AbstractFoam t = g2;
            t.facets[0].dots += 1;
            total += GroundElt(2) * GroundElt::var_a() * eval_component(t, &me);
        }
        total += GroundElt::var_b() * eval_component(g2, &me);
        return done(total);
    }

    // positive-genus facet: genus-reducing (CN) cut
    for (size_t i = 0; i < f.facets.size(); ++i) {
        if (f.facets[i].genus() <= 0) continue;
        AbstractFoam g2 = f;
        g2.facets[i].chi += 2;
        GroundElt total;
        {
            AbstractFoam t = g2;
            t.facets[i].dots += 2;
            total += GroundElt(-3) * eval_component(t, &me);
        }
        {
            AbstractFoam t = g2;
            t.facets[i].dots += 1;
            total += GroundElt(2) * GroundElt::var_a() * eval_component(t, &me);
        }
        total += GroundElt::var_b() * eval_component(g2, &me);
        return done(total);
    }

    // bubble collapse: a circle two of whose germs are disks
    for (size_t ci = 0; ci < f.circles.size(); ++ci) {
        const auto& c = f.circles[ci];
        auto is_disk = [&](int slot) {
            int g = c.germ[slot];
            return slot_count[g] == 1 && f.facets[g].boundary_circles == 1 &&
                   f.facets[g].chi == 1;
        };
        int p = -1;
        for (int s = 0; s < 3; ++s)
            if (is_disk((s + 1) % 3) && is_disk((s + 2) % 3)) {
                p = s;
                break;
            }
        if (p < 0) continue;
        int fp = c.germ[p];
        int fq = c.germ[(p + 1) % 3];
        int fr = c.germ[(p + 2) % 3];
        int dq = f.facets[fq].dots, dr = f.facets[fr].dots;
        // value vector v[k] = theta(k, dq, dr); dot coefficients = Pinv v
        auto pinv = circle_pairing_inverse();
        GroundElt coeff[3];
        for (int j = 0; j < 3; ++j) {
            coeff[j] = GroundElt::zero();
            for (int k = 0; k < 3; ++k) coeff[j] += pinv[j][k] * theta_value(k, dq, dr);
        }
        // remove the circle and both disks; cap the third facet
        GroundElt total;
        for (int j = 0; j < 3; ++j) {
            if (coeff[j].is_zero()) continue;
            AbstractFoam g = f;
            g.circles.erase(g.circles.begin() + ci);
            g.facets[fp].chi += 1;
            g.facets[fp].boundary_circles -= 1;
            g.facets[fp].dots += j;
            // drop fq, fr
            std::vector<int> relabel(f.facets.size(), -1);
            AbstractFoam h;
            for (size_t x = 0; x < g.facets.size(); ++x) {
                if ((int)x == fq || (int)x == fr) continue;
                relabel[x] = (int)h.facets.size();
                h.facets.push_back(g.facets[x]);
            }
            for (auto& cc : g.circles) {
                AbstractFoam::Circle nc = cc;
                for (int s = 0; s < 3; ++s) {
                    if (relabel[cc.germ[s]] < 0)
                        throw InternalError("bubble: removed facet still attached");
                    nc.germ[s] = relabel[cc.germ[s]];
                }
                h.circles.push_back(nc);
            }
            total += coeff[j] * eval(h, &me); // may disconnect
        }
        return done(total);
    }

    // separating (CN) cut on a facet with several boundary circles
    for (size_t i = 0; i < f.facets.size(); ++i) {
        if (slot_count[i] < 2) continue;
        // split the first slot off this facet
        int target_circle = -1, target_slot = -1;
        for (size_t ci = 0; ci < f.circles.size() && target_circle < 0; ++ci)
            for (int s = 0; s < 3; ++s)
                if (f.circles[ci].germ[s] == (int)i) {
                    target_circle = (int)ci;
                    target_slot = s;
                    break;
                }
        int dold = f.facets[i].dots;
        GroundElt total;
        struct T {
            int x, y;
            GroundElt c;
        };
        std::vector<T> ts = {{2, 0, GroundElt(-1)},        {1, 1, GroundElt(-1)},
                             {0, 2, GroundElt(-1)},        {1, 0, GroundElt::var_a()},
                             {0, 1, GroundElt::var_a()},   {0, 0, GroundElt::var_b()}};
        for (auto& t : ts) {
            AbstractFoam g = f;
            // new disk-ish facet taking the chosen slot
            AbstractFoam::Facet nf;
            nf.chi = 1;
            nf.boundary_circles = 1;
            nf.dots = t.x;
            int nfi = (int)g.facets.size();
            g.facets.push_back(nf);
            g.circles[target_circle].germ[target_slot] = nfi;
            g.facets[i].chi += 1;
            g.facets[i].boundary_circles -= 1;
            g.facets[i].dots = dold + t.y;
            total += t.c * eval(g, &me);
        }
        return done(total);
    }

    throw InternalError("closed-foam evaluation: no applicable reduction for " + key);
}

Evaluator g_eval; // memo shared across calls; values are pure

} // namespace

GroundElt evaluate_closed(const AbstractFoam& f, TraceSink trace) {
    Evaluator& ev = g_eval;
    ev.trace = trace;
    GroundElt r = ev.eval(f, nullptr);
    ev.trace = nullptr;
    return r;
}

GroundElt evaluate_closed(const FoamMovie& m, TraceSink trace) {
    return evaluate_closed(extract_closed(m), trace);
}

GroundElt evaluate_closed(const FoamExpression& e, TraceSink trace) {
    GroundElt total;
    for (auto& [c, m] : e.terms) total += c * evaluate_closed(m, trace);
    return total;
}

} // namespace usl3
