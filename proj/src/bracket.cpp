#include "usl3/bracket.hpp"

#include <map>
#include <random>
#include <set>

namespace usl3 {

namespace {

int third_edge_at(const Web& w, int v, int e1, int e2) {
    for (auto& d : w.verts.at(v).rot)
        if (d.edge != e1 && d.edge != e2) return d.edge;
    throw InternalError("no third edge at vertex");
}

// join the strand running into vertex `vin` along ein with the strand
// leaving vertex `vout` along eout; vin/vout themselves are being deleted
void join_externals(Web& w, int ein, int vin, int eout, int vout, int fresh) {
    if (ein == eout) {
        // closes into a free loop
        WebEdge e;
        e.mark = w.edges.at(ein).mark;
        w.edges.erase(ein);
        w.edges[fresh] = e;
        return;
    }
    WebEdge a = w.edges.at(ein);  // head at vin
    WebEdge b = w.edges.at(eout); // tail at vout
    WebEdge n;
    n.tail = a.tail;
    n.head = b.head;
    n.mark = a.mark || b.mark;
    if (a.head != vin || b.tail != vout) throw InternalError("join_externals: endpoint mismatch");
    w.edges.erase(ein);
    w.edges.erase(eout);
    w.edges[fresh] = n;
    if (n.tail >= 0 && w.verts.count(n.tail)) {
        for (auto& d : w.verts.at(n.tail).rot)
            if (d.edge == ein && d.end == 0) d = Dart{fresh, 0};
    }
    if (n.head >= 0 && w.verts.count(n.head)) {
        for (auto& d : w.verts.at(n.head).rot)
            if (d.edge == eout && d.end == 1) d = Dart{fresh, 1};
    }
}

} // namespace

Web remove_loop(const Web& w, int loop_edge) {
    if (!w.edges.at(loop_edge).is_loop()) throw InternalError("remove_loop: not a free loop");
    Web out = w;
    out.edges.erase(loop_edge);
    return out;
}

Web collapse_digon(const Web& w, const FaceLocation& digon, int* joined_edge_out) {
    int p = digon.edge_cycle[0], q = digon.edge_cycle[1];
    const WebEdge& pe = w.edges.at(p);
    int u = pe.head, v = pe.tail; // u all-in, v all-out
    int ein = third_edge_at(w, u, p, q);
    int eout = third_edge_at(w, v, p, q);
    Web out = w;
    int fresh = out.fresh_edge_id();
    out.edges.erase(q);
    out.verts.erase(u);
    out.verts.erase(v);
    // temporarily remove p so join sees only the externals
    out.edges.erase(p);
    // re-add ein/eout handling via helper on the reduced web
    // (join_externals expects ein head at u, eout tail at v)
    if (w.edges.at(ein).head != u || w.edges.at(eout).tail != v)
        throw InternalError("collapse_digon: orientation mismatch");
    join_externals(out, ein, u, eout, v, fresh);
    if (joined_edge_out) *joined_edge_out = ein == eout ? fresh : fresh;
    return out;
}

Web reconnect_square(const Web& w, const FaceLocation& square, int which) {
    // face cycle: edges e0..e3 with vert_cycle[i] the vertex after edge i
    const auto& ec = square.edge_cycle;
    const auto& vc = square.vert_cycle;
    Web out = w;
    // externals at the four corners
    std::array<int, 4> ext{};
    for (int i = 0; i < 4; ++i) {
        int eprev = ec[i];
        int enext = ec[(i + 1) % 4];
        ext[i] = third_edge_at(w, vc[i], eprev, enext);
    }
    for (int e : ec) out.edges.erase(e);
    std::array<bool, 4> vin{};
    for (int i = 0; i < 4; ++i) vin[i] = w.verts.at(vc[i]).all_in;
    for (int i = 0; i < 4; ++i) out.verts.erase(vc[i]);

    // an external may get replaced by an earlier join (it can connect two
    // square corners)
    std::map<int, int> repl;
    auto resolve = [&](int e) {
        while (repl.count(e)) e = repl.at(e);
        return e;
    };
    auto join_pair = [&](int i, int j) {
        // one of vc[i], vc[j] is a sink, the other a source
        int fresh = out.fresh_edge_id();
        int ei = resolve(ext[i]), ej = resolve(ext[j]);
        if (vin[i]) {
            join_externals(out, ei, vc[i], ej, vc[j], fresh);
        } else {
            join_externals(out, ej, vc[j], ei, vc[i], fresh);
        }
        repl[ei] = fresh;
        if (ej != ei) repl[ej] = fresh;
    };
    if (which == 0) {
        join_pair(0, 1);
        join_pair(2, 3);
    } else {
        join_pair(1, 2);
        join_pair(3, 0);
    }
    return out;
}

namespace {

LaurentPoly bracket_impl(const Web& w, std::map<std::string, LaurentPoly>& memo,
                         std::mt19937_64* rng) {
    if (w.empty()) return LaurentPoly(Int(1));
    std::string key = w.canonical_key();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    FaceLocation loc;
    if (!rng) {
        loc = find_face(w);
    } else {
        // choose uniformly among all reducible faces
        std::vector<FaceLocation> cands;
        for (auto& [eid, e] : w.edges)
            if (e.is_loop()) {
                FaceLocation l;
                l.kind = FaceLocation::Circle;
                l.loop_edge = eid;
                cands.push_back(l);
            }
        for (auto& f : enumerate_faces(w)) {
            std::set<int> es(f.edge_cycle.begin(), f.edge_cycle.end());
            std::set<int> vs(f.vert_cycle.begin(), f.vert_cycle.end());
            if (f.edge_cycle.size() == 2 && es.size() == 2) {
                FaceLocation l;
                l.kind = FaceLocation::Digon;
                l.edge_cycle = f.edge_cycle;
                l.vert_cycle = f.vert_cycle;
                cands.push_back(l);
            } else if (f.edge_cycle.size() == 4 && es.size() == 4 && vs.size() == 4) {
                FaceLocation l;
                l.kind = FaceLocation::Square;
                l.edge_cycle = f.edge_cycle;
                l.vert_cycle = f.vert_cycle;
                cands.push_back(l);
            }
        }
        if (cands.empty())
            throw InternalError("nonempty closed web without reducible face: " + key);
        loc = cands[(*rng)() % cands.size()];
    }

    LaurentPoly result;
    switch (loc.kind) {
        case FaceLocation::Circle:
            result = LaurentPoly::quantum3() * bracket_impl(remove_loop(w, loc.loop_edge), memo, rng);
            break;
        case FaceLocation::Digon:
            result = LaurentPoly::quantum2() * bracket_impl(collapse_digon(w, loc), memo, rng);
            break;
        case FaceLocation::Square:
            result = bracket_impl(reconnect_square(w, loc, 0), memo, rng) +
                     bracket_impl(reconnect_square(w, loc, 1), memo, rng);
            break;
        default:
            throw InternalError("nonempty closed web without reducible face: " + key);
    }
    memo[key] = result;
    return result;
}

} // namespace

LaurentPoly kuperberg_bracket(const Web& w) {
    std::string err = w.validate();
    if (!err.empty()) throw InternalError("kuperberg_bracket: invalid web: " + err);
    std::map<std::string, LaurentPoly> memo;
    return bracket_impl(w, memo, nullptr);
}

LaurentPoly kuperberg_bracket_randomized(const Web& w, unsigned long long seed) {
    std::string err = w.validate();
    if (!err.empty()) throw InternalError("kuperberg_bracket: invalid web: " + err);
    std::map<std::string, LaurentPoly> memo;
    std::mt19937_64 rng(seed);
    return bracket_impl(w, memo, &rng);
}

} // namespace usl3
