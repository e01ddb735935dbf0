#include "usl3/web.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace usl3 {

namespace {

// directed dart: dir 0 runs tail->head, 1 runs head->tail
struct DDart {
    int edge;
    int dir;
    bool operator<(const DDart& o) const { return edge != o.edge ? edge < o.edge : dir < o.dir; }
    bool operator==(const DDart& o) const { return edge == o.edge && dir == o.dir; }
};

int origin(const Web& w, const DDart& d) {
    const WebEdge& e = w.edges.at(d.edge);
    return d.dir == 0 ? e.tail : e.head;
}

int rot_index(const WebVertex& v, int edge, int end) {
    for (int i = 0; i < 3; ++i)
        if (v.rot[i].edge == edge && v.rot[i].end == end) return i;
    return -1;
}

// next directed dart counterclockwise around the origin of d
DDart sigma(const Web& w, const DDart& d) {
    int v = origin(w, d);
    const WebVertex& vx = w.verts.at(v);
    int end_here = d.dir == 0 ? 0 : 1;
    int i = rot_index(vx, d.edge, end_here);
    if (i < 0) throw InternalError("web: dart missing from rotation");
    const Dart& nd = vx.rot[(i + 1) % 3];
    return DDart{nd.edge, nd.end == 0 ? 0 : 1};
}

DDart alpha(const DDart& d) { return DDart{d.edge, 1 - d.dir}; }

} // namespace

std::string Web::validate() const {
    for (auto& [eid, e] : edges) {
        if (e.is_loop()) {
            if (e.head >= 0) return "edge " + std::to_string(eid) + ": half-loop endpoints";
            continue;
        }
        if (!verts.count(e.tail) || !verts.count(e.head))
            return "edge " + std::to_string(eid) + ": dangling endpoint";
        if (e.tail == e.head) return "edge " + std::to_string(eid) + ": self-loop at a vertex";
    }
    std::map<std::pair<int, int>, int> seen; // (edge, end) -> vertex
    for (auto& [vid, v] : verts) {
        for (auto& d : v.rot) {
            if (!edges.count(d.edge)) return "vertex " + std::to_string(vid) + ": unknown edge";
            const WebEdge& e = edges.at(d.edge);
            if (e.is_loop()) return "vertex " + std::to_string(vid) + ": rotation references a free loop";
            int expect = d.end == 0 ? e.tail : e.head;
            if (expect != vid) return "vertex " + std::to_string(vid) + ": rotation end mismatch";
            bool incoming = d.end == 1;
            if (incoming != v.all_in)
                return "mixed orientation at vertex " + std::to_string(vid);
            auto key = std::make_pair(d.edge, d.end);
            if (seen.count(key)) return "dart used twice at edge " + std::to_string(d.edge);
            seen[key] = vid;
        }
    }
    for (auto& [eid, e] : edges) {
        if (e.is_loop()) continue;
        if (!seen.count({eid, 0}) || !seen.count({eid, 1}))
            return "edge " + std::to_string(eid) + ": missing rotation slot";
    }
    // planarity: V - E + F = 2 on each vertex-bearing connected component
    std::map<int, int> comp;
    int nc = 0;
    for (auto& [vid, v] : verts) {
        (void)v;
        if (comp.count(vid)) continue;
        std::vector<int> stack{vid};
        comp[vid] = nc;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto& d : verts.at(x).rot) {
                const WebEdge& e = edges.at(d.edge);
                int y = d.end == 0 ? e.head : e.tail;
                if (!comp.count(y)) {
                    comp[y] = nc;
                    stack.push_back(y);
                }
            }
        }
        ++nc;
    }
    std::vector<int> V(nc, 0), E(nc, 0), F(nc, 0);
    for (auto& [vid, c] : comp) {
        (void)vid;
        V[c]++;
    }
    for (auto& [eid, e] : edges) {
        (void)eid;
        if (!e.is_loop()) E[comp.at(e.tail)]++;
    }
    std::set<DDart> visited;
    for (auto& [eid, e] : edges) {
        if (e.is_loop()) continue;
        for (int dir = 0; dir < 2; ++dir) {
            DDart d{eid, dir};
            if (visited.count(d)) continue;
            DDart x = d;
            do {
                visited.insert(x);
                x = sigma(*this, alpha(x));
            } while (!(x == d));
            F[comp.at(e.tail)]++;
        }
    }
    for (int c = 0; c < nc; ++c)
        if (V[c] - E[c] + F[c] != 2)
            return "non-planar rotation system (component Euler characteristic " +
                   std::to_string(V[c] - E[c] + F[c]) + ")";
    return "";
}

std::vector<Face> enumerate_faces(const Web& w) {
    std::vector<Face> out;
    std::set<DDart> visited;
    for (auto& [eid, e] : w.edges) {
        if (e.is_loop()) continue;
        for (int dir = 0; dir < 2; ++dir) {
            DDart d{eid, dir};
            if (visited.count(d)) continue;
            Face f;
            DDart x = d;
            do {
                visited.insert(x);
                f.edge_cycle.push_back(x.edge);
                DDart nx = sigma(w, alpha(x));
                f.vert_cycle.push_back(origin(w, nx));
                x = nx;
            } while (!(x == d));
            out.push_back(std::move(f));
        }
    }
    return out;
}

FaceLocation find_face(const Web& w) {
    FaceLocation loc;
    // circles first
    int best_loop = -1;
    for (auto& [eid, e] : w.edges)
        if (e.is_loop()) {
            best_loop = eid;
            break; // edges map is ordered
        }
    if (best_loop >= 0) {
        loc.kind = FaceLocation::Circle;
        loc.loop_edge = best_loop;
        return loc;
    }
    auto faces = enumerate_faces(w);
    auto min_edge = [](const Face& f) {
        return *std::min_element(f.edge_cycle.begin(), f.edge_cycle.end());
    };
    const Face* best = nullptr;
    for (auto& f : faces) {
        if (f.edge_cycle.size() != 2) continue;
        if (f.edge_cycle[0] == f.edge_cycle[1]) continue;
        if (!best || min_edge(f) < min_edge(*best)) best = &f;
    }
    if (best) {
        loc.kind = FaceLocation::Digon;
        loc.edge_cycle = best->edge_cycle;
        loc.vert_cycle = best->vert_cycle;
        return loc;
    }
    for (auto& f : faces) {
        if (f.edge_cycle.size() != 4) continue;
        std::set<int> es(f.edge_cycle.begin(), f.edge_cycle.end());
        std::set<int> vs(f.vert_cycle.begin(), f.vert_cycle.end());
        if (es.size() != 4 || vs.size() != 4) continue;
        if (!best || min_edge(f) < min_edge(*best)) best = &f;
    }
    if (best) {
        loc.kind = FaceLocation::Square;
        loc.edge_cycle = best->edge_cycle;
        loc.vert_cycle = best->vert_cycle;
        return loc;
    }
    loc.kind = FaceLocation::None;
    return loc;
}

namespace {

std::string component_key(const Web& w, int v0, int offset) {
    std::map<int, int> vlab, elab;
    std::ostringstream os;
    std::vector<std::pair<int, int>> queue{{v0, offset}}; // (vertex, entry rot slot)
    vlab[v0] = 0;
    size_t qi = 0;
    while (qi < queue.size()) {
        auto [v, k] = queue[qi++];
        const WebVertex& vx = w.verts.at(v);
        os << (vx.all_in ? "I" : "O");
        for (int i = 0; i < 3; ++i) {
            const Dart& d = vx.rot[(k + i) % 3];
            auto [it, fresh] = elab.try_emplace(d.edge, (int)elab.size());
            const WebEdge& e = w.edges.at(d.edge);
            os << " e" << it->second << (d.end == 0 ? "t" : "h") << (e.mark ? "m" : "");
            int v2 = d.end == 0 ? e.head : e.tail;
            auto [jt, vfresh] = vlab.try_emplace(v2, (int)vlab.size());
            os << "v" << jt->second;
            if (vfresh) {
                int entry = rot_index(w.verts.at(v2), d.edge, 1 - d.end);
                queue.push_back({v2, entry});
            }
            (void)fresh;
        }
        os << ";";
    }
    return os.str();
}

} // namespace

std::string Web::canonical_key() const {
    // vertex components
    std::map<int, int> comp;
    int nc = 0;
    for (auto& [vid, v] : verts) {
        (void)v;
        if (comp.count(vid)) continue;
        std::vector<int> stack{vid};
        comp[vid] = nc;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto& d : verts.at(x).rot) {
                const WebEdge& e = edges.at(d.edge);
                int y = d.end == 0 ? e.head : e.tail;
                if (!comp.count(y)) {
                    comp[y] = nc;
                    stack.push_back(y);
                }
            }
        }
        ++nc;
    }
    std::vector<std::string> keys(nc);
    for (int c = 0; c < nc; ++c) keys[c] = "";
    for (auto& [vid, v] : verts) {
        (void)v;
        int c = comp[vid];
        for (int off = 0; off < 3; ++off) {
            std::string k = component_key(*this, vid, off);
            if (keys[c].empty() || k < keys[c]) keys[c] = k;
        }
    }
    std::sort(keys.begin(), keys.end());
    int plain_loops = 0, marked_loops = 0;
    for (auto& [eid, e] : edges)
        if (e.is_loop()) (e.mark ? marked_loops : plain_loops)++;
    std::ostringstream os;
    os << "W[" << plain_loops << "," << marked_loops << "]";
    for (auto& k : keys) os << "{" << k << "}";
    return os.str();
}

std::string Web::to_json() const {
    nlohmann::json j;
    j["edges"] = nlohmann::json::array();
    for (auto& [eid, e] : edges) {
        nlohmann::json je;
        je["id"] = eid;
        if (!e.is_loop()) {
            je["tail"] = e.tail;
            je["head"] = e.head;
        } else {
            je["loop"] = true;
        }
        if (e.mark) je["mark"] = true;
        j["edges"].push_back(je);
    }
    j["vertices"] = nlohmann::json::array();
    for (auto& [vid, v] : verts) {
        nlohmann::json jv;
        jv["id"] = vid;
        jv["type"] = v.all_in ? "in" : "out";
        jv["rot"] = nlohmann::json::array();
        for (auto& d : v.rot) jv["rot"].push_back({d.edge, d.end});
        j["vertices"].push_back(jv);
    }
    return j.dump();
}

ResolvedWeb resolve(const LinkDiagram& d, const std::vector<int>& bits) {
    if (bits.size() != d.crossings.size())
        throw ParseError("resolution length mismatch: got " + std::to_string(bits.size()) +
                         " bits for " + std::to_string(d.crossings.size()) + " crossings");

    std::map<int, int> join;                      // arc -> next arc across a smoothed crossing
    std::map<int, std::pair<int, int>> end_at;    // arc -> (crossing, u); value slot unused
    std::map<int, std::pair<int, int>> begin_at;  // arc -> (crossing, w)
    std::vector<bool> singular(d.crossings.size(), false);

    for (size_t k = 0; k < d.crossings.size(); ++k) {
        const Crossing& x = d.crossings[k];
        int a = x.he[0], b = x.he[1], c = x.he[2], dd = x.he[3];
        bool sing = x.sign() > 0 ? bits[k] == 1 : bits[k] == 0;
        singular[k] = sing;
        if (!sing) {
            if (x.sign() > 0) { // oriented smoothing {a->b},{d->c}
                join[a] = b;
                join[dd] = c;
            } else { // oriented smoothing {a->d},{b->c}
                join[a] = dd;
                join[b] = c;
            }
        } else {
            if (x.sign() > 0) { // ins a,d; outs b,c
                end_at[a] = {(int)k, 0};
                end_at[dd] = {(int)k, 3};
                begin_at[b] = {(int)k, 1};
                begin_at[c] = {(int)k, 2};
            } else { // ins a,b; outs c,d
                end_at[a] = {(int)k, 0};
                end_at[b] = {(int)k, 1};
                begin_at[c] = {(int)k, 2};
                begin_at[dd] = {(int)k, 3};
            }
        }
    }

    // chains of arcs: web edges
    struct Chain {
        std::vector<int> arcs;
        bool loop = false;
        int begin_k = -1, end_k = -1; // singular crossings at the ends
    };
    std::vector<Chain> chains;
    std::set<int> used;
    for (auto& [arc, bk] : begin_at) {
        Chain ch;
        ch.begin_k = bk.first;
        int x = arc;
        while (true) {
            ch.arcs.push_back(x);
            used.insert(x);
            auto it = join.find(x);
            if (it == join.end()) break;
            x = it->second;
        }
        if (!end_at.count(ch.arcs.back())) throw InternalError("resolve: chain without end");
        ch.end_k = end_at.at(ch.arcs.back()).first;
        chains.push_back(std::move(ch));
    }
    for (int arc : d.arcs) {
        if (used.count(arc)) continue;
        // cycle of joins: free loop
        Chain ch;
        ch.loop = true;
        int x = arc;
        while (!used.count(x)) {
            ch.arcs.push_back(x);
            used.insert(x);
            auto it = join.find(x);
            if (it == join.end()) throw InternalError("resolve: open chain without begin");
            x = it->second;
        }
        chains.push_back(std::move(ch));
    }

    // deterministic ids by provenance
    struct Item {
        std::string prov;
        int chain = -1; // -1 for middles/unknots
        int k = -1;     // crossing for middles, index for unknots
        int kind = 0;   // 0 chain, 1 middle, 2 unknot
    };
    std::vector<Item> items;
    for (size_t i = 0; i < chains.size(); ++i) {
        std::vector<int> sorted_arcs = chains[i].arcs;
        std::sort(sorted_arcs.begin(), sorted_arcs.end());
        std::ostringstream os;
        os << "arcs";
        for (int a : sorted_arcs) os << ":" << a;
        items.push_back({os.str(), (int)i, -1, 0});
    }
    for (size_t k = 0; k < d.crossings.size(); ++k)
        if (singular[k]) items.push_back({"mid:" + std::to_string(k), -1, (int)k, 1});
    for (int i = 0; i < d.unknot_components; ++i)
        items.push_back({"unk:" + std::to_string(i), -1, i, 2});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.prov < b.prov; });

    ResolvedWeb rw;
    std::map<int, int> chain_edge;  // chain index -> edge id
    std::map<int, int> middle_edge; // crossing -> edge id
    for (size_t i = 0; i < items.size(); ++i) {
        rw.provenance[(int)i] = items[i].prov;
        if (items[i].kind == 0) chain_edge[items[i].chain] = (int)i;
        if (items[i].kind == 1) middle_edge[items[i].k] = (int)i;
    }

    // vertices: u = 2k, w = 2k+1 for singular crossings
    for (size_t k = 0; k < d.crossings.size(); ++k) {
        if (!singular[k]) continue;
        rw.web.verts[2 * (int)k] = WebVertex{true, {}};
        rw.web.verts[2 * (int)k + 1] = WebVertex{false, {}};
    }
    for (size_t i = 0; i < items.size(); ++i) {
        const Item& it = items[i];
        WebEdge e;
        if (it.kind == 0) {
            const Chain& ch = chains[it.chain];
            if (!ch.loop) {
                e.tail = 2 * ch.begin_k + 1;
                e.head = 2 * ch.end_k;
            }
        } else if (it.kind == 1) {
            e.tail = 2 * it.k + 1;
            e.head = 2 * it.k;
            e.mark = true;
        }
        rw.web.edges[(int)i] = e;
    }

    // rotations and crossing pieces
    std::map<int, int> arc_chain; // arc -> chain index
    for (size_t i = 0; i < chains.size(); ++i)
        for (int a : chains[i].arcs) arc_chain[a] = (int)i;

    rw.pieces.resize(d.crossings.size());
    for (size_t k = 0; k < d.crossings.size(); ++k) {
        const Crossing& x = d.crossings[k];
        auto ce = [&](int arc) { return chain_edge.at(arc_chain.at(arc)); };
        auto& pc = rw.pieces[k];
        if (!singular[k]) {
            pc.singular = false;
            pc.under_edge = ce(x.he[0]);
            pc.over_edge = x.sign() > 0 ? ce(x.he[3]) : ce(x.he[1]);
            continue;
        }
        pc.singular = true;
        pc.u = 2 * (int)k;
        pc.w = 2 * (int)k + 1;
        pc.m = middle_edge.at((int)k);
        pc.a_edge = ce(x.he[0]);
        pc.b_edge = ce(x.he[1]);
        pc.c_edge = ce(x.he[2]);
        pc.d_edge = ce(x.he[3]);
        WebVertex& u = rw.web.verts.at(pc.u);
        WebVertex& w = rw.web.verts.at(pc.w);
        if (x.sign() > 0) {
            u.rot = {Dart{pc.a_edge, 1}, Dart{pc.m, 1}, Dart{pc.d_edge, 1}};
            w.rot = {Dart{pc.b_edge, 0}, Dart{pc.c_edge, 0}, Dart{pc.m, 0}};
        } else {
            u.rot = {Dart{pc.a_edge, 1}, Dart{pc.b_edge, 1}, Dart{pc.m, 1}};
            w.rot = {Dart{pc.c_edge, 0}, Dart{pc.d_edge, 0}, Dart{pc.m, 0}};
        }
    }

    std::string err = rw.web.validate();
    if (!err.empty()) throw InternalError("resolve produced invalid web: " + err);
    return rw;
}

} // namespace usl3
