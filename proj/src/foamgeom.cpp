#include "usl3/foamgeom.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace usl3 {

namespace {

struct UF {
    std::vector<int> p;
    int add() {
        p.push_back((int)p.size());
        return (int)p.size() - 1;
    }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

struct Tracker {
    UF facets;
    std::vector<int> chi, dots;
    std::map<int, int> live; // edge id -> facet node

    UF arcs; // over vertex instances
    std::map<int, int> live_vert;

    UF prongs;
    std::map<std::pair<int, int>, int> prong_ix; // (vert inst, facet NODE (pre-union id)) -> prong

    struct CircleRec {
        std::array<int, 3> prong;
        std::array<int, 3> facet_node;
    };
    std::vector<CircleRec> circles;

    bool track_seams = true;

    int fresh_facet() {
        int n = facets.add();
        chi.push_back(0);
        dots.push_back(0);
        return n;
    }
    void add_chi(int node, int v) { chi[facets.find(node)] += v; }
    void add_dots(int node, int v) { dots[facets.find(node)] += v; }
    int prong(int vinst, int enode) {
        auto key = std::make_pair(vinst, enode);
        auto it = prong_ix.find(key);
        if (it != prong_ix.end()) return it->second;
        int n = prongs.add();
        prong_ix[key] = n;
        return n;
    }

    void process(const FoamMovie& m);
};

void Tracker::process(const FoamMovie& m) {
    // initial frame
    for (auto& [eid, e] : m.bottom().edges) {
        (void)e;
        live[eid] = fresh_facet();
    }
    for (auto& [vid, v] : m.bottom().verts) {
        (void)v;
        live_vert[vid] = arcs.add();
    }

    for (size_t j = 0; j < m.moves.size(); ++j) {
        const Web& pre = m.frames[j];
        const Web& post = m.frames[j + 1];
        const Move& mv = m.moves[j];

        std::map<int, int> pre_nodes = live;

        // identity sweeps for untouched edges
        std::set<int> consumed;
        if (auto* d = std::get_if<MDeath>(&mv)) consumed.insert(d->loop);
        if (auto* z = std::get_if<MZip>(&mv)) {
            consumed.insert(z->s1);
            consumed.insert(z->s2);
        }
        if (auto* uz = std::get_if<MUnzip>(&mv)) {
            consumed.insert(uz->m);
            for (auto& o : uz->outs)
                for (int e : o.members) consumed.insert(e);
        }
        if (auto* sd = std::get_if<MSaddle>(&mv)) {
            consumed.insert(sd->s1);
            consumed.insert(sd->s2);
        }
        for (auto& [eid, e] : pre.edges) {
            if (consumed.count(eid)) continue;
            if (!e.is_loop()) add_chi(live.at(eid), 1);
        }

        if (auto* b = std::get_if<MBirth>(&mv)) {
            int n = fresh_facet();
            chi[n] += 1;
            live[b->loop] = n;
        } else if (auto* d = std::get_if<MDeath>(&mv)) {
            add_chi(live.at(d->loop), 1);
            live.erase(d->loop);
        } else if (auto* d = std::get_if<MDot>(&mv)) {
            add_dots(live.at(d->edge), d->count);
        } else if (auto* z = std::get_if<MZip>(&mv)) {
            int n1 = live.at(z->s1);
            int n2 = live.at(z->s2);
            live.erase(z->s1);
            live.erase(z->s2);
            auto part = [&](int id, int parent) {
                if (id < 0) return;
                int n = fresh_facet();
                facets.unite(n, parent);
                live[id] = n;
            };
            if (!z->self()) {
                part(z->in1, n1);
                part(z->out1, n1);
                part(z->in2, n2);
                part(z->out2, n2);
                add_chi(n1, z->s1_loop ? 0 : 1);
                add_chi(n2, z->s2_loop ? 0 : 1);
            } else {
                part(z->in1, n1);
                part(z->mid, n1);
                part(z->out1, n1);
                add_chi(n1, z->s1_loop ? 0 : 1);
            }
            int nm = fresh_facet();
            chi[nm] += 1;
            live[z->m] = nm;
            if (track_seams) {
                int ui = arcs.add();
                int wi = arcs.add();
                live_vert[z->u] = ui;
                live_vert[z->w] = wi;
                arcs.unite(ui, wi);
                for (auto& [e, f] : z->branch_pairs())
                    prongs.unite(prong(ui, live.at(e)), prong(wi, live.at(f)));
                prongs.unite(prong(ui, nm), prong(wi, nm));
            }
        } else if (auto* uz = std::get_if<MUnzip>(&mv)) {
            int nm = live.at(uz->m);
            add_chi(nm, 1);
            int ui = live_vert.count(uz->u) ? live_vert.at(uz->u) : -1;
            int wi = live_vert.count(uz->w) ? live_vert.at(uz->w) : -1;
            if (track_seams) {
                if (ui < 0 || wi < 0) throw InternalError("unzip: untracked vertices");
                for (int k = 0; k < 2; ++k)
                    prongs.unite(prong(ui, live.at(uz->eu[k])), prong(wi, live.at(uz->fw[k])));
                prongs.unite(prong(ui, nm), prong(wi, nm));
                if (arcs.find(ui) == arcs.find(wi)) {
                    // singular circle closes; read the germ slots at u
                    CircleRec rec{};
                    const WebVertex& uv = pre.verts.at(uz->u);
                    for (int i = 0; i < 3; ++i) {
                        int e = uv.rot[i].edge;
                        rec.prong[i] = prong(ui, live.at(e));
                        rec.facet_node[i] = live.at(e);
                    }
                    circles.push_back(rec);
                } else {
                    arcs.unite(ui, wi);
                }
                live_vert.erase(uz->u);
                live_vert.erase(uz->w);
            }
            live.erase(uz->m);
            for (auto& o : uz->outs) {
                int n = fresh_facet();
                for (int e : o.members) {
                    facets.unite(n, live.at(e));
                }
                for (int e : o.members) live.erase(e);
                add_chi(n, o.loop ? 0 : 1);
                live[o.id] = n;
            }
        } else if (auto* sd = std::get_if<MSaddle>(&mv)) {
            int n1 = live.at(sd->s1);
            int n2 = live.at(sd->s2);
            facets.unite(n1, n2);
            bool self = sd->s1 == sd->s2;
            int piece;
            if (!self) {
                if (sd->s1_loop && sd->s2_loop)
                    piece = -1;
                else if (!sd->s1_loop && !sd->s2_loop)
                    piece = 1;
                else
                    piece = 0;
            } else {
                piece = sd->s1_loop ? -1 : 0;
            }
            add_chi(n1, piece);
            live.erase(sd->s1);
            live.erase(sd->s2);
            for (auto& o : sd->outs) {
                int n = fresh_facet();
                facets.unite(n, n1);
                live[o.id] = n;
            }
        }

        // prong continuity at surviving vertices whose rotation slots changed
        if (track_seams) {
            for (auto& [vid, vinst] : live_vert) {
                if (!pre.verts.count(vid) || !post.verts.count(vid)) continue;
                const WebVertex& a = pre.verts.at(vid);
                const WebVertex& b2 = post.verts.at(vid);
                for (int i = 0; i < 3; ++i) {
                    if (a.rot[i].edge == b2.rot[i].edge) continue;
                    auto itold = pre_nodes.find(a.rot[i].edge);
                    auto itnew = live.find(b2.rot[i].edge);
                    if (itold == pre_nodes.end() || itnew == live.end())
                        throw InternalError("prong continuity: missing edge node");
                    prongs.unite(prong(vinst, itold->second), prong(vinst, itnew->second));
                }
            }
        }

        // internal interface
        if (j + 1 < m.moves.size()) {
            for (auto& [eid, e] : post.edges)
                if (!e.is_loop()) add_chi(live.at(eid), -1);
        }
    }
}

} // namespace

AbstractFoam extract_closed(const FoamMovie& m) {
    if (!m.closed()) throw InternalError("extract_closed: movie boundary webs are not empty");
    Tracker t;
    t.process(m);
    if (!t.live.empty() || !t.live_vert.empty())
        throw InternalError("extract_closed: dangling instances");

    AbstractFoam f;
    std::map<int, int> facet_index;
    auto fid = [&](int node) {
        int r = t.facets.find(node);
        auto it = facet_index.find(r);
        if (it != facet_index.end()) return it->second;
        int ix = (int)f.facets.size();
        facet_index[r] = ix;
        AbstractFoam::Facet fc;
        fc.chi = t.chi[r];
        fc.dots = t.dots[r];
        f.facets.push_back(fc);
        return ix;
    };

    std::map<int, std::set<int>> facet_orbits; // facet index -> prong roots
    for (auto& rec : t.circles) {
        AbstractFoam::Circle c;
        std::array<int, 3> roots{};
        for (int i = 0; i < 3; ++i) {
            c.germ[i] = fid(rec.facet_node[i]);
            roots[i] = t.prongs.find(rec.prong[i]);
            facet_orbits[c.germ[i]].insert(roots[i]);
        }
        for (int i = 0; i < 3; ++i) {
            c.orbit[i] = i;
            for (int k = 0; k < i; ++k)
                if (roots[k] == roots[i]) {
                    c.orbit[i] = c.orbit[k];
                    break;
                }
        }
        f.circles.push_back(c);
    }
    // ensure all facets are indexed (closed surfaces have no circles)
    for (auto& [node, ix] : t.live) {
        (void)node;
        (void)ix;
    }
    for (int n = 0; n < (int)t.chi.size(); ++n)
        if (t.facets.find(n) == n) fid(n);

    for (auto& [ix, orbits] : facet_orbits) f.facets[ix].boundary_circles = (int)orbits.size();

    for (auto& fc : f.facets) {
        int r = 2 - fc.chi - fc.boundary_circles;
        if (r < 0 || r % 2 != 0)
            throw InternalError("extract_closed: inconsistent facet geometry (chi " +
                                std::to_string(fc.chi) + ", boundaries " +
                                std::to_string(fc.boundary_circles) + ")");
    }
    return f;
}

std::string AbstractFoam::canonical_key() const {
    // deterministic serialization: facets ordered by invariants then first use
    std::vector<int> order(facets.size());
    for (size_t i = 0; i < facets.size(); ++i) order[i] = (int)i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const Facet& x = facets[a];
        const Facet& y = facets[b];
        return std::tie(x.chi, x.dots, x.boundary_circles) <
               std::tie(y.chi, y.dots, y.boundary_circles);
    });
    std::vector<int> relabel(facets.size());
    for (size_t i = 0; i < order.size(); ++i) relabel[order[i]] = (int)i;

    std::ostringstream os;
    for (int i : order) {
        const Facet& fc = facets[i];
        os << "F(" << fc.chi << "," << fc.dots << "," << fc.boundary_circles << ")";
    }
    std::vector<std::string> cs;
    for (auto& c : circles) {
        // canonical rotation of the cyclic triple
        std::string best;
        for (int r = 0; r < 3; ++r) {
            std::ostringstream co;
            for (int i = 0; i < 3; ++i) {
                int k = (r + i) % 3;
                co << relabel[c.germ[k]] << ":" << (c.orbit[k] == c.orbit[(k + 1) % 3] ? 1 : 0)
                   << (c.orbit[k] == c.orbit[(k + 2) % 3] ? 1 : 0) << ";";
            }
            std::string s = co.str();
            if (best.empty() || s < best) best = s;
        }
        cs.push_back(best);
    }
    std::sort(cs.begin(), cs.end());
    for (auto& s : cs) os << "C{" << s << "}";
    return os.str();
}

} // namespace usl3
