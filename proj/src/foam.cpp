#include "usl3/foam.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

namespace usl3 {

namespace {

void replace_dart(Web& w, int vertex, int old_edge, int old_end, int new_edge, int new_end) {
    if (vertex < 0 || !w.verts.count(vertex)) return;
    for (auto& d : w.verts.at(vertex).rot)
        if (d.edge == old_edge && d.end == old_end) {
            d = Dart{new_edge, new_end};
            return;
        }
    throw InternalError("replace_dart: dart not found");
}

} // namespace

int FoamMovie::dot_count() const {
    int n = 0;
    for (auto& mv : moves)
        if (auto* d = std::get_if<MDot>(&mv)) n += d->count;
    return n;
}

// ---------------------------------------------------------------------------
// MovieBuilder

int MovieBuilder::birth() {
    Web next = current();
    int id = next.fresh_edge_id();
    next.edges[id] = WebEdge{};
    m_.moves.push_back(MBirth{id});
    m_.frames.push_back(std::move(next));
    return id;
}

void MovieBuilder::death(int loop) {
    if (!current().edges.count(loop) || !current().edges.at(loop).is_loop())
        throw InternalError("death: not a free loop");
    Web next = current();
    next.edges.erase(loop);
    m_.moves.push_back(MDeath{loop});
    m_.frames.push_back(std::move(next));
}

void MovieBuilder::dot(int edge, int count) {
    if (!current().edges.count(edge)) throw InternalError("dot: unknown edge");
    m_.moves.push_back(MDot{edge, count});
    m_.frames.push_back(current());
}

MZip MovieBuilder::zip(int s1, int s2) {
    const Web& cw = current();
    if (!cw.edges.count(s1) || !cw.edges.count(s2)) throw InternalError("zip: unknown strand");
    MZip z;
    z.s1 = s1;
    z.s2 = s2;
    z.s1_loop = cw.edges.at(s1).is_loop();
    z.s2_loop = cw.edges.at(s2).is_loop();
    Web next = cw;
    int u = next.fresh_vert_id();
    int w = u + 1;
    z.u = u;
    z.w = w;
    int id = next.fresh_edge_id();
    auto fresh = [&]() { return id++; };
    z.m = fresh();

    WebEdge s1e = cw.edges.at(s1);
    WebEdge s2e = cw.edges.at(s2);
    next.edges.erase(s1);
    if (!z.self()) next.edges.erase(s2);
    next.verts[u] = WebVertex{true, {}};
    next.verts[w] = WebVertex{false, {}};
    next.edges[z.m] = WebEdge{w, u, false};

    auto add_edge = [&](int tail, int head) {
        int e = fresh();
        next.edges[e] = WebEdge{tail, head, false};
        return e;
    };

    if (!z.self()) {
        if (!z.s1_loop) {
            z.in1 = add_edge(s1e.tail, u);
            z.out1 = add_edge(w, s1e.head);
            replace_dart(next, s1e.tail, s1, 0, z.in1, 0);
            replace_dart(next, s1e.head, s1, 1, z.out1, 1);
        } else {
            z.in1 = add_edge(w, u);
        }
        if (!z.s2_loop) {
            z.in2 = add_edge(s2e.tail, u);
            z.out2 = add_edge(w, s2e.head);
            replace_dart(next, s2e.tail, s2, 0, z.in2, 0);
            replace_dart(next, s2e.head, s2, 1, z.out2, 1);
        } else {
            z.in2 = add_edge(w, u);
        }
        int p1 = z.s1_loop ? z.in1 : z.out1;
        int p2 = z.s2_loop ? z.in2 : z.out2;
        next.verts[u].rot = {Dart{z.in1, 1}, Dart{z.m, 1}, Dart{z.in2, 1}};
        next.verts[w].rot = {Dart{p1, 0}, Dart{p2, 0}, Dart{z.m, 0}};
    } else if (!z.s1_loop) {
        z.in1 = add_edge(s1e.tail, u);
        z.mid = add_edge(w, u);
        z.out1 = add_edge(w, s1e.head);
        replace_dart(next, s1e.tail, s1, 0, z.in1, 0);
        replace_dart(next, s1e.head, s1, 1, z.out1, 1);
        next.verts[u].rot = {Dart{z.in1, 1}, Dart{z.m, 1}, Dart{z.mid, 1}};
        next.verts[w].rot = {Dart{z.mid, 0}, Dart{z.out1, 0}, Dart{z.m, 0}};
    } else {
        z.in1 = add_edge(w, u);
        z.mid = add_edge(w, u);
        next.verts[u].rot = {Dart{z.mid, 1}, Dart{z.m, 1}, Dart{z.in1, 1}};
        next.verts[w].rot = {Dart{z.in1, 0}, Dart{z.m, 0}, Dart{z.mid, 0}};
    }

    std::string err = next.validate();
    if (!err.empty()) throw InternalError("zip produced invalid web: " + err);
    m_.moves.push_back(z);
    m_.frames.push_back(std::move(next));
    return z;
}

namespace {

// chain-chase the unzip gluing; fills outs and builds the next web
void apply_unzip(Web& next, MUnzip& uz, bool produce_ids) {
    const int u = uz.u, w = uz.w, m = uz.m;
    Web& cw = next;
    if (!cw.verts.count(u) || !cw.verts.count(w)) throw InternalError("unzip: missing vertices");

    std::map<int, int> glue_head; // edge at u -> partner at w
    for (int k = 0; k < 2; ++k) glue_head[uz.eu[k]] = uz.fw[k];
    std::set<int> at_u{uz.eu[0], uz.eu[1]}, at_w{uz.fw[0], uz.fw[1]};

    std::set<int> all;
    for (int k = 0; k < 2; ++k) {
        all.insert(uz.eu[k]);
        all.insert(uz.fw[k]);
    }

    struct Piece {
        std::vector<int> members;
        bool loop = false;
        int tail = -1, head = -1; // far endpoints if edge
    };
    std::vector<Piece> pieces;
    std::set<int> used;
    // chains starting at a free tail (an edge not glued at its tail)
    for (int e : all) {
        if (used.count(e)) continue;
        if (at_w.count(e)) continue; // tail glued, not a chain start
        Piece p;
        int x = e;
        p.tail = cw.edges.at(x).tail;
        while (true) {
            p.members.push_back(x);
            used.insert(x);
            if (!at_u.count(x)) { // head not glued: chain ends
                p.head = cw.edges.at(x).head;
                break;
            }
            x = glue_head.at(x);
            if (used.count(x)) throw InternalError("unzip: inconsistent gluing");
        }
        pieces.push_back(std::move(p));
    }
    // remaining: cycles -> loops
    for (int e : all) {
        if (used.count(e)) continue;
        Piece p;
        p.loop = true;
        int x = e;
        while (!used.count(x)) {
            p.members.push_back(x);
            used.insert(x);
            x = glue_head.at(x);
        }
        pieces.push_back(std::move(p));
    }

    if (produce_ids) {
        uz.outs.clear();
        int id = cw.fresh_edge_id();
        for (auto& p : pieces) uz.outs.push_back({id++, p.loop, p.members});
    } else if (uz.outs.size() != pieces.size()) {
        throw InternalError("unzip: stored outputs disagree with gluing");
    } else {
        // align stored outs with chased pieces by member sets
        std::vector<MUnzip::Out> aligned;
        for (auto& p : pieces) {
            bool found = false;
            for (auto& o : uz.outs) {
                std::set<int> a(p.members.begin(), p.members.end());
                std::set<int> b(o.members.begin(), o.members.end());
                if (a == b) {
                    MUnzip::Out oo = o;
                    oo.members = p.members; // chain order
                    aligned.push_back(oo);
                    found = true;
                    break;
                }
            }
            if (!found) throw InternalError("unzip: stored outputs disagree with gluing");
        }
        uz.outs = aligned;
    }

    // rebuild the web
    for (size_t i = 0; i < pieces.size(); ++i) {
        const Piece& p = pieces[i];
        const auto& out = uz.outs[i];
        WebEdge ne;
        bool mark = false;
        for (int e : p.members) mark = mark || cw.edges.at(e).mark;
        ne.mark = mark;
        if (!p.loop) {
            ne.tail = p.tail;
            ne.head = p.head;
        }
        // fix far rotations before erasing
        if (!p.loop) {
            replace_dart(cw, p.tail, p.members.front(), 0, out.id, 0);
            replace_dart(cw, p.head, p.members.back(), 1, out.id, 1);
        }
        for (int e : p.members) cw.edges.erase(e);
        cw.edges[out.id] = ne;
    }
    cw.edges.erase(m);
    cw.verts.erase(u);
    cw.verts.erase(w);
}

} // namespace

MUnzip MovieBuilder::unzip(int m) {
    const Web& cw = current();
    if (!cw.edges.count(m) || cw.edges.at(m).is_loop()) throw InternalError("unzip: bad middle edge");
    MUnzip uz;
    uz.m = m;
    uz.u = cw.edges.at(m).head;
    uz.w = cw.edges.at(m).tail;
    const WebVertex& uv = cw.verts.at(uz.u);
    const WebVertex& wv = cw.verts.at(uz.w);
    int iu = -1, iw = -1;
    for (int i = 0; i < 3; ++i) {
        if (uv.rot[i].edge == m) iu = i;
        if (wv.rot[i].edge == m) iw = i;
    }
    // smoothing pairs: (after-m at u ~ before-m at w), (before-m at u ~ after-m at w)
    uz.eu = {uv.rot[(iu + 1) % 3].edge, uv.rot[(iu + 2) % 3].edge};
    uz.fw = {wv.rot[(iw + 2) % 3].edge, wv.rot[(iw + 1) % 3].edge};

    Web next = cw;
    apply_unzip(next, uz, true);
    std::string err = next.validate();
    if (!err.empty()) throw InternalError("unzip produced invalid web: " + err);
    m_.moves.push_back(uz);
    m_.frames.push_back(std::move(next));
    return uz;
}

MSaddle MovieBuilder::saddle(int s1, int s2) {
    const Web& cw = current();
    MSaddle sd;
    sd.s1 = s1;
    sd.s2 = s2;
    sd.s1_loop = cw.edges.at(s1).is_loop();
    sd.s2_loop = cw.edges.at(s2).is_loop();
    Web next = cw;
    int id = next.fresh_edge_id();
    WebEdge e1 = cw.edges.at(s1);
    WebEdge e2 = cw.edges.at(s2);
    if (s1 != s2) {
        next.edges.erase(s1);
        next.edges.erase(s2);
        if (!sd.s1_loop && !sd.s2_loop) {
            int t1 = id++, t2 = id++;
            next.edges[t1] = WebEdge{e1.tail, e2.head, e1.mark || e2.mark};
            next.edges[t2] = WebEdge{e2.tail, e1.head, e1.mark || e2.mark};
            replace_dart(next, e1.tail, s1, 0, t1, 0);
            replace_dart(next, e2.head, s2, 1, t1, 1);
            replace_dart(next, e2.tail, s2, 0, t2, 0);
            replace_dart(next, e1.head, s1, 1, t2, 1);
            sd.outs = {{t1, false}, {t2, false}};
        } else if (sd.s1_loop && sd.s2_loop) {
            int t = id++;
            next.edges[t] = WebEdge{-1, -1, e1.mark || e2.mark};
            sd.outs = {{t, true}};
        } else {
            const WebEdge& ed = sd.s1_loop ? e2 : e1;
            int s_edge = sd.s1_loop ? s2 : s1;
            int t = id++;
            next.edges[t] = WebEdge{ed.tail, ed.head, e1.mark || e2.mark};
            replace_dart(next, ed.tail, s_edge, 0, t, 0);
            replace_dart(next, ed.head, s_edge, 1, t, 1);
            sd.outs = {{t, false}};
        }
    } else if (!sd.s1_loop) {
        int t = id++, l = id++;
        next.edges.erase(s1);
        next.edges[t] = WebEdge{e1.tail, e1.head, e1.mark};
        next.edges[l] = WebEdge{-1, -1, e1.mark};
        replace_dart(next, e1.tail, s1, 0, t, 0);
        replace_dart(next, e1.head, s1, 1, t, 1);
        sd.outs = {{t, false}, {l, true}};
    } else {
        int l1 = id++, l2 = id++;
        next.edges.erase(s1);
        next.edges[l1] = WebEdge{-1, -1, e1.mark};
        next.edges[l2] = WebEdge{-1, -1, e1.mark};
        sd.outs = {{l1, true}, {l2, true}};
    }
    std::string err = next.validate();
    if (!err.empty()) throw InternalError("saddle produced invalid web: " + err);
    m_.moves.push_back(sd);
    m_.frames.push_back(std::move(next));
    return sd;
}

void MovieBuilder::push(Move mv, Web next) {
    m_.moves.push_back(std::move(mv));
    m_.frames.push_back(std::move(next));
}

// ---------------------------------------------------------------------------
// reversal

FoamMovie FoamMovie::reversed() const {
    FoamMovie r;
    r.frames.assign(frames.rbegin(), frames.rend());
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
        const Move& mv = *it;
        if (auto* b = std::get_if<MBirth>(&mv)) {
            r.moves.push_back(MDeath{b->loop});
        } else if (auto* d = std::get_if<MDeath>(&mv)) {
            r.moves.push_back(MBirth{d->loop});
        } else if (auto* d = std::get_if<MDot>(&mv)) {
            r.moves.push_back(*d);
        } else if (auto* z = std::get_if<MZip>(&mv)) {
            MUnzip uz;
            uz.u = z->u;
            uz.w = z->w;
            uz.m = z->m;
            auto bp = z->branch_pairs();
            uz.eu = {bp[0].first, bp[1].first};
            uz.fw = {bp[0].second, bp[1].second};
            if (!z->self()) {
                MUnzip::Out o1{z->s1, z->s1_loop, {}};
                o1.members = z->s1_loop ? std::vector<int>{z->in1} : std::vector<int>{z->in1, z->out1};
                MUnzip::Out o2{z->s2, z->s2_loop, {}};
                o2.members = z->s2_loop ? std::vector<int>{z->in2} : std::vector<int>{z->in2, z->out2};
                uz.outs = {o1, o2};
            } else {
                MUnzip::Out o{z->s1, z->s1_loop, {}};
                o.members = z->s1_loop ? std::vector<int>{z->in1, z->mid}
                                       : std::vector<int>{z->in1, z->mid, z->out1};
                uz.outs = {o};
            }
            r.moves.push_back(uz);
        } else if (auto* uz = std::get_if<MUnzip>(&mv)) {
            MZip z;
            z.u = uz->u;
            z.w = uz->w;
            z.m = uz->m;
            if (uz->outs.size() == 2) {
                z.s1 = uz->outs[0].id;
                z.s2 = uz->outs[1].id;
                z.s1_loop = uz->outs[0].loop;
                z.s2_loop = uz->outs[1].loop;
                const auto& m1 = uz->outs[0].members;
                const auto& m2 = uz->outs[1].members;
                z.in1 = m1.front();
                if (!z.s1_loop) z.out1 = m1.back();
                z.in2 = m2.front();
                if (!z.s2_loop) z.out2 = m2.back();
            } else {
                z.s1 = z.s2 = uz->outs[0].id;
                z.s1_loop = z.s2_loop = uz->outs[0].loop;
                const auto& ms = uz->outs[0].members;
                z.in1 = ms.front();
                z.mid = ms[1];
                if (!z.s1_loop) z.out1 = ms.back();
            }
            r.moves.push_back(z);
        } else if (auto* sd = std::get_if<MSaddle>(&mv)) {
            MSaddle s;
            if (sd->outs.size() == 2) {
                s.s1 = sd->outs[0].id;
                s.s2 = sd->outs[1].id;
                s.s1_loop = sd->outs[0].loop;
                s.s2_loop = sd->outs[1].loop;
            } else {
                s.s1 = s.s2 = sd->outs[0].id;
                s.s1_loop = s.s2_loop = sd->outs[0].loop;
            }
            if (sd->s1 != sd->s2) {
                s.outs = {{sd->s1, sd->s1_loop}, {sd->s2, sd->s2_loop}};
            } else {
                s.outs = {{sd->s1, sd->s1_loop}};
            }
            r.moves.push_back(s);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// q-degree

namespace {

int web_chi(const Web& w) {
    int v = (int)w.verts.size();
    int e = 0;
    for (auto& [eid, ed] : w.edges) {
        (void)eid;
        if (!ed.is_loop()) ++e;
    }
    return v - e;
}

std::set<int> consumed_edges(const Move& mv) {
    std::set<int> s;
    if (auto* d = std::get_if<MDeath>(&mv)) s.insert(d->loop);
    if (auto* z = std::get_if<MZip>(&mv)) {
        s.insert(z->s1);
        s.insert(z->s2);
    }
    if (auto* uz = std::get_if<MUnzip>(&mv)) {
        s.insert(uz->m);
        for (auto& o : uz->outs)
            for (int e : o.members) s.insert(e);
    }
    if (auto* sd = std::get_if<MSaddle>(&mv)) {
        s.insert(sd->s1);
        s.insert(sd->s2);
    }
    return s;
}

// chi_c of the move-specific pieces (facet parts and seam arcs)
int move_chi(const Move& mv, const Web& pre) {
    if (std::holds_alternative<MBirth>(mv) || std::holds_alternative<MDeath>(mv)) return 1;
    if (std::holds_alternative<MDot>(mv)) return 0;
    if (auto* z = std::get_if<MZip>(&mv)) {
        int total = 1 - 1; // membrane +1, seam arc -1
        if (!z->self()) {
            total += z->s1_loop ? 0 : 1;
            total += z->s2_loop ? 0 : 1;
        } else {
            total += z->s1_loop ? 0 : 1;
        }
        (void)pre;
        return total;
    }
    if (auto* uz = std::get_if<MUnzip>(&mv)) {
        int total = 1 - 1; // membrane cap +1, seam arc -1
        for (auto& o : uz->outs) total += o.loop ? 0 : 1;
        return total;
    }
    if (auto* sd = std::get_if<MSaddle>(&mv)) {
        bool self = sd->s1 == sd->s2;
        if (!self) {
            if (sd->s1_loop && sd->s2_loop) return -1;
            if (!sd->s1_loop && !sd->s2_loop) return 1;
            return 0;
        }
        return sd->s1_loop ? -1 : 0;
    }
    return 0;
}

} // namespace

int q_degree(const FoamMovie& m) {
    int chi_c = 0;
    int dots = 0;
    for (size_t j = 0; j < m.moves.size(); ++j) {
        const Web& pre = m.frames[j];
        const Web& post = m.frames[j + 1];
        std::set<int> consumed = consumed_edges(m.moves[j]);
        for (auto& [eid, e] : pre.edges) {
            if (consumed.count(eid)) continue;
            if (!e.is_loop()) chi_c += 1; // identity sweep
        }
        // vertices alive through the whole slab
        for (auto& [vid, v] : pre.verts) {
            (void)v;
            if (post.verts.count(vid)) chi_c -= 1;
        }
        chi_c += move_chi(m.moves[j], pre);
        if (auto* d = std::get_if<MDot>(&m.moves[j])) dots += d->count;
        // internal interface
        if (j + 1 < m.moves.size()) {
            for (auto& [eid, e] : post.edges)
                if (!e.is_loop()) chi_c -= 1;
            chi_c += (int)post.verts.size();
        }
    }
    int chi_boundary = web_chi(m.bottom()) + web_chi(m.top());
    // chi(F) = chi_c(interior) + chi(boundary webs)
    int chi_f = chi_c + chi_boundary;
    return -2 * chi_f + chi_boundary + 2 * dots;
}

// ---------------------------------------------------------------------------
// expressions and composition

FoamExpression FoamExpression::single(GroundElt c, FoamMovie m) {
    FoamExpression e;
    e.bottom = m.bottom();
    e.top = m.top();
    if (!c.is_zero()) e.terms.push_back({std::move(c), std::move(m)});
    return e;
}

FoamExpression FoamExpression::identity(const Web& w) {
    return single(GroundElt::one(), FoamMovie::identity(w));
}

FoamExpression& FoamExpression::operator+=(const FoamExpression& o) {
    if (!(bottom == o.bottom) || !(top == o.top))
        throw InternalError("foam expression sum: boundary mismatch");
    for (auto& t : o.terms) terms.push_back(t);
    return *this;
}

FoamExpression FoamExpression::operator*(const GroundElt& c) const {
    FoamExpression r;
    r.bottom = bottom;
    r.top = top;
    if (c.is_zero()) return r;
    for (auto& [k, mv] : terms) r.terms.push_back({k * c, mv});
    return r;
}

FoamMovie compose_movies(const FoamMovie& f, const FoamMovie& g) {
    if (!(g.top() == f.bottom()))
        throw InternalError("compose: top web of g must equal bottom web of f");
    FoamMovie r = g;
    for (size_t i = 0; i < f.moves.size(); ++i) {
        r.moves.push_back(f.moves[i]);
        r.frames.push_back(f.frames[i + 1]);
    }
    return r;
}

FoamExpression compose(const FoamExpression& f, const FoamExpression& g) {
    if (!(g.top == f.bottom)) throw InternalError("compose: boundary mismatch");
    FoamExpression r;
    r.bottom = g.bottom;
    r.top = f.top;
    for (auto& [cf, mf] : f.terms)
        for (auto& [cg, mg] : g.terms) {
            GroundElt c = cf * cg;
            if (c.is_zero()) continue;
            r.terms.push_back({c, compose_movies(mf, mg)});
        }
    return r;
}

// ---------------------------------------------------------------------------
// canonical interleaving

namespace {

std::set<int> move_support_edges(const Move& mv) {
    std::set<int> s = consumed_edges(mv);
    if (auto* b = std::get_if<MBirth>(&mv)) s.insert(b->loop);
    if (auto* d = std::get_if<MDot>(&mv)) s.insert(d->edge);
    if (auto* z = std::get_if<MZip>(&mv)) {
        for (int e : {z->m, z->in1, z->out1, z->in2, z->out2, z->mid})
            if (e >= 0) s.insert(e);
    }
    if (auto* uz = std::get_if<MUnzip>(&mv)) {
        for (auto& o : uz->outs) s.insert(o.id);
    }
    if (auto* sd = std::get_if<MSaddle>(&mv)) {
        for (auto& o : sd->outs) s.insert(o.id);
    }
    return s;
}

std::set<int> move_support_verts(const Move& mv) {
    std::set<int> s;
    if (auto* z = std::get_if<MZip>(&mv)) {
        s.insert(z->u);
        s.insert(z->w);
    }
    if (auto* uz = std::get_if<MUnzip>(&mv)) {
        s.insert(uz->u);
        s.insert(uz->w);
    }
    return s;
}

// far endpoints touched (rotation updates)
std::set<int> move_touched_verts(const Move& mv, const Web& pre) {
    std::set<int> s = move_support_verts(mv);
    auto add_ends = [&](int e) {
        if (e < 0 || !pre.edges.count(e)) return;
        const WebEdge& ed = pre.edges.at(e);
        if (!ed.is_loop()) {
            s.insert(ed.tail);
            s.insert(ed.head);
        }
    };
    for (int e : consumed_edges(mv)) add_ends(e);
    return s;
}

std::string move_key(const Move& mv) {
    std::ostringstream os;
    if (auto* b = std::get_if<MBirth>(&mv)) os << "B" << b->loop;
    if (auto* d = std::get_if<MDeath>(&mv)) os << "D" << d->loop;
    if (auto* d = std::get_if<MDot>(&mv)) os << "P" << d->edge << "x" << d->count;
    if (auto* z = std::get_if<MZip>(&mv)) os << "Z" << z->s1 << "," << z->s2;
    if (auto* uz = std::get_if<MUnzip>(&mv)) os << "U" << uz->m;
    if (auto* sd = std::get_if<MSaddle>(&mv)) os << "S" << sd->s1 << "," << sd->s2;
    return os.str();
}

} // namespace

void FoamMovie::normalize() {
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 1000) {
        changed = false;
        for (size_t i = 0; i + 1 < moves.size(); ++i) {
            const Move& m1 = moves[i];
            const Move& m2 = moves[i + 1];
            if (move_key(m2) >= move_key(m1)) continue;
            // independence: disjoint edge and vertex support
            std::set<int> e1 = move_support_edges(m1), e2 = move_support_edges(m2);
            std::set<int> v1 = move_touched_verts(m1, frames[i]);
            std::set<int> v2 = move_touched_verts(m2, frames[i + 1]);
            bool indep = true;
            for (int e : e2)
                if (e1.count(e)) indep = false;
            for (int v : v2)
                if (v1.count(v)) indep = false;
            if (!indep) continue;
            // swap: middle frame = frame[i+2] with m1 undone = frame[i] with m2 done.
            // both moves act on disjoint parts, so transplant the difference.
            Web mid = frames[i];
            const Web& after = frames[i + 2];
            // remove m2-consumed, add m2-created as they appear in `after`
            for (int e : consumed_edges(m2)) mid.edges.erase(e);
            for (int e : move_support_edges(m2))
                if (after.edges.count(e)) mid.edges[e] = after.edges.at(e);
            for (int v : move_support_verts(m2)) {
                if (after.verts.count(v))
                    mid.verts[v] = after.verts.at(v);
                else
                    mid.verts.erase(v);
            }
            // far rotation updates of m2 live on vertices untouched by m1
            for (int v : move_touched_verts(m2, frames[i + 1])) {
                if (after.verts.count(v) && mid.verts.count(v) && !move_support_verts(m2).count(v))
                    mid.verts[v] = after.verts.at(v);
            }
            std::string err = mid.validate();
            if (!err.empty()) continue; // conservatively skip
            std::swap(moves[i], moves[i + 1]);
            frames[i + 1] = std::move(mid);
            changed = true;
        }
    }
}

// ---------------------------------------------------------------------------
// local relations on movies

FoamExpression neck_cut(const FoamMovie& m, int frame, int loop_edge) {
    if (frame <= 0 || frame >= (int)m.frames.size())
        throw InternalError("neck_cut: frame out of range");
    const Web& w = m.frames[frame];
    if (!w.edges.count(loop_edge) || !w.edges.at(loop_edge).is_loop())
        throw InternalError("neck_cut: curve crosses a singular arc (edge is not a free loop)");

    Web without = w;
    without.edges.erase(loop_edge);

    struct Term {
        int x, y;
        GroundElt c;
    };
    std::vector<Term> terms = {
        {2, 0, GroundElt(-1)}, {1, 1, GroundElt(-1)}, {0, 2, GroundElt(-1)},
        {1, 0, GroundElt::var_a()}, {0, 1, GroundElt::var_a()}, {0, 0, GroundElt::var_b()},
    };
    FoamExpression out = FoamExpression::zero(m.bottom(), m.top());
    for (auto& t : terms) {
        FoamMovie mv;
        mv.frames.assign(m.frames.begin(), m.frames.begin() + frame);
        mv.moves.assign(m.moves.begin(), m.moves.begin() + (frame - 1) + 1);
        // splice: dots below, death, birth, dots above
        auto push = [&](Move mo, const Web& fr) {
            mv.moves.push_back(std::move(mo));
            mv.frames.push_back(fr);
        };
        // mv currently has frames[0..frame-1] and moves[0..frame-1] -> sizes
        // must satisfy frames = moves + 1; fix: we appended moves 0..frame-1 and
        // frames 0..frame-1, so add the cut at frame `frame`.
        if (t.x) push(MDot{loop_edge, t.x}, w);
        push(MDeath{loop_edge}, without);
        push(MBirth{loop_edge}, w);
        if (t.y) push(MDot{loop_edge, t.y}, w);
        for (size_t j = frame; j < m.moves.size(); ++j) {
            mv.moves.push_back(m.moves[j]);
            mv.frames.push_back(m.frames[j + 1]);
        }
        out += FoamExpression::single(t.c, std::move(mv));
    }
    return out;
}

std::string FoamMovie::to_json() const {
    nlohmann::json j;
    j["moves"] = nlohmann::json::array();
    for (auto& mv : moves) j["moves"].push_back(move_key(mv));
    j["frames"] = nlohmann::json::array();
    for (auto& f : frames) j["frames"].push_back(nlohmann::json::parse(f.to_json()));
    return j.dump();
}

} // namespace usl3
