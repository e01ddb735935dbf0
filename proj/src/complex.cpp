#include "usl3/complex.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace usl3 {

GroundElt MatrixComplex::scalar_of(const FoamExpression& e) {
    if (!e.bottom.empty() || !e.top.empty())
        throw InternalError("scalar_of: entry endpoints are not empty webs");
    GroundElt v;
    for (auto& [c, m] : e.terms) {
        if (m.moves.empty())
            v += c;
        else
            v += c * evaluate_closed(m);
    }
    return v;
}

// ---------------------------------------------------------------------------
// cube

namespace {

struct CubeData {
    std::vector<ResolvedWeb> res;       // indexed by resolution mask
    std::vector<int> qshift, degree;
    std::map<std::string, int> dict;    // provenance -> global edge id
};

int dict_id(std::map<std::string, int>& dict, const std::string& prov) {
    auto it = dict.find(prov);
    if (it != dict.end()) return it->second;
    int id = (int)dict.size();
    dict[prov] = id;
    return id;
}

void relabel_resolved(ResolvedWeb& rw, std::map<std::string, int>& dict) {
    std::map<int, int> ren;
    for (auto& [eid, prov] : rw.provenance) ren[eid] = dict_id(dict, prov);
    Web nw;
    nw.verts = rw.web.verts;
    for (auto& [eid, e] : rw.web.edges) nw.edges[ren.at(eid)] = e;
    for (auto& [vid, v] : nw.verts)
        for (auto& d : v.rot) d.edge = ren.at(d.edge);
    rw.web = std::move(nw);
    for (auto& pc : rw.pieces) {
        auto fix = [&](int& e) {
            if (e >= 0) e = ren.at(e);
        };
        fix(pc.under_edge);
        fix(pc.over_edge);
        fix(pc.m);
        fix(pc.a_edge);
        fix(pc.b_edge);
        fix(pc.c_edge);
        fix(pc.d_edge);
    }
    std::map<int, std::string> np;
    for (auto& [eid, prov] : rw.provenance) np[ren.at(eid)] = prov;
    rw.provenance = std::move(np);
}

CubeData build_cube_data(const LinkDiagram& d) {
    int c = (int)d.crossings.size();
    if (c > 24) throw InternalError("diagram too large for the cube of resolutions");
    CubeData cd;
    cd.res.resize(1u << c);
    cd.qshift.resize(1u << c);
    cd.degree.resize(1u << c);
    for (unsigned r = 0; r < (1u << c); ++r) {
        std::vector<int> bits(c);
        int ones = 0, q = 0;
        for (int k = 0; k < c; ++k) {
            bits[k] = (r >> k) & 1;
            ones += bits[k];
            if (d.crossings[k].sign() > 0)
                q += bits[k] ? -3 : -2;
            else
                q += bits[k] ? 2 : 3;
        }
        ResolvedWeb rw = resolve(d, bits);
        relabel_resolved(rw, cd.dict);
        cd.res[r] = std::move(rw);
        cd.qshift[r] = q;
        cd.degree[r] = ones - d.n_minus;
    }
    return cd;
}

// the zip/unzip movie for flipping crossing k from 0 to 1 at resolution r
FoamMovie cube_edge_movie(const LinkDiagram& d, const CubeData& cd, unsigned r, int k) {
    unsigned r2 = r | (1u << k);
    const ResolvedWeb& A = cd.res[r];
    const ResolvedWeb& B = cd.res[r2];
    FoamMovie mv;
    mv.frames = {A.web, B.web};
    if (d.crossings[k].sign() > 0) {
        // zip: oriented smoothing -> singular piece
        const auto& pa = A.pieces[k];
        const auto& pb = B.pieces[k];
        MZip z;
        z.s1 = pa.under_edge;
        z.s2 = pa.over_edge;
        z.s1_loop = A.web.edges.at(z.s1).is_loop();
        z.s2_loop = A.web.edges.at(z.s2).is_loop();
        z.u = pb.u;
        z.w = pb.w;
        z.m = pb.m;
        if (z.s1 != z.s2) {
            z.in1 = pb.a_edge;
            z.out1 = z.s1_loop ? -1 : pb.b_edge;
            z.in2 = pb.d_edge;
            z.out2 = z.s2_loop ? -1 : pb.c_edge;
        } else if (z.s1_loop) {
            z.in1 = pb.a_edge; // == c_edge
            z.mid = pb.d_edge; // == b_edge
        } else {
            // three remnants: the middle one both starts at w and ends at u
            std::set<int> at_u{pb.a_edge, pb.d_edge}, at_w{pb.b_edge, pb.c_edge};
            int mid = -1;
            for (int e : at_u)
                if (at_w.count(e)) mid = e;
            if (mid < 0) throw InternalError("cube edge: self-zip without a middle remnant");
            z.mid = mid;
            z.in1 = pb.a_edge == mid ? pb.d_edge : pb.a_edge;
            z.out1 = pb.b_edge == mid ? pb.c_edge : pb.b_edge;
        }
        mv.moves.push_back(z);
    } else {
        // unzip: singular piece -> oriented smoothing
        const auto& pa = A.pieces[k];
        const auto& pb = B.pieces[k];
        MUnzip uz;
        uz.u = pa.u;
        uz.w = pa.w;
        uz.m = pa.m;
        uz.eu = {pa.a_edge, pa.b_edge};
        uz.fw = {pa.d_edge, pa.c_edge};
        auto mk_out = [&](int id, std::set<int> members) {
            MUnzip::Out o;
            o.id = id;
            o.loop = B.web.edges.at(id).is_loop();
            o.members.assign(members.begin(), members.end());
            return o;
        };
        if (pb.under_edge == pb.over_edge) {
            uz.outs = {mk_out(pb.under_edge, {pa.a_edge, pa.d_edge, pa.b_edge, pa.c_edge})};
        } else {
            uz.outs = {mk_out(pb.under_edge, {pa.a_edge, pa.d_edge}),
                       mk_out(pb.over_edge, {pa.b_edge, pa.c_edge})};
        }
        // align member order with the gluing chains
        Web tmp = A.web;
        apply_check_unzip(tmp, uz, B.web);
        mv.moves.push_back(uz);
    }
    return mv;
}

} // namespace

MatrixComplex build_cube(const LinkDiagram& d, bool drop_signs_for_test) {
    CubeData cd = build_cube_data(d);
    int c = (int)d.crossings.size();
    MatrixComplex mc;
    mc.min_degree = -d.n_minus;
    int levels = c + 1;
    mc.objs.resize(levels);
    mc.entries.resize(levels > 0 ? levels - 1 : 0);
    std::vector<std::pair<int, int>> where(1u << c); // resolution -> (level, index)
    for (unsigned r = 0; r < (1u << c); ++r) {
        int lvl = cd.degree[r] - mc.min_degree;
        where[r] = {lvl, (int)mc.objs[lvl].size()};
        mc.objs[lvl].push_back(WebObject{cd.res[r].web, cd.qshift[r]});
    }
    for (unsigned r = 0; r < (1u << c); ++r) {
        for (int k = 0; k < c; ++k) {
            if ((r >> k) & 1) continue;
            unsigned r2 = r | (1u << k);
            int ones_below = 0;
            for (int t = 0; t < k; ++t) ones_below += (r >> t) & 1;
            GroundElt sign((ones_below % 2 == 0 || drop_signs_for_test) ? 1 : -1);
            FoamMovie mv = cube_edge_movie(d, cd, r, k);
            auto [l1, i1] = where[r];
            auto [l2, i2] = where[r2];
            if (l2 != l1 + 1) throw InternalError("cube: degree bookkeeping error");
            mc.entries[l1][{i2, i1}] = FoamExpression::single(sign, std::move(mv));
        }
    }
    return mc;
}

LaurentPoly cube_bracket(const LinkDiagram& d) {
    CubeData cd = build_cube_data(d);
    LaurentPoly total;
    for (size_t r = 0; r < cd.res.size(); ++r) {
        LaurentPoly term = kuperberg_bracket(cd.res[r].web).shifted(cd.qshift[r]);
        total += term * Int(cd.degree[r] % 2 == 0 ? 1 : -1);
    }
    return total;
}

} // namespace usl3
