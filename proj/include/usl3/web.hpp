#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "usl3/linkio.hpp"

namespace usl3 {

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A dart is one end of a non-loop edge: end 0 sits at the tail vertex,
// end 1 at the head vertex.
struct Dart {
    int edge = -1;
    int end = 0;
    bool operator==(const Dart& o) const { return edge == o.edge && end == o.end; }
};

struct WebEdge {
    int tail = -1; // -1 on both means free loop
    int head = -1;
    bool mark = false;
    bool is_loop() const { return tail < 0; }
};

struct WebVertex {
    bool all_in = true;           // sink vertex (all edges point in) or source
    std::array<Dart, 3> rot{};    // counterclockwise cyclic order
};

// Closed trivalent web: oriented edges, source/sink vertices, rotation
// system, free loops. Immutable by convention once built; moves produce new
// webs.
struct Web {
    std::map<int, WebEdge> edges;
    std::map<int, WebVertex> verts;

    bool empty() const { return edges.empty(); }
    int fresh_edge_id() const { return edges.empty() ? 0 : edges.rbegin()->first + 1; }
    int fresh_vert_id() const { return verts.empty() ? 0 : verts.rbegin()->first + 1; }

    int vertex_of(const Dart& d) const {
        const WebEdge& e = edges.at(d.edge);
        return d.end == 0 ? e.tail : e.head;
    }

    // "" if valid, otherwise a description of the first violated invariant
    std::string validate() const;

    bool operator==(const Web& o) const { return edges == o.edges && verts == o.verts; }
    bool operator!=(const Web& o) const { return !(*this == o); }

    // canonical string key, invariant under relabeling isomorphism
    std::string canonical_key() const;

    std::string to_json() const;
};

inline bool operator==(const WebEdge& a, const WebEdge& b) {
    return a.tail == b.tail && a.head == b.head && a.mark == b.mark;
}
inline bool operator==(const WebVertex& a, const WebVertex& b) {
    return a.all_in == b.all_in && a.rot == b.rot;
}

// A face of the rotation system, as the cyclic list of edges around it.
struct Face {
    std::vector<int> edge_cycle;   // edges in traversal order
    std::vector<int> vert_cycle;   // vertex entered after each edge
};

std::vector<Face> enumerate_faces(const Web& w);

struct FaceLocation {
    enum Kind { Circle, Digon, Square, None } kind = None;
    int loop_edge = -1;            // Circle
    std::vector<int> edge_cycle;   // Digon/Square
    std::vector<int> vert_cycle;
};

// Smallest reducible face: free loops first, then digons, then squares,
// ties broken by smallest minimal edge id. None only for the empty web.
FaceLocation find_face(const Web& w);

// The web obtained by replacing each crossing of d by its 0- or 1-resolution.
// bits[k] applies to crossing k. New middle edges produced by singular
// resolutions are marked. The returned map names each edge by provenance,
// used to align cube neighbours: arcs -> sorted arc list, middles -> crossing.
struct ResolvedWeb {
    Web web;
    // provenance: for each edge id, either ("arcs", sorted arc labels) or
    // ("mid", crossing index) or ("unknot", index)
    std::map<int, std::string> provenance;
    // for crossing k resolved by smoothing: the through-edges; resolved
    // singular: the u/w/m ids
    struct CrossingPieces {
        bool singular = false;
        int under_edge = -1, over_edge = -1; // smoothing: classes through the crossing
        int u = -1, w = -1, m = -1;          // singular piece
        int a_edge = -1, b_edge = -1, c_edge = -1, d_edge = -1; // stub classes at slots
    };
    std::vector<CrossingPieces> pieces;
};

ResolvedWeb resolve(const LinkDiagram& d, const std::vector<int>& bits);

} // namespace usl3
