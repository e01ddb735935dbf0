#pragma once

#include <variant>
#include <vector>

#include "usl3/ground.hpp"
#include "usl3/web.hpp"

namespace usl3 {

// Elementary slices of a foam movie. Each move stores the full
// before/after correspondence so movies can be reversed and so the foam
// geometry (facets, singular circles, Euler characteristics) can be
// reconstructed without re-deriving any topology.

struct MBirth {
    int loop = -1;
};
struct MDeath {
    int loop = -1;
};
struct MDot {
    int edge = -1;
    int count = 1;
};

// Merge two anti-parallel strands into the two-vertex singular piece.
// s1 == s2 is a self-zip. Produced remnants:
//   edge strand s (x->y):  in = (x->u), out = (w->y)
//   loop strand s:         in = remnant (w->u), out = -1
//   self-zip edge:         in1 = (x->u), mid = (w->u), out1 = (w->y)
//   self-zip loop:         in1, mid = the two remnant arcs (w->u)
struct MZip {
    int s1 = -1, s2 = -1;
    bool s1_loop = false, s2_loop = false;
    int u = -1, w = -1, m = -1;
    int in1 = -1, out1 = -1, in2 = -1, out2 = -1, mid = -1;
    bool self() const { return s1 == s2; }
    // smoothing pairs of the reversed move (also the seam connections):
    // each branch of the singular arc joins (edge at u) to (edge at w)
    std::array<std::pair<int, int>, 2> branch_pairs() const {
        if (!self()) {
            return {{{in1, s1_loop ? in1 : out1}, {in2, s2_loop ? in2 : out2}}};
        }
        if (s1_loop) return {{{in1, mid}, {mid, in1}}};
        return {{{in1, mid}, {mid, out1}}};
    }
};

// Remove the singular piece (u, w, m), smoothing the four side edges into
// the stored pairs: pair k joins eu[k] (at u) with fw[k] (at w).
struct MUnzip {
    int u = -1, w = -1, m = -1;
    std::array<int, 2> eu{-1, -1};
    std::array<int, 2> fw{-1, -1};
    struct Out {
        int id = -1;
        bool loop = false;
        std::vector<int> members; // consumed side edges composing this item
    };
    std::vector<Out> outs;
};

// Ordinary saddle between two anti-parallel strands (s1 == s2 self-saddle).
struct MSaddle {
    int s1 = -1, s2 = -1;
    bool s1_loop = false, s2_loop = false;
    struct Out {
        int id = -1;
        bool loop = false;
    };
    std::vector<Out> outs;
};

using Move = std::variant<MBirth, MDeath, MDot, MZip, MUnzip, MSaddle>;

// A foam presented as a movie of webs, read from bottom to top.
struct FoamMovie {
    std::vector<Web> frames; // frames.size() == moves.size() + 1
    std::vector<Move> moves;

    const Web& bottom() const { return frames.front(); }
    const Web& top() const { return frames.back(); }
    bool closed() const { return bottom().empty() && top().empty(); }
    int dot_count() const;

    static FoamMovie identity(const Web& w) { return FoamMovie{{w}, {}}; }
    FoamMovie reversed() const;

    // canonical interleaving of slices with disjoint support
    void normalize();

    std::string to_json() const;
};

// q(f) = -2 chi(f) + chi(boundary f) + 2 (number of dots)
int q_degree(const FoamMovie& m);

// Movie construction: wraps a web and applies moves, recording frames.
class MovieBuilder {
public:
    explicit MovieBuilder(Web start) { m_.frames.push_back(std::move(start)); }

    const Web& current() const { return m_.frames.back(); }
    int birth();                       // returns new loop id
    void death(int loop);
    void dot(int edge, int count = 1);
    MZip zip(int s1, int s2);          // returns the applied move
    MUnzip unzip(int m);               // forward smoothing pairs from rotations
    MSaddle saddle(int s1, int s2);
    void push(Move mv, Web next);      // pre-built transition (cube edges)

    FoamMovie take() { return std::move(m_); }

private:
    FoamMovie m_;
};

// Formal Z[a,b,c]-linear combination of movies with common boundary webs.
struct FoamExpression {
    Web bottom, top;
    std::vector<std::pair<GroundElt, FoamMovie>> terms;

    static FoamExpression zero(const Web& b, const Web& t) { return {b, t, {}}; }
    static FoamExpression single(GroundElt c, FoamMovie m);
    static FoamExpression identity(const Web& w);

    bool is_zero_formally() const { return terms.empty(); }
    FoamExpression& operator+=(const FoamExpression& o);
    FoamExpression operator*(const GroundElt& c) const;
    FoamExpression operator-() const { return *this * GroundElt(-1); }
};

// g after f: bottom(f) -> top(f) == bottom(g) -> top(g).
FoamMovie compose_movies(const FoamMovie& f, const FoamMovie& g);
FoamExpression compose(const FoamExpression& f, const FoamExpression& g);

// (CN) applied to a horizontal circle: the edge must be a free loop of the
// given frame. Returns the six-term expression.
FoamExpression neck_cut(const FoamMovie& m, int frame, int loop_edge);

// (3D) applied to the facet over `edge` at `frame`, which must carry >= 3
// dots in total.
FoamExpression reduce_dots(const FoamMovie& m, int frame, int edge);

} // namespace usl3
