#pragma once

#include <functional>
#include <optional>
#include <random>

#include "usl3/bracket.hpp"
#include "usl3/eval.hpp"
#include "usl3/foam.hpp"
#include "usl3/linkio.hpp"

namespace usl3 {

struct WebObject {
    Web web;
    int q_shift = 0;
};

// Cochain complex of q-shifted webs with foam-expression differentials.
// entries[k] maps (target index in degree k+1, source index in degree k).
struct MatrixComplex {
    int min_degree = 0;
    std::vector<std::vector<WebObject>> objs;
    std::vector<std::map<std::pair<int, int>, FoamExpression>> entries;

    int degrees() const { return (int)objs.size(); }
    int degree_of(int level) const { return min_degree + level; }

    // sum of coefficients of an entry between empty webs
    static GroundElt scalar_of(const FoamExpression& e);
};

// hypercube of resolutions with the standard sign rule; homological degree
// of a vertex is (#1s) - n_minus, q-shifts are -2/-3 per positive crossing
// resolution and +3/+2 per negative one
MatrixComplex build_cube(const LinkDiagram& d, bool drop_signs_for_test = false);

// graded Euler characteristic of the cube: sum over vertices of
// (-1)^degree q^shift <web>
LaurentPoly cube_bracket(const LinkDiagram& d);

struct DSquaredReport {
    bool ok = true;
    int faces_checked = 0;
    int structural = 0, semantic = 0;
    std::string failure; // first failing pair description
};

// checks d*d = 0 face by face: structural foam comparison always, plus
// closure evaluation against the delooped bases when the webs are small
DSquaredReport verify_d_squared(const LinkDiagram& d, int semantic_max_crossings = 4);
DSquaredReport verify_d_squared(const MatrixComplex& c, int semantic_budget = 2000);

// Free Z[a,b,c]-complex on empty-web generators.
struct ReducedComplex {
    int min_degree = 0;
    std::vector<std::vector<int>> shifts;                  // q-shifts per degree
    std::vector<std::vector<std::vector<GroundElt>>> diff; // [level][tgt][src]
    LaurentPoly graded_euler() const;
};

struct ReduceOptions {
    std::optional<unsigned long long> random_seed; // randomized order when set
    bool keep_units = false; // deloop only, skip Gaussian elimination
};

// delooping + Gaussian elimination, interleaved
ReducedComplex reduce_complex(MatrixComplex c, const ReduceOptions& opt = {});

// Gaussian elimination over Z[a,b,c] on an already-free complex: cancels
// +-1 entries with the zig-zag update until none remain
ReducedComplex gauss_eliminate(ReducedComplex c);

// standalone deloop of a single web: basis movies (empty -> w) and the dual
// projections, with their q-degrees
struct WebBasis {
    std::vector<FoamExpression> incl; // empty -> w
    std::vector<FoamExpression> proj; // w -> empty
    std::vector<int> q;
};
WebBasis web_basis(const Web& w);

// is a foam expression zero in the quotient category? decided by closure
// evaluation against the delooped bases of its boundary webs
bool is_zero_morphism(const FoamExpression& e);

std::string dump_complex_json(const ReducedComplex& c);

} // namespace usl3
