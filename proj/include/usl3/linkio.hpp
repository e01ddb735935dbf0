#pragma once

#include <array>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace usl3 {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One crossing of an oriented diagram in PD form.
// Half-edges (arcs) are listed counterclockwise starting from the incoming
// under-strand: under enters at he[0] and leaves at he[2]; the over-strand
// occupies he[1], he[3]. over_in_at_1 records its direction: if true the over
// strand enters at he[1] and leaves at he[3], which makes the crossing
// negative; the over strand running he[3] -> he[1] makes it positive.
struct Crossing {
    std::array<int, 4> he{};
    bool over_in_at_1 = true;
    int sign() const { return over_in_at_1 ? -1 : +1; }
};

// Oriented link diagram: crossings over arcs plus crossingless unknot
// components. Arcs are identified by arbitrary integer labels, each label
// occurring exactly twice over all crossing tuples.
struct LinkDiagram {
    std::vector<Crossing> crossings;
    int unknot_components = 0; // closed components with no crossings

    // derived combinatorics, filled by finalize()
    std::vector<int> arcs;          // sorted arc labels
    std::vector<int> arc_component; // component index per arcs[] entry
    int n_components = 0;           // includes unknot_components
    int n_plus = 0, n_minus = 0;

    int component_of_arc(int arc) const;
    int writhe() const { return n_plus - n_minus; }

    // half the signed count of crossings between component sets A and B
    int linking_number(const std::set<int>& A, const std::set<int>& B) const;

    // diagram of the sublink spanned by `keep` (component indices; indexes
    // into 0..n_components-1, unknot components occupy the tail indices)
    LinkDiagram sublink(const std::set<int>& keep) const;

    std::string to_pd_string() const;
    std::string to_json() const;
};

// Validates arc multiplicities, infers over-strand directions from the global
// orientation, computes signs and components. Throws ParseError on malformed
// input.
LinkDiagram finalize_diagram(std::vector<Crossing> crossings, int unknot_components);

LinkDiagram parse_pd(const std::string& text);
LinkDiagram parse_pd_json(const std::string& json_text);

// Braid word over s1, s2, ... and inverses ("s1 s2^-1", also "1 -2").
// The closure is the trace closure, strands numbered left to right.
LinkDiagram parse_braid(const std::string& word, int strands = 0);

struct CorpusDiagram {
    std::string name;  // diagram name
    std::string link;  // link this diagram presents (invariance group key)
    LinkDiagram diagram;
};

std::vector<CorpusDiagram> load_corpus(const std::string& path);

} // namespace usl3
