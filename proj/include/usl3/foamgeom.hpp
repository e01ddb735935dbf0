#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "usl3/foam.hpp"

namespace usl3 {

// Combinatorial model of a closed foam: facets with Euler characteristic,
// dots and boundary-circle count, and singular circles with their three
// facet germs in cyclic order. Prong orbits record how facet boundary
// circles wrap around singular circles (a self-zip can make one facet
// boundary double-cover a circle).
struct AbstractFoam {
    struct Facet {
        int chi = 0;
        int dots = 0;
        int boundary_circles = 0; // number of boundary components
        int genus() const { return (2 - chi - boundary_circles) / 2; }
    };
    struct Circle {
        std::array<int, 3> germ{-1, -1, -1}; // facet ids, cyclic order
        // partition of the three prongs into boundary-circle orbits:
        // orbit id per slot; slots in the same orbit lie on one facet
        // boundary circle (monodromy)
        std::array<int, 3> orbit{0, 1, 2};
        bool twisted() const {
            return orbit[0] == orbit[1] || orbit[0] == orbit[2] || orbit[1] == orbit[2];
        }
    };
    std::vector<Facet> facets;
    std::vector<Circle> circles;

    std::string canonical_key() const;
};

// Extract the abstract geometry of a closed movie. Throws InternalError if
// the movie is not closed or is inconsistent.
AbstractFoam extract_closed(const FoamMovie& m);

} // namespace usl3
