#pragma once

#include "usl3/laurent.hpp"
#include "usl3/web.hpp"

namespace usl3 {

// Graded rank of the web's state space, by the skein recursion:
// circle -> [3] * rest, digon -> [2] * collapsed, square -> sum of the two
// reconnections, empty -> 1.
LaurentPoly kuperberg_bracket(const Web& w);

// Same value computed with a randomized choice of reducible face at each
// step; used by the order-independence property test.
LaurentPoly kuperberg_bracket_randomized(const Web& w, unsigned long long seed);

// Web surgeries shared with the delooping machinery.
Web remove_loop(const Web& w, int loop_edge);
Web collapse_digon(const Web& w, const FaceLocation& digon, int* joined_edge_out = nullptr);
// reconnection of a square face: which = 0 joins externals across edge_cycle
// positions (0,1) and (2,3); which = 1 joins (1,2) and (3,0)
Web reconnect_square(const Web& w, const FaceLocation& square, int which);

} // namespace usl3
