#pragma once
#include "restree/outcomes.hpp"
#include "restree/resilient_tree.hpp"

// Query suite over the dynamic resilient tree: weighted level ancestors,
// bottleneck vertices, and lowest common ancestors (naive + Q-assisted).
namespace restree {

struct naive_lca_result {
    bool conclusive = false;
    t_index v = t_null;
};

// deepest ancestor u of v with total weight of v..u (inclusive) >= k
wla_outcome weighted_la(resilient_tree& tree, t_index v, word_t k);

// minimum-weight vertex on the u..v path; ties: the v side of the split
// wins, and within a side the deepest vertex wins
bvq_outcome bvq(resilient_tree& tree, t_index u, t_index v);

// level-align then walk up in lockstep for at most 10*delta iterations
naive_lca_result naive_lca(resilient_tree& tree, t_index u, t_index v);

lca_outcome lca(resilient_tree& tree, t_index u, t_index v);

} // namespace restree
