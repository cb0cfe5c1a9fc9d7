#pragma once
#include "restree/faulty_ram.hpp"
#include "restree/record.hpp"
#include "restree/replication.hpp"

#include <optional>

// The resilient auxiliary forest D_Q over black vertices. Every field lives
// in the aux arena as a 2*delta+1 replicated cell, so answers are correct
// under any adversary within budget. Nodes carry binary-lifting jump tables
// with weight-sum and weight-min aggregates:
//   jump[j]     = 2^j-th ancestor
//   agg_sum[j]  = sum of weight_sum over the 2^j ancestors ending at jump[j]
//   agg_min[j]  = (min weight_min, witness) over the same span
// Each node's table has a fixed stride so handle -> address is arithmetic.
namespace restree {

using q_handle = word_t;

struct wla_q_result {
    enum class status : std::uint8_t { found, none, invalid } st =
        status::invalid;
    q_handle node = q_null;
    word_t total = 0; // weight_sum over the Q-path node..start, inclusive
};

struct lca_q_result {
    enum class status : std::uint8_t { same_tree, different_trees, invalid } st =
        status::invalid;
    q_handle y = q_null; // LCA in Q
    q_handle a = q_null; // child of y towards u (or u itself, flagged)
    q_handle b = q_null;
    bool a_is_u = false;
    bool b_is_v = false;
    q_handle root_u = q_null;
    q_handle root_v = q_null;
};

class q_forest {
public:
    explicit q_forest(memory_system& ms);
    ~q_forest();
    q_forest(const q_forest&) = delete;
    q_forest& operator=(const q_forest&) = delete;

    word_t size(); // number of Q vertices (safe-store resident)
    bool valid(q_handle h) { return h < size(); }

    q_handle new_tree_q(t_index v, word_t weight_sum, word_t weight_min,
                        word_t min_witness);
    std::optional<q_handle> add_leaf_q(q_handle parent, t_index v,
                                       word_t weight_sum, word_t weight_min,
                                       word_t min_witness);

    std::optional<t_index> la_q(q_handle v, word_t k);
    std::optional<q_handle> la_q_handle(q_handle v, word_t k);
    wla_q_result wla_q(q_handle v, word_t k);
    std::optional<std::pair<word_t, t_index>> bvq_q(q_handle a, q_handle b);
    lca_q_result lca_q(q_handle u, q_handle v);

    // replicated field reads (valid handle required)
    word_t depth(q_handle h);
    q_handle parent(q_handle h);
    t_index satellite(q_handle h);
    word_t weight_sum(q_handle h);
    word_t weight_min(q_handle h);
    t_index min_witness(q_handle h);

private:
    enum field : std::size_t {
        f_parent = 0,
        f_depth = 1,
        f_wsum = 2,
        f_wmin = 3,
        f_sat = 4,
        f_wit = 5,
        f_levels = 6, // then 4 cells per level: jump, sum, min, wit
    };
    replicated_cell cell(q_handle h, std::size_t field_index) const;
    replicated_cell level_cell(q_handle h, std::size_t level,
                               std::size_t off) const;
    word_t rd(q_handle h, std::size_t field_index);
    q_handle alloc_node(t_index v, word_t wsum, word_t wmin, word_t wit,
                        q_handle parent, word_t depth);

    memory_system& ms_;
    std::size_t slots_;        // 2*delta+1
    std::size_t lmax_;
    std::size_t stride_words_; // (6 + 4*lmax) * slots
    std::size_t count_slot_;   // safe-store slot holding |Q|
};

} // namespace restree
