#pragma once
#include "restree/faulty_ram.hpp"
#include "restree/outcomes.hpp"

#include <cstdint>
#include <vector>

// Uncorrupted ground truth: a mirror tree kept outside the simulated memory,
// brute-force query answers, and the resilience-contract predicate deciding
// which queries must match. The oracle never reads the unreliable arenas.
namespace restree {

class oracle_tree {
public:
    oracle_tree() = default;
    explicit oracle_tree(word_t root_weight) { init_root(root_weight); }

    void init_root(word_t root_weight);
    // builds a static tree from a parent array (root marked t_null)
    void init_parent_array(const std::vector<t_index>& parents,
                           const std::vector<word_t>& weights);

    // mirrors add_leaf; applies the same invalid-parent rule as the structure
    t_index add_leaf(t_index requested_parent, word_t weight);

    void mark_corrupted(t_index v);
    bool is_corrupted(t_index v) const { return corrupted_[v]; }
    std::size_t corrupted_count() const { return corrupted_count_; }

    std::size_t size() const { return parent_.size(); }
    t_index parent(t_index v) const { return parent_[v]; }
    word_t depth(t_index v) const { return depth_[v]; }
    word_t weight(t_index v) const { return weight_[v]; }
    t_index root() const { return root_; }

    bool is_ancestor(t_index u, t_index v) const; // u ancestor of (or ==) v

    la_outcome o_la(t_index v, word_t k) const;
    wla_outcome o_wla(t_index v, word_t k) const;
    lca_outcome o_lca(t_index u, t_index v) const;
    bvq_outcome o_bvq(t_index u, t_index v) const;

    // true iff the path between low and its ancestor high is corruption-free
    bool path_uncorrupted(t_index low, t_index high) const;

    bool must_match_la(t_index v, word_t k) const;
    bool must_match_wla(t_index v, word_t k) const;
    bool must_match_lca(t_index u, t_index v) const;
    bool must_match_bvq(t_index u, t_index v) const;

private:
    std::vector<t_index> parent_; // t_null at the root
    std::vector<word_t> depth_;
    std::vector<word_t> weight_;
    std::vector<bool> corrupted_;
    std::size_t corrupted_count_ = 0;
    t_index root_ = 0;
};

// Independent replay of the coloring algorithm on plain storage. For
// corruption-free runs the structure's black set and Q parent links must
// equal the replay's exactly; tests and the harness checkpoint on this.
class coloring_replay {
public:
    explicit coloring_replay(word_t delta) : delta_(delta) {
        nodes_.push_back({t_null, fl_unspent, 0, 0, false, t_null});
    }

    t_index add_leaf(t_index requested_parent);

    bool is_black(t_index v) const { return nodes_[v].black; }
    // for black v: the T vertex whose Q node is v's Q parent (t_null = root)
    t_index q_parent_of(t_index v) const { return nodes_[v].q_parent; }
    std::size_t black_count() const { return black_count_; }
    std::size_t size() const { return nodes_.size(); }

private:
    enum flag_state : std::uint8_t { fl_unspent, fl_spent, fl_annotated };
    struct node {
        t_index parent;
        flag_state flag;
        t_index ann_x;
        word_t ann_i;
        bool black;
        t_index q_parent;
    };
    word_t delta_;
    std::vector<node> nodes_;
    std::size_t black_count_ = 0;
};

} // namespace restree
