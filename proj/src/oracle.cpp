#include "restree/oracle.hpp"

namespace restree {

void oracle_tree::init_root(word_t root_weight) {
    parent_.assign(1, t_null);
    depth_.assign(1, 0);
    weight_.assign(1, root_weight);
    corrupted_.assign(1, false);
    corrupted_count_ = 0;
    root_ = 0;
}

void oracle_tree::init_parent_array(const std::vector<t_index>& parents,
                                    const std::vector<word_t>& weights) {
    std::size_t n = parents.size();
    parent_ = parents;
    weight_ = weights;
    depth_.assign(n, 0);
    corrupted_.assign(n, false);
    corrupted_count_ = 0;
    // depths by repeated relaxation; parents may appear in any order
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (parents[i] == t_null) {
            root_ = i;
            done[i] = true;
        }
    }
    std::vector<t_index> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        stack.clear();
        t_index v = i;
        while (!done[v]) {
            stack.push_back(v);
            v = parent_[v];
            if (stack.size() > n)
                throw simulation_error("parent array contains a cycle");
        }
        while (!stack.empty()) {
            t_index w = stack.back();
            stack.pop_back();
            depth_[w] = depth_[parent_[w]] + 1;
            done[w] = true;
        }
    }
}

t_index oracle_tree::add_leaf(t_index requested_parent, word_t weight) {
    t_index n = parent_.size();
    t_index par = requested_parent < n ? requested_parent : root_;
    parent_.push_back(par);
    depth_.push_back(depth_[par] + 1);
    weight_.push_back(weight);
    corrupted_.push_back(false);
    return n;
}

void oracle_tree::mark_corrupted(t_index v) {
    if (v < corrupted_.size() && !corrupted_[v]) {
        corrupted_[v] = true;
        ++corrupted_count_;
    }
}

bool oracle_tree::is_ancestor(t_index u, t_index v) const {
    while (true) {
        if (u == v) return true;
        if (v == root_) return false;
        v = parent_[v];
    }
}

la_outcome oracle_tree::o_la(t_index v, word_t k) const {
    for (word_t i = 0; i < k; ++i) {
        if (v == root_) return {outcome_status::root_reached, t_null};
        v = parent_[v];
    }
    return {outcome_status::answer, v};
}

wla_outcome oracle_tree::o_wla(t_index v, word_t k) const {
    word_t total = 0;
    while (true) {
        total += weight_[v];
        if (total >= k) return {outcome_status::answer, v};
        if (v == root_) return {outcome_status::error, t_null};
        v = parent_[v];
    }
}

lca_outcome oracle_tree::o_lca(t_index u, t_index v) const {
    while (depth_[u] > depth_[v]) u = parent_[u];
    while (depth_[v] > depth_[u]) v = parent_[v];
    while (u != v) {
        u = parent_[u];
        v = parent_[v];
    }
    return {outcome_status::answer, u};
}

bvq_outcome oracle_tree::o_bvq(t_index u, t_index v) const {
    t_index z = o_lca(u, v).v;
    // per-side scan from the deep end: strictly-smaller update keeps the
    // deepest minimum on each side; the v side wins ties across sides
    auto side_min = [&](t_index bottom) {
        bvq_outcome r{outcome_status::answer, bottom, weight_[bottom]};
        t_index cur = bottom;
        while (cur != z) {
            cur = parent_[cur];
            if (weight_[cur] < r.min_weight) {
                r.min_weight = weight_[cur];
                r.witness = cur;
            }
        }
        return r;
    };
    bvq_outcome rv = side_min(v);
    if (z == u) return rv;
    bvq_outcome ru = side_min(u);
    if (z == v) return ru;
    return rv.min_weight <= ru.min_weight ? rv : ru;
}

bool oracle_tree::path_uncorrupted(t_index low, t_index high) const {
    t_index cur = low;
    while (true) {
        if (corrupted_[cur]) return false;
        if (cur == high) return true;
        if (cur == root_) return false; // high was not an ancestor
        cur = parent_[cur];
    }
}

bool oracle_tree::must_match_la(t_index v, word_t k) const {
    la_outcome o = o_la(v, k);
    t_index top = o.st == outcome_status::answer ? o.v : root_;
    return path_uncorrupted(v, top);
}

bool oracle_tree::must_match_wla(t_index v, word_t k) const {
    wla_outcome o = o_wla(v, k);
    t_index top = o.st == outcome_status::answer ? o.v : root_;
    return path_uncorrupted(v, top);
}

bool oracle_tree::must_match_lca(t_index u, t_index v) const {
    t_index z = o_lca(u, v).v;
    return path_uncorrupted(u, z) && path_uncorrupted(v, z);
}

bool oracle_tree::must_match_bvq(t_index u, t_index v) const {
    return must_match_lca(u, v);
}

t_index coloring_replay::add_leaf(t_index requested_parent) {
    t_index x = nodes_.size();
    t_index par = requested_parent < x ? requested_parent : 0;
    nodes_.push_back({par, fl_unspent, 0, 0, false, t_null});

    // discovery: check and annotate the flags of the delta lowest proper
    // ancestors
    t_index y = x;
    for (word_t i = 1; i <= delta_; ++i) {
        if (y == 0) return x;
        y = nodes_[y].parent;
        if (nodes_[y].flag == fl_spent) return x;
        nodes_[y].flag = fl_annotated;
        nodes_[y].ann_x = x;
        nodes_[y].ann_i = i;
    }

    // is y near-a-black?
    t_index yprime = y;
    word_t ell = 0;
    bool near = false;
    while (ell < delta_ && yprime != 0 && !near) {
        yprime = nodes_[yprime].parent;
        ++ell;
        if (nodes_[yprime].black) near = true;
    }
    if (!near) {
        // otherwise it must be black-free
        t_index z = yprime;
        for (word_t t = 0; t + 1 < delta_; ++t) {
            if (z == 0) break;
            z = nodes_[z].parent;
            if (nodes_[z].black) return x;
        }
    }

    // execution: re-verify annotations, spend flags, color
    t_index zc = x;
    t_index xprime = t_null;
    for (word_t i = 1; i <= delta_; ++i) {
        if (zc == 0) return x;
        zc = nodes_[zc].parent;
        if (nodes_[zc].flag != fl_annotated || nodes_[zc].ann_x != x ||
            nodes_[zc].ann_i != i)
            return x;
        if (near && i == ell) xprime = zc;
        nodes_[zc].flag = fl_spent;
    }
    if (near) {
        nodes_[xprime].black = true;
        nodes_[xprime].q_parent = yprime;
    } else {
        nodes_[y].black = true;
        nodes_[y].q_parent = t_null;
    }
    ++black_count_;
    return x;
}

} // namespace restree
