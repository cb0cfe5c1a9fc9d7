#include "restree/static_la.hpp"

#include <algorithm>

namespace restree {

static_structure::static_structure(memory_system& ms,
                                   const std::vector<t_index>& parents,
                                   const std::vector<word_t>& weights)
    : ms_(ms),
      codec_(ms.config().profile, ms.record_w_max()),
      q_(ms),
      n_(parents.size()) {
    if (n_ == 0) throw simulation_error("static build: empty tree");
    const word_t delta = ms_.delta();

    // depths + root + cycle detection
    std::vector<word_t> depth(n_, 0);
    std::vector<char> done(n_, 0);
    std::size_t roots = 0;
    for (std::size_t v = 0; v < n_; ++v) {
        if (parents[v] == t_null) {
            root_ = v;
            done[v] = 1;
            ++roots;
        } else if (parents[v] >= n_) {
            throw simulation_error("static build: parent out of range");
        }
    }
    if (roots != 1) throw simulation_error("static build: need exactly one root");
    std::vector<t_index> stack;
    for (std::size_t v = 0; v < n_; ++v) {
        if (done[v]) continue;
        stack.clear();
        t_index cur = v;
        while (!done[cur]) {
            stack.push_back(cur);
            cur = parents[cur];
            if (stack.size() > n_)
                throw simulation_error("static build: parent array has a cycle");
        }
        while (!stack.empty()) {
            t_index w = stack.back();
            stack.pop_back();
            depth[w] = depth[parents[w]] + 1;
            done[w] = 1;
        }
    }

    // subtree heights by one pass over vertices in decreasing depth
    std::vector<word_t> height(n_, 0);
    std::vector<t_index> order(n_);
    for (std::size_t v = 0; v < n_; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](t_index a, t_index b) {
        return depth[a] > depth[b];
    });
    for (t_index v : order) {
        if (parents[v] != t_null) {
            word_t h = height[v] + 1;
            if (h > height[parents[v]]) height[parents[v]] = h;
        }
    }

    built_black_.assign(n_, false);
    for (std::size_t v = 0; v < n_; ++v)
        built_black_[v] = depth[v] % delta == 0 && height[v] + 1 >= delta;
    // note: height >= delta-1 written as height+1 >= delta to stay unsigned

    // nearest black proper ancestor, in increasing depth order
    std::vector<t_index> nb(n_, t_null);
    std::sort(order.begin(), order.end(), [&](t_index a, t_index b) {
        return depth[a] < depth[b];
    });
    for (t_index v : order) {
        if (parents[v] == t_null) continue;
        t_index p = parents[v];
        nb[v] = built_black_[p] ? p : nb[p];
    }

    // build Q (corruption-free by assumption) and commit the records
    bool saved = ms_.suspend_adversary;
    ms_.suspend_adversary = true;
    std::vector<word_t> qh(n_, q_null);
    for (t_index v : order) {
        if (!built_black_[v]) continue;
        ++black_count_;
        if (nb[v] == t_null) {
            qh[v] = q_.new_tree_q(v, 1, wmin_infinity, t_null);
        } else {
            qh[v] = *q_.add_leaf_q(qh[nb[v]], v, 1, wmin_infinity, t_null);
        }
    }
    for (std::size_t v = 0; v < n_; ++v) {
        node_record rec;
        rec.parent = parents[v];
        rec.q = qh[v];
        rec.depth = depth[v] & codec_.depth_mask();
        rec.weight = codec_.clamp_weight(v < weights.size() ? weights[v] : 1);
        append_record(ms_, codec_, rec);
    }
    ms_.suspend_adversary = saved;
}

static_structure::~static_structure() = default;

static_climb_result static_structure::climb(t_index v, word_t steps) {
    safe_frame fr(ms_.safe(), 1);
    word_t& cur = fr[0];
    cur = v;
    for (word_t s = 0; s < steps; ++s) {
        node_record rec = read(cur);
        if (rec.parent == t_null) return {outcome_status::root_reached, 0};
        if (rec.parent >= n_) return {outcome_status::error, 0};
        cur = rec.parent;
    }
    return {outcome_status::answer, cur};
}

la_outcome static_structure::la_static(t_index v, word_t k) {
    const word_t delta = ms_.delta();
    ms_.last_la = {};
    if (v >= n_) return {outcome_status::error, t_null};
    if (k <= 2 * delta) {
        static_climb_result c = climb(v, k);
        return {c.st, c.st == outcome_status::answer ? c.v : t_null};
    }
    safe_frame fr(ms_.safe(), 3);
    word_t& cur = fr[0];
    word_t& d = fr[1];
    word_t& qv = fr[2];
    cur = v;
    d = 0;
    qv = q_null;
    while (true) {
        node_record rec = read(cur);
        if (rec.q != q_null) {
            qv = rec.q;
            break;
        }
        if (d == 2 * delta) break;
        if (rec.parent == t_null) {
            // the search walked off the root: the whole path was scanned,
            // so an uncorrupted query can only mean k > depth(v)
            return {outcome_status::root_reached, t_null};
        }
        if (rec.parent >= n_) return {outcome_status::error, t_null};
        cur = rec.parent;
        d = d + 1;
    }
    if (qv == q_null) return {outcome_status::error, t_null};
    word_t kp = k - d;
    word_t jumps = kp / delta;
    auto sat = q_.la_q(qv, jumps);
    if (!sat) {
        if (q_.valid(qv)) return {outcome_status::root_reached, t_null};
        return {outcome_status::error, t_null};
    }
    word_t k_rest = kp - jumps * delta;
    ms_.last_la = {true, d, jumps, k_rest};
    static_climb_result c = climb(*sat, k_rest);
    return {c.st, c.st == outcome_status::answer ? c.v : t_null};
}

} // namespace restree
