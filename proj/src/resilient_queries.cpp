#include "restree/resilient_queries.hpp"

namespace restree {

namespace {

// shared anchor search for the long query paths: locate the first black
// vertex at distance [delta, 2*delta] from v, accumulating the weight sum of
// v..anchor (exclusive) and the weight minimum of v..anchor (inclusive)
struct anchor_result {
    bool found = false;
    bool hit_root = false;
    t_index black = t_null;
    word_t q = q_null;
    word_t dist = 0;
    word_t weight_below = 0; // v (incl) .. black (excl)
    word_t min_weight = wmin_infinity;
    t_index min_witness = t_null;
};

anchor_result find_black_anchor(resilient_tree& tree, t_index v) {
    const word_t delta = tree.delta();
    safe_frame fr(tree.ms().safe(), 5);
    word_t& cur = fr[0];
    word_t& d = fr[1];
    word_t& wsum = fr[2];
    word_t& minv = fr[3];
    word_t& minwit = fr[4];
    cur = v;
    d = 0;
    wsum = 0;
    minv = wmin_infinity;
    minwit = t_null;
    anchor_result res;
    while (true) {
        node_record rec = tree.read(cur);
        if (rec.weight < minv) {
            minv = rec.weight;
            minwit = cur;
        }
        if (d >= delta && rec.q != q_null) {
            res.found = true;
            res.black = cur;
            res.q = rec.q;
            break;
        }
        if (d == 2 * delta) break;
        if (cur == 0) {
            res.hit_root = true;
            break;
        }
        wsum = wsum + rec.weight;
        cur = tree.effective_parent(cur, rec);
        d = d + 1;
    }
    res.dist = d;
    res.weight_below = wsum;
    res.min_weight = minv;
    res.min_witness = minwit;
    return res;
}

} // namespace

wla_outcome weighted_la(resilient_tree& tree, t_index v, word_t k) {
    const word_t delta = tree.delta();
    if (v >= tree.size() || k < 1) return {outcome_status::error, t_null};
    safe_frame fr(tree.ms().safe(), 3);
    word_t& cur = fr[0];
    word_t& total = fr[1];
    word_t& base = fr[2];

    // optimistic phase: the answer may be within 10*delta levels
    cur = v;
    total = 0;
    for (word_t step = 0;; ++step) {
        node_record rec = tree.read(cur);
        total = total + rec.weight;
        if (total >= k) return {outcome_status::answer, cur};
        if (cur == 0) return {outcome_status::error, t_null};
        if (step == 10 * delta) break;
        cur = tree.effective_parent(cur, rec);
    }

    anchor_result anc = find_black_anchor(tree, v);
    if (!anc.found) return {outcome_status::error, t_null};

    // skip over the regular middle part via the weighted LA on Q
    base = anc.weight_below;
    if (base >= k) {
        cur = anc.black; // even the anchor is too heavy; climb from it
    } else {
        wla_q_result qr = tree.forest().wla_q(anc.q, k - base);
        switch (qr.st) {
        case wla_q_result::status::invalid:
            return {outcome_status::error, t_null};
        case wla_q_result::status::none:
            cur = anc.black;
            break;
        case wla_q_result::status::found:
            // qr.total covers the Q path endpoints included; drop the top
            // node's own span so base counts exactly the weights below b'
            base = base + qr.total - tree.forest().weight_sum(qr.node);
            cur = tree.forest().satellite(qr.node);
            break;
        }
    }

    // final climb: at most 6*delta steps above b'
    total = base;
    for (word_t step = 0;; ++step) {
        node_record rec = tree.read(cur);
        total = total + rec.weight;
        if (total >= k) return {outcome_status::answer, cur};
        if (cur == 0) return {outcome_status::error, t_null};
        if (step == 6 * delta) break;
        cur = tree.effective_parent(cur, rec);
    }
    return {outcome_status::error, t_null};
}

namespace {

// bottleneck query along an ancestor path: top must be an ancestor of
// bottom; ties keep the deepest minimum
bvq_outcome bvq_ancestor(resilient_tree& tree, t_index top, t_index bottom) {
    const word_t delta = tree.delta();
    const record_codec& codec = tree.codec();
    safe_frame fr(tree.ms().safe(), 5);
    word_t& d = fr[0];
    word_t& cur = fr[1];
    word_t& minv = fr[2];
    word_t& minwit = fr[3];
    word_t& steps = fr[4];
    {
        node_record rt = tree.read(top);
        node_record rb = tree.read(bottom);
        d = codec.mod_sub(rb.depth, rt.depth);
    }
    if (d >= tree.size()) return {outcome_status::error, t_null, 0};

    if (d < 10 * delta) {
        cur = bottom;
        minv = wmin_infinity;
        minwit = t_null;
        for (word_t s = 0;; ++s) {
            node_record rec = tree.read(cur);
            if (rec.weight < minv) {
                minv = rec.weight;
                minwit = cur;
            }
            if (s == d) break;
            if (cur == 0) return {outcome_status::error, t_null, 0};
            cur = tree.effective_parent(cur, rec);
        }
        if (cur != top) return {outcome_status::error, t_null, 0};
        return {outcome_status::answer, minwit, minv};
    }

    anchor_result anc = find_black_anchor(tree, bottom);
    if (!anc.found) return {outcome_status::error, t_null, 0};
    minv = anc.min_weight; // covers bottom..anchor inclusive
    minwit = anc.min_witness;

    word_t jumps = d / delta - 7;
    auto hb = tree.forest().la_q_handle(anc.q, jumps);
    if (!hb) return {outcome_status::error, t_null, 0};
    auto qmin = tree.forest().bvq_q(*hb, anc.q);
    if (!qmin) return {outcome_status::error, t_null, 0};

    // climb from b' to the top endpoint, at most 7*delta steps
    cur = tree.forest().satellite(*hb);
    steps = 0;
    word_t min3 = wmin_infinity;
    t_index wit3 = t_null;
    while (true) {
        node_record rec = tree.read(cur);
        if (rec.weight < min3) {
            min3 = rec.weight;
            wit3 = cur;
        }
        if (cur == top) break;
        if (cur == 0 || steps == 7 * delta)
            return {outcome_status::error, t_null, 0};
        cur = tree.effective_parent(cur, rec);
        steps = steps + 1;
    }

    // deepest region first so ties keep the vertex closest to bottom
    if (qmin->first < minv) {
        minv = qmin->first;
        minwit = qmin->second;
    }
    if (min3 < minv) {
        minv = min3;
        minwit = wit3;
    }
    return {outcome_status::answer, minwit, minv};
}

} // namespace

bvq_outcome bvq(resilient_tree& tree, t_index u, t_index v) {
    if (u >= tree.size() || v >= tree.size())
        return {outcome_status::error, t_null, 0};
    lca_outcome z = lca(tree, u, v);
    if (z.st != outcome_status::answer)
        return {outcome_status::error, t_null, 0};
    if (z.v == u) return bvq_ancestor(tree, u, v);
    if (z.v == v) return bvq_ancestor(tree, v, u);
    bvq_outcome ru = bvq_ancestor(tree, z.v, u);
    if (ru.st != outcome_status::answer) return ru;
    bvq_outcome rv = bvq_ancestor(tree, z.v, v);
    if (rv.st != outcome_status::answer) return rv;
    return rv.min_weight <= ru.min_weight ? rv : ru;
}

naive_lca_result naive_lca(resilient_tree& tree, t_index u, t_index v) {
    const word_t delta = tree.delta();
    const record_codec& codec = tree.codec();
    if (u >= tree.size() || v >= tree.size()) return {};
    safe_frame fr(tree.ms().safe(), 2);
    word_t& cur1 = fr[0];
    word_t& cur2 = fr[1];
    cur1 = u;
    cur2 = v;
    {
        node_record ru = tree.read(u);
        node_record rv = tree.read(v);
        word_t diff_uv = codec.mod_sub(ru.depth, rv.depth);
        word_t diff_vu = codec.mod_sub(rv.depth, ru.depth);
        if (diff_uv != 0) {
            if (diff_uv < tree.size()) {
                la_outcome r = tree.la(u, diff_uv);
                if (r.st != outcome_status::answer) return {};
                cur1 = r.v;
            } else if (diff_vu < tree.size()) {
                la_outcome r = tree.la(v, diff_vu);
                if (r.st != outcome_status::answer) return {};
                cur2 = r.v;
            } else {
                return {};
            }
        }
    }
    for (word_t it = 0;; ++it) {
        if (cur1 == cur2) return {true, cur1};
        if (it == 10 * delta) break;
        if (cur1 == 0 || cur2 == 0) break; // a parent is missing
        node_record r1 = tree.read(cur1);
        node_record r2 = tree.read(cur2);
        cur1 = tree.effective_parent(cur1, r1);
        cur2 = tree.effective_parent(cur2, r2);
    }
    return {};
}

namespace {

// climb from a white endpoint to its first black ancestor, at most 2*delta
// levels up
bool lift_to_black(resilient_tree& tree, t_index e, t_index& black_t,
                   word_t& black_q) {
    const word_t delta = tree.delta();
    safe_frame fr(tree.ms().safe(), 1);
    word_t& cur = fr[0];
    cur = e;
    for (word_t s = 0; s <= 2 * delta; ++s) {
        node_record rec = tree.read(cur);
        if (rec.q != q_null) {
            black_t = cur;
            black_q = rec.q;
            return true;
        }
        if (cur == 0) return false;
        cur = tree.effective_parent(cur, rec);
    }
    return false;
}

// verified different-trees fallback: root must be the apparent ancestor of
// its paired endpoint, then the naive query runs against the opposite one
lca_outcome try_root(resilient_tree& tree, t_index root_t, t_index paired,
                     t_index opposite) {
    const record_codec& codec = tree.codec();
    node_record rr = tree.read(root_t);
    node_record re = tree.read(paired);
    word_t k = codec.mod_sub(re.depth, rr.depth);
    if (k >= tree.size()) return {outcome_status::error, t_null};
    la_outcome r = tree.la(paired, k);
    if (r.st != outcome_status::answer || r.v != root_t)
        return {outcome_status::error, t_null};
    naive_lca_result nr = naive_lca(tree, root_t, opposite);
    if (!nr.conclusive) return {outcome_status::error, t_null};
    return {outcome_status::answer, nr.v};
}

} // namespace

lca_outcome lca(resilient_tree& tree, t_index u, t_index v) {
    if (u >= tree.size() || v >= tree.size())
        return {outcome_status::error, t_null};
    naive_lca_result direct = naive_lca(tree, u, v);
    if (direct.conclusive) return {outcome_status::answer, direct.v};

    safe_frame fr(tree.ms().safe(), 4);
    word_t& ub = fr[0];
    word_t& uq = fr[1];
    word_t& vb = fr[2];
    word_t& vq = fr[3];
    {
        t_index bt;
        word_t bq;
        if (!lift_to_black(tree, u, bt, bq))
            return {outcome_status::error, t_null};
        ub = bt;
        uq = bq;
        if (!lift_to_black(tree, v, bt, bq))
            return {outcome_status::error, t_null};
        vb = bt;
        vq = bq;
    }
    lca_q_result qr = tree.forest().lca_q(uq, vq);
    if (qr.st == lca_q_result::status::invalid)
        return {outcome_status::error, t_null};

    if (qr.st == lca_q_result::status::same_tree) {
        t_index at = tree.forest().satellite(qr.a);
        t_index bt = tree.forest().satellite(qr.b);
        naive_lca_result nr = naive_lca(tree, at, bt);
        if (!nr.conclusive) return {outcome_status::error, t_null};
        return {outcome_status::answer, nr.v};
    }

    // different trees in Q: at least one of the two roots lies on the u..v
    // path (Lemma on a/b closeness); try the apparently deeper one first
    t_index a_t = tree.forest().satellite(qr.root_u);
    t_index b_t = tree.forest().satellite(qr.root_v);
    const record_codec& codec = tree.codec();
    word_t da, db;
    {
        node_record ra = tree.read(a_t);
        node_record rb = tree.read(b_t);
        da = ra.depth;
        db = rb.depth;
    }
    bool a_deeper = codec.mod_sub(da, db) != 0 &&
                    codec.mod_sub(da, db) < tree.size();
    // the v-side fallback implements the "between b' and u" reading; count
    // how often the literal "between b' and v" would have answered otherwise
    auto try_b_side = [&]() {
        lca_outcome r = try_root(tree, b_t, v, u);
        if (r.st == outcome_status::answer) {
            naive_lca_result literal = naive_lca(tree, b_t, v);
            if (!literal.conclusive || literal.v != r.v)
                ++tree.ms().lca_fallback_literal_divergence;
        }
        return r;
    };
    lca_outcome first = a_deeper ? try_root(tree, a_t, u, v) : try_b_side();
    if (first.st == outcome_status::answer) return first;
    return a_deeper ? try_b_side() : try_root(tree, a_t, u, v);
}

} // namespace restree
