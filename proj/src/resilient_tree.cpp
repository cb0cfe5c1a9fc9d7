#include "restree/resilient_tree.hpp"

namespace restree {

resilient_tree::resilient_tree(memory_system& ms, word_t root_weight)
    : ms_(ms),
      codec_(ms.config().profile, ms.record_w_max()),
      q_(ms),
      n_slot_(ms.safe().acquire(1)) {
    node_record root;
    root.parent = t_null;
    root.q = q_null;
    root.depth = 0;
    root.weight = codec_.clamp_weight(root_weight);
    append_record(ms_, codec_, root);
    ms_.safe().slot(n_slot_) = 1;
}

resilient_tree::~resilient_tree() { ms_.safe().release(n_slot_, 1); }

climb_result resilient_tree::climb(t_index v, word_t steps) {
    safe_frame fr(ms_.safe(), 1);
    word_t& cur = fr[0];
    cur = v;
    for (word_t s = 0; s < steps; ++s) {
        if (cur == 0) return {0, true};
        node_record rec = read(cur);
        cur = effective_parent(cur, rec);
    }
    return {cur, false};
}

t_index resilient_tree::add_leaf(t_index x_par, word_t weight) {
    const word_t delta = ms_.delta();
    safe_frame fr(ms_.safe(), 18);
    word_t& x = fr[0];
    word_t& par_eff = fr[1];
    word_t& x_weight = fr[2];
    word_t& x_depth = fr[3];
    word_t& cur = fr[4];
    word_t& par = fr[5];
    word_t& w_disc = fr[6];   // W: weights of x (incl) .. y' (excl)
    word_t& y = fr[7];
    word_t& y_weight = fr[8];
    word_t& ell = fr[9];
    word_t& near = fr[10];
    word_t& ybar = fr[11];    // stashed q_{y'}
    word_t& xprime = fr[12];
    word_t& w_exec = fr[13];  // W': weights of x (incl) .. x' (excl)
    word_t& sum = fr[14];
    word_t& minv = fr[15];
    word_t& minwit = fr[16];
    word_t& exceptional = fr[17];

    x = size();
    if (codec_.profile() == record_profile::packed &&
        x + 1 >= (word_t{1} << 20) - 1)
        throw simulation_error("packed profile is limited to 2^20-1 vertices");
    par_eff = x_par < x ? x_par : 0;
    x_weight = codec_.clamp_weight(weight);
    {
        node_record prec = read(par_eff);
        x_depth = (prec.depth + 1) & codec_.depth_mask();
    }
    // the record of x stays staged in safe memory until commit
    auto commit = [&]() -> t_index {
        node_record rec;
        rec.parent = par_eff;
        rec.q = q_null;
        rec.depth = x_depth;
        rec.weight = x_weight;
        append_record(ms_, codec_, rec);
        ms_.safe().slot(n_slot_) = x + 1;
        return x;
    };

    // ---- discovery: check and annotate the flags of the delta lowest
    // proper ancestors of x
    cur = x;
    par = par_eff;
    w_disc = x_weight;
    for (word_t i = 1; i <= delta; ++i) {
        if (cur == 0) return commit();
        cur = par;
        node_record rec = read(cur);
        par = effective_parent(cur, rec);
        if (rec.flag.k == flag_value::kind::spent) return commit();
        rec.flag = {flag_value::kind::annotated, x, i};
        if (rec.cba.k != cba_value::kind::set)
            rec.cba = {cba_value::kind::annotated, 0, x, i};
        write(cur, rec);
        w_disc = w_disc + rec.weight;
        if (i == delta) y_weight = rec.weight;
    }
    y = cur;

    // is y near-a-black? track the distance ell to the closest black proper
    // ancestor y'
    ell = 0;
    near = 0;
    ybar = q_null;
    while (ell < delta && cur != 0 && !near) {
        cur = par;
        ell = ell + 1;
        node_record rec = read(cur);
        par = effective_parent(cur, rec);
        if (rec.cba.k != cba_value::kind::set) {
            rec.cba = {cba_value::kind::annotated, 0, x, delta + ell};
            write(cur, rec);
        }
        if (rec.q != q_null) {
            near = 1;
            ybar = rec.q;
        } else {
            w_disc = w_disc + rec.weight;
        }
    }
    if (!near) {
        // not near-a-black: insist it is black-free over the remaining
        // delta-1 levels, otherwise no recoloring happens
        for (word_t t = 0; t + 1 < delta; ++t) {
            if (cur == 0) break;
            cur = par;
            node_record rec = read(cur);
            par = effective_parent(cur, rec);
            if (rec.q != q_null) return commit();
        }
    }

    // ---- execution: re-verify annotations, spend the delta flags, keep the
    // cba chain consistent, and color a vertex
    cur = x;
    par = par_eff;
    xprime = t_null;
    w_exec = 0;
    sum = x_weight;
    minv = wmin_infinity;
    minwit = t_null;
    exceptional = 0;
    const word_t limit = near ? delta + ell - 1 : delta;
    for (word_t i = 1; i <= limit; ++i) {
        if (cur == 0) return commit();
        cur = par;
        node_record rec = read(cur);
        par = effective_parent(cur, rec);
        bool modified = false;
        if (i <= delta) {
            if (!codec_.flag_is_annotation(rec.flag, x, i)) return commit();
            if (near && i == ell) {
                xprime = cur;
                w_exec = sum;
            }
            rec.flag = {flag_value::kind::spent, 0, 0};
            modified = true;
        }
        if (near && i >= ell) { // cur lies in [x', y')
            if (codec_.cba_is_set_to(rec.cba, ybar)) {
                // consistent
            } else if (codec_.cba_is_annotation(rec.cba, x, i)) {
                rec.cba = {cba_value::kind::set, ybar, 0, 0};
                modified = true;
            } else {
                exceptional = 1; // cba left unaltered
            }
            if (rec.weight < minv) {
                minv = rec.weight;
                minwit = cur;
            }
        }
        sum = sum + rec.weight;
        if (modified) write(cur, rec);
    }

    word_t qh;
    t_index colored;
    if (near) {
        word_t wsum = w_disc - w_exec; // clamped by the forest
        if (exceptional || !q_.valid(ybar)) {
            exceptional = 1;
            qh = q_.new_tree_q(xprime, wsum, minv, minwit);
        } else {
            qh = *q_.add_leaf_q(ybar, xprime, wsum, minv, minwit);
        }
        colored = xprime;
    } else {
        qh = q_.new_tree_q(y, y_weight, wmin_infinity, t_null);
        colored = y;
    }
    {
        node_record rec = read(colored);
        rec.q = qh;
        write(colored, rec);
    }
    ms_.colorings.push_back({ms_.op_index(), colored, qh, near != 0,
                             exceptional != 0});
    return commit();
}

la_outcome resilient_tree::la(t_index v, word_t k) {
    const word_t delta = ms_.delta();
    ms_.last_la = {};
    if (v >= size()) return {outcome_status::error, t_null};
    if (k <= 7 * delta) {
        climb_result c = climb(v, k);
        if (c.root_reached) return {outcome_status::root_reached, t_null};
        return {outcome_status::answer, c.v};
    }
    safe_frame fr(ms_.safe(), 5);
    word_t& cur = fr[0];
    word_t& d = fr[1];
    word_t& qv = fr[2];
    word_t& kp = fr[3];
    word_t& jumps = fr[4];
    {
        climb_result c = climb(v, delta);
        if (c.root_reached) return {outcome_status::root_reached, t_null};
        cur = c.v;
    }
    // search a black node at distances [delta, 2*delta] from v
    d = delta;
    qv = q_null;
    while (true) {
        node_record rec = read(cur);
        if (rec.q != q_null) {
            qv = rec.q;
            break;
        }
        if (d == 2 * delta) break;
        if (cur == 0) return {outcome_status::root_reached, t_null};
        cur = effective_parent(cur, rec);
        d = d + 1;
    }
    if (qv == q_null) return {outcome_status::error, t_null};
    kp = k - d - 5 * delta;
    jumps = kp / delta;
    auto sat = q_.la_q(qv, jumps);
    if (!sat) {
        // distinguish a too-shallow Q chain (honest: k exceeds the depth of
        // v) from a corrupted q pointer
        if (q_.valid(qv)) return {outcome_status::root_reached, t_null};
        return {outcome_status::error, t_null};
    }
    word_t k_rest = kp - jumps * delta + 5 * delta;
    ms_.last_la = {true, d, jumps, k_rest};
    climb_result c = climb(*sat, k_rest);
    if (c.root_reached) return {outcome_status::root_reached, t_null};
    return {outcome_status::answer, c.v};
}

} // namespace restree
