#include "restree/black_forest.hpp"

namespace restree {

q_forest::q_forest(memory_system& ms)
    : ms_(ms),
      slots_(2 * ms.delta() + 1),
      lmax_(ms.config().q_lmax),
      stride_words_((f_levels + 4 * lmax_) * slots_),
      count_slot_(ms.safe().acquire(1)) {
    ms_.safe().slot(count_slot_) = 0;
}

q_forest::~q_forest() { ms_.safe().release(count_slot_, 1); }

word_t q_forest::size() { return ms_.safe().slot(count_slot_); }

replicated_cell q_forest::cell(q_handle h, std::size_t field_index) const {
    std::size_t base = static_cast<std::size_t>(h) * stride_words_ +
                       field_index * slots_;
    return replicated_cell{base, static_cast<std::uint32_t>(slots_)};
}

replicated_cell q_forest::level_cell(q_handle h, std::size_t level,
                                     std::size_t off) const {
    return cell(h, f_levels + 4 * level + off);
}

word_t q_forest::rd(q_handle h, std::size_t field_index) {
    return rep_read(ms_, cell(h, field_index));
}

word_t q_forest::depth(q_handle h) { return rd(h, f_depth); }
q_handle q_forest::parent(q_handle h) { return rd(h, f_parent); }
t_index q_forest::satellite(q_handle h) { return rd(h, f_sat); }
word_t q_forest::weight_sum(q_handle h) { return rd(h, f_wsum); }
word_t q_forest::weight_min(q_handle h) { return rd(h, f_wmin); }
t_index q_forest::min_witness(q_handle h) { return rd(h, f_wit); }

q_handle q_forest::alloc_node(t_index v, word_t wsum, word_t wmin, word_t wit,
                              q_handle par, word_t d) {
    q_handle h = size();
    std::size_t base = ms_.aux().size();
    if (base != static_cast<std::size_t>(h) * stride_words_)
        throw simulation_error("q_forest arena layout out of sync");
    for (std::size_t i = 0; i < stride_words_; ++i) ms_.aux().append(0);
    // clamp the additive weight into [1, w_max]; the min weight keeps its
    // +infinity sentinel
    word_t qmax = ms_.config().q_w_max;
    if (wsum < 1) wsum = 1;
    if (wsum > qmax) wsum = qmax;
    if (wmin != wmin_infinity && wmin > qmax) wmin = qmax;
    if (wmin == 0) wmin = 1;
    rep_write(ms_, cell(h, f_parent), par);
    rep_write(ms_, cell(h, f_depth), d);
    rep_write(ms_, cell(h, f_wsum), wsum);
    rep_write(ms_, cell(h, f_wmin), wmin);
    rep_write(ms_, cell(h, f_sat), v);
    rep_write(ms_, cell(h, f_wit), wit);
    ms_.safe().slot(count_slot_) = h + 1;
    return h;
}

q_handle q_forest::new_tree_q(t_index v, word_t wsum, word_t wmin,
                              word_t wit) {
    return alloc_node(v, wsum, wmin, wit, q_null, 0);
}

std::optional<q_handle> q_forest::add_leaf_q(q_handle par, t_index v,
                                             word_t wsum, word_t wmin,
                                             word_t wit) {
    if (!valid(par)) return std::nullopt;
    safe_frame fr(ms_.safe(), 2);
    word_t& d = fr[0];
    word_t& mid = fr[1];
    d = depth(par) + 1;
    if (d >= (word_t{1} << lmax_))
        throw simulation_error("q_forest depth exceeds configured q_lmax");
    q_handle h = alloc_node(v, wsum, wmin, wit, par, d);
    // level 0 spans exactly the parent
    rep_write(ms_, level_cell(h, 0, 0), par);
    rep_write(ms_, level_cell(h, 0, 1), weight_sum(par));
    rep_write(ms_, level_cell(h, 0, 2), weight_min(par));
    rep_write(ms_, level_cell(h, 0, 3), min_witness(par));
    for (std::size_t j = 1; (word_t{1} << j) <= d; ++j) {
        mid = rep_read(ms_, level_cell(h, j - 1, 0));
        rep_write(ms_, level_cell(h, j, 0),
                  rep_read(ms_, level_cell(mid, j - 1, 0)));
        rep_write(ms_, level_cell(h, j, 1),
                  rep_read(ms_, level_cell(h, j - 1, 1)) +
                      rep_read(ms_, level_cell(mid, j - 1, 1)));
        // span minimum: ties keep the lower (deeper) half's witness
        word_t lo_v = rep_read(ms_, level_cell(h, j - 1, 2));
        word_t hi_v = rep_read(ms_, level_cell(mid, j - 1, 2));
        if (hi_v < lo_v) {
            rep_write(ms_, level_cell(h, j, 2), hi_v);
            rep_write(ms_, level_cell(h, j, 3),
                      rep_read(ms_, level_cell(mid, j - 1, 3)));
        } else {
            rep_write(ms_, level_cell(h, j, 2), lo_v);
            rep_write(ms_, level_cell(h, j, 3),
                      rep_read(ms_, level_cell(h, j - 1, 3)));
        }
    }
    return h;
}

std::optional<q_handle> q_forest::la_q_handle(q_handle v, word_t k) {
    if (!valid(v)) return std::nullopt;
    safe_frame fr(ms_.safe(), 2);
    word_t& cur = fr[0];
    word_t& rem = fr[1];
    cur = v;
    rem = k;
    if (rem > depth(v)) return std::nullopt;
    for (std::size_t j = lmax_; j-- > 0;) {
        if (rem & (word_t{1} << j)) {
            cur = rep_read(ms_, level_cell(cur, j, 0));
            rem &= ~(word_t{1} << j);
        }
    }
    return cur;
}

std::optional<t_index> q_forest::la_q(q_handle v, word_t k) {
    auto h = la_q_handle(v, k);
    if (!h) return std::nullopt;
    return satellite(*h);
}

wla_q_result q_forest::wla_q(q_handle v, word_t k) {
    if (!valid(v)) return {};
    safe_frame fr(ms_.safe(), 4);
    word_t& cur = fr[0];
    word_t& total = fr[1];
    word_t& cur_depth = fr[2];
    word_t& span = fr[3];
    total = weight_sum(v);
    if (total > k) return {wla_q_result::status::none, q_null, 0};
    cur = v;
    cur_depth = depth(v);
    for (std::size_t j = lmax_; j-- > 0;) {
        if ((word_t{1} << j) <= cur_depth) {
            span = rep_read(ms_, level_cell(cur, j, 1));
            if (total + span <= k) {
                total = total + span;
                cur = rep_read(ms_, level_cell(cur, j, 0));
                cur_depth = cur_depth - (word_t{1} << j);
            }
        }
    }
    return {wla_q_result::status::found, cur, total};
}

std::optional<std::pair<word_t, t_index>> q_forest::bvq_q(q_handle a,
                                                          q_handle b) {
    if (!valid(a) || !valid(b)) return std::nullopt;
    safe_frame fr(ms_.safe(), 5);
    word_t& cur = fr[0];
    word_t& rem = fr[1];
    word_t& best_v = fr[2];
    word_t& best_w = fr[3];
    word_t& da = fr[4];
    da = depth(a);
    rem = depth(b);
    if (da > rem) return std::nullopt;
    rem = rem - da;
    auto anc = la_q_handle(b, rem);
    if (!anc || *anc != a) return std::nullopt;
    cur = b;
    best_v = weight_min(b);
    best_w = min_witness(b);
    for (std::size_t j = lmax_; j-- > 0;) {
        if (rem & (word_t{1} << j)) {
            word_t sv = rep_read(ms_, level_cell(cur, j, 2));
            if (sv < best_v) { // tie keeps the deeper candidate
                best_v = sv;
                best_w = rep_read(ms_, level_cell(cur, j, 3));
            }
            cur = rep_read(ms_, level_cell(cur, j, 0));
            rem &= ~(word_t{1} << j);
        }
    }
    return std::make_pair(best_v, best_w);
}

lca_q_result q_forest::lca_q(q_handle u, q_handle v) {
    if (!valid(u) || !valid(v)) return {};
    safe_frame fr(ms_.safe(), 4);
    word_t& u0 = fr[0];
    word_t& v0 = fr[1];
    word_t& du = fr[2];
    word_t& dv = fr[3];
    du = depth(u);
    dv = depth(v);
    auto ru = la_q_handle(u, du);
    auto rv = la_q_handle(v, dv);
    lca_q_result res;
    res.root_u = *ru;
    res.root_v = *rv;
    if (*ru != *rv) {
        res.st = lca_q_result::status::different_trees;
        return res;
    }
    u0 = u;
    v0 = v;
    if (du > dv) u0 = *la_q_handle(u, du - dv);
    if (dv > du) v0 = *la_q_handle(v, dv - du);
    if (u0 == v0) {
        res.y = u0;
    } else {
        word_t d = du < dv ? du : dv;
        for (std::size_t j = lmax_; j-- > 0;) {
            if ((word_t{1} << j) <= d) {
                word_t ju = rep_read(ms_, level_cell(u0, j, 0));
                word_t jv = rep_read(ms_, level_cell(v0, j, 0));
                if (ju != jv) {
                    u0 = ju;
                    v0 = jv;
                    d = d - (word_t{1} << j);
                }
            }
        }
        res.y = parent(u0);
    }
    res.st = lca_q_result::status::same_tree;
    word_t dy = depth(res.y);
    if (u == res.y) {
        res.a = u;
        res.a_is_u = true;
    } else {
        res.a = *la_q_handle(u, du - dy - 1);
    }
    if (v == res.y) {
        res.b = v;
        res.b_is_v = true;
    } else {
        res.b = *la_q_handle(v, dv - dy - 1);
    }
    return res;
}

} // namespace restree
