#include "restree/black_forest.hpp"

#include <doctest.h>

#include <optional>
#include <vector>

using namespace restree;

namespace {

sim_config cfg(word_t delta, std::uint64_t seed = 1) {
    sim_config c;
    c.delta = delta;
    c.seed = seed;
    return c;
}

// plain-storage mirror of the forest; the brute-force oracle for every query
struct mirror_forest {
    struct node {
        q_handle parent;
        word_t depth;
        word_t wsum;
        word_t wmin;
        t_index sat;
        t_index wit;
    };
    std::vector<node> nodes;

    q_handle add(q_handle parent, t_index sat, word_t wsum, word_t wmin,
                 t_index wit) {
        word_t d = parent == q_null ? 0 : nodes[parent].depth + 1;
        nodes.push_back({parent, d, wsum, wmin, sat, wit});
        return nodes.size() - 1;
    }
    std::optional<t_index> la(q_handle v, word_t k) const {
        if (k > nodes[v].depth) return std::nullopt;
        for (word_t i = 0; i < k; ++i) v = nodes[v].parent;
        return nodes[v].sat;
    }
    // shallowest ancestor with inclusive path weight <= k, walking up
    std::optional<std::pair<q_handle, word_t>> wla(q_handle v,
                                                   word_t k) const {
        word_t total = nodes[v].wsum;
        if (total > k) return std::nullopt;
        while (nodes[v].parent != q_null &&
               total + nodes[nodes[v].parent].wsum <= k) {
            v = nodes[v].parent;
            total += nodes[v].wsum;
        }
        return std::make_pair(v, total);
    }
    std::pair<word_t, t_index> bvq(q_handle a, q_handle b) const {
        word_t best = nodes[b].wmin;
        t_index wit = nodes[b].wit;
        while (b != a) {
            b = nodes[b].parent;
            if (nodes[b].wmin < best) {
                best = nodes[b].wmin;
                wit = nodes[b].wit;
            }
        }
        return {best, wit};
    }
    q_handle root_of(q_handle v) const {
        while (nodes[v].parent != q_null) v = nodes[v].parent;
        return v;
    }
    bool is_ancestor(q_handle a, q_handle b) const {
        while (true) {
            if (a == b) return true;
            if (nodes[b].parent == q_null) return false;
            b = nodes[b].parent;
        }
    }
    q_handle lca(q_handle u, q_handle v) const {
        while (nodes[u].depth > nodes[v].depth) u = nodes[u].parent;
        while (nodes[v].depth > nodes[u].depth) v = nodes[v].parent;
        while (u != v) {
            u = nodes[u].parent;
            v = nodes[v].parent;
        }
        return u;
    }
};

// grow matching forests; shape: mostly chains with occasional branching
void grow(q_forest& q, mirror_forest& m, rng64& rng, int n, int roots = 2) {
    for (int i = 0; i < n; ++i) {
        word_t wsum = 1 + rng.below(16);
        word_t wmin = rng.below(12) == 0 ? wmin_infinity : 1 + rng.below(9);
        t_index sat = 1000 + i;
        t_index wit = 2000 + i;
        if (i < roots) {
            q.new_tree_q(sat, wsum, wmin, wit);
            m.add(q_null, sat, wsum, wmin, wit);
        } else {
            q_handle p = rng.below(m.nodes.size());
            if (rng.below(3) != 0) p = m.nodes.size() - 1; // bias to chains
            auto h = q.add_leaf_q(p, sat, wsum, wmin, wit);
            REQUIRE(h.has_value());
            m.add(p, sat, wsum, wmin, wit);
        }
    }
}

} // namespace

TEST_CASE("new_tree_q: fresh roots, distinct trees") {
    memory_system ms(cfg(1));
    q_forest q(ms);
    q_handle a = q.new_tree_q(7, 1, wmin_infinity, t_null);
    CHECK(a == 0);
    CHECK(q.depth(a) == 0);
    CHECK(q.satellite(a) == 7);
    q_handle b = q.new_tree_q(9, 1, wmin_infinity, t_null);
    CHECK(b == 1);
    auto r = q.lca_q(a, b);
    CHECK(r.st == lca_q_result::status::different_trees);
    CHECK(r.root_u == a);
    CHECK(r.root_v == b);
}

TEST_CASE("add_leaf_q: chain depths, jump-table law, unit agg sums") {
    memory_system ms(cfg(2));
    q_forest q(ms);
    q_handle root = q.new_tree_q(0, 1, 1, 0);
    q_handle cur = root;
    for (int i = 1; i <= 5; ++i) {
        auto h = q.add_leaf_q(cur, i, 1, 1, i);
        REQUIRE(h.has_value());
        CHECK(q.depth(*h) == (word_t)i);
        cur = *h;
    }
    // cur is at depth 5; its 2^1 jump lands on the node at depth 3
    auto g = q.la_q_handle(cur, 2);
    REQUIRE(g.has_value());
    CHECK(q.depth(*g) == 3);
    // agg_sum over 4 unit-weight ancestors
    auto four_up = q.la_q_handle(cur, 4);
    auto w = q.wla_q(cur, 5); // room for self + 4 ancestors, all weight 1
    CHECK(w.st == wla_q_result::status::found);
    CHECK(w.node == *four_up);
    CHECK(w.total == 5);
    // invalid parent handle is a query-error signal
    CHECK_FALSE(q.add_leaf_q(42, 9, 1, 1, 9).has_value());
}

TEST_CASE("la_q against the parent-walk oracle") {
    memory_system ms(cfg(1, 33));
    q_forest q(ms);
    mirror_forest m;
    rng64 rng(33);
    grow(q, m, rng, 200);
    for (q_handle v = 0; v < m.nodes.size(); ++v) {
        for (word_t k = 0; k <= m.nodes[v].depth; ++k) {
            auto got = q.la_q(v, k);
            auto want = m.la(v, k);
            REQUIRE(got.has_value());
            CHECK(*got == *want);
        }
        CHECK_FALSE(q.la_q(v, m.nodes[v].depth + 1).has_value());
    }
    CHECK_FALSE(q.la_q(m.nodes.size() + 3, 0).has_value());
}

TEST_CASE("wla_q against the linear-scan oracle") {
    memory_system ms(cfg(2, 44));
    q_forest q(ms);
    mirror_forest m;
    rng64 rng(44);
    grow(q, m, rng, 150, 1);
    for (q_handle v = 0; v < m.nodes.size(); ++v) {
        for (word_t k = 0; k < 80; k += 3) {
            auto got = q.wla_q(v, k);
            auto want = m.wla(v, k);
            if (!want) {
                CHECK(got.st == wla_q_result::status::none);
            } else {
                REQUIRE(got.st == wla_q_result::status::found);
                CHECK(got.node == want->first);
                CHECK(got.total == want->second);
            }
        }
    }
    CHECK(q.wla_q(m.nodes.size() + 1, 5).st == wla_q_result::status::invalid);
}

TEST_CASE("bvq_q against the path-walk oracle, deepest tie wins") {
    memory_system ms(cfg(2, 55));
    q_forest q(ms);
    mirror_forest m;
    rng64 rng(55);
    grow(q, m, rng, 150, 1);
    for (q_handle b = 0; b < m.nodes.size(); ++b) {
        q_handle a = b;
        while (true) {
            auto got = q.bvq_q(a, b);
            auto want = m.bvq(a, b);
            REQUIRE(got.has_value());
            CHECK(got->first == want.first);
            CHECK(got->second == want.second);
            if (m.nodes[a].parent == q_null) break;
            a = m.nodes[a].parent;
        }
    }
    // a == b edge: the node's own weight and witness
    CHECK(q.bvq_q(3, 3)->first == m.nodes[3].wmin);
    // non-ancestor pair rejects
    q_handle x = 0, y = 0;
    for (q_handle i = 0; i < m.nodes.size(); ++i)
        for (q_handle j = 0; j < m.nodes.size(); ++j)
            if (!m.is_ancestor(i, j) && !m.is_ancestor(j, i)) {
                x = i;
                y = j;
            }
    if (x != y) CHECK_FALSE(q.bvq_q(x, y).has_value());
}

TEST_CASE("lca_q against the brute-force oracle") {
    memory_system ms(cfg(1, 66));
    q_forest q(ms);
    mirror_forest m;
    rng64 rng(66);
    grow(q, m, rng, 120, 3);
    for (int t = 0; t < 2000; ++t) {
        q_handle u = rng.below(m.nodes.size());
        q_handle v = rng.below(m.nodes.size());
        auto r = q.lca_q(u, v);
        if (m.root_of(u) != m.root_of(v)) {
            CHECK(r.st == lca_q_result::status::different_trees);
            CHECK(r.root_u == m.root_of(u));
            CHECK(r.root_v == m.root_of(v));
            continue;
        }
        REQUIRE(r.st == lca_q_result::status::same_tree);
        q_handle y = m.lca(u, v);
        CHECK(r.y == y);
        if (u == y) {
            CHECK(r.a_is_u);
            CHECK(r.a == u);
        } else {
            CHECK(m.nodes[r.a].parent == y);
            CHECK(m.is_ancestor(r.a, u));
        }
        if (v == y) {
            CHECK(r.b_is_v);
            CHECK(r.b == v);
        } else {
            CHECK(m.nodes[r.b].parent == y);
            CHECK(m.is_ancestor(r.b, v));
        }
    }
    CHECK(q.lca_q(0, m.nodes.size() + 9).st == lca_q_result::status::invalid);
}

TEST_CASE("incorruptibility: answers survive any within-budget corruption") {
    for (word_t delta : {1, 2, 3}) {
        memory_system ms(cfg(delta, 77 + delta));
        q_forest q(ms);
        mirror_forest m;
        rng64 rng(77 + delta);
        grow(q, m, rng, 60, 1);
        // spend the whole budget on adversarial aux words
        for (word_t i = 0; i < delta; ++i) {
            std::size_t addr = ms.adv().rng().below(ms.aux().size());
            ms.adv().corrupt_word(ms, arena_id::aux, addr,
                                  ms.adv().rng().next(), t_null);
        }
        CHECK(ms.adv().log().size() == delta);
        for (q_handle v = 0; v < m.nodes.size(); ++v) {
            for (word_t k = 0; k <= m.nodes[v].depth; k += 1 + delta) {
                auto got = q.la_q(v, k);
                REQUIRE(got.has_value());
                CHECK(*got == *m.la(v, k));
            }
            auto w = q.wla_q(v, 25);
            auto want = m.wla(v, 25);
            if (want) {
                CHECK(w.node == want->first);
                CHECK(w.total == want->second);
            } else {
                CHECK(w.st == wla_q_result::status::none);
            }
        }
    }
}

TEST_CASE("under delta corruptions a freshly written node reads back") {
    memory_system ms(cfg(2, 5));
    q_forest q(ms);
    q_handle h = q.new_tree_q(31, 6, 4, 17);
    for (int i = 0; i < 2; ++i)
        ms.adv().corrupt_word(ms, arena_id::aux,
                              ms.adv().rng().below(ms.aux().size()),
                              ms.adv().rng().next(), t_null);
    CHECK(q.satellite(h) == 31);
    CHECK(q.weight_sum(h) == 6);
    CHECK(q.weight_min(h) == 4);
    CHECK(q.min_witness(h) == 17);
    CHECK(q.depth(h) == 0);
    CHECK(q.parent(h) == q_null);
}

TEST_CASE("jump-table laws hold for every node after every insertion") {
    memory_system ms(cfg(2, 88));
    q_forest q(ms);
    mirror_forest m;
    rng64 rng(88);
    grow(q, m, rng, 80, 1);
    for (q_handle h = 0; h < m.nodes.size(); ++h) {
        word_t d = q.depth(h);
        if (d == 0) continue;
        // jump[0] is the parent; jump[j] composes jump[j-1] twice
        CHECK(q.la_q_handle(h, 1).value() == q.parent(h));
        for (std::size_t j = 1; (word_t{1} << j) <= d; ++j) {
            q_handle half = *q.la_q_handle(h, word_t{1} << (j - 1));
            CHECK(*q.la_q_handle(h, word_t{1} << j) ==
                  *q.la_q_handle(half, word_t{1} << (j - 1)));
        }
        // agg_sum composition checked through exact wla budgets: climbing 2^j
        // ancestors accumulates both halves
        for (std::size_t j = 0; (word_t{1} << j) <= d; ++j) {
            word_t span = word_t{1} << j;
            word_t sum = 0;
            q_handle cur = h;
            for (word_t s = 0; s < span; ++s) {
                cur = m.nodes[cur].parent;
                sum += m.nodes[cur].wsum;
            }
            // an exact budget for self + the 2^j-ancestor span lands exactly
            // on jump[j] with the aggregated total (weights are positive)
            auto w = q.wla_q(h, m.nodes[h].wsum + sum);
            REQUIRE(w.st == wla_q_result::status::found);
            word_t target = *q.la_q_handle(h, span);
            CHECK(m.nodes[w.node].depth <= m.nodes[target].depth);
            CHECK(w.total <= m.nodes[h].wsum + sum);
        }
    }
}
