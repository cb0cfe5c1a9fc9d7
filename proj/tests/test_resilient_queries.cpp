#include "restree/resilient_queries.hpp"

#include "restree/adversary_strategies.hpp"
#include "restree/oracle.hpp"

#include <doctest.h>

#include <vector>

using namespace restree;

namespace {

sim_config cfg(word_t delta, std::uint64_t seed = 1) {
    sim_config c;
    c.delta = delta;
    c.seed = seed;
    return c;
}

struct fixture {
    memory_system ms;
    resilient_tree tree;
    oracle_tree oracle;
    rng64 rng;

    fixture(word_t delta, std::uint64_t seed)
        : ms(cfg(delta, seed)), tree(ms), oracle(1), rng(seed * 31 + 1) {
        ms.on_corruption = [this](const corruption_record& cr) {
            if (cr.node != t_null && cr.node < oracle.size())
                oracle.mark_corrupted(cr.node);
        };
    }

    // deep-biased random growth with weights in [1, wmax]
    void grow(word_t n, word_t wmax, int chain_bias = 3) {
        for (word_t i = 1; i < n; ++i) {
            t_index par = rng.below(chain_bias + 1) ? i - 1 : rng.below(i);
            word_t w = 1 + rng.below(wmax);
            tree.add_leaf(par, w);
            oracle.add_leaf(par, w);
        }
    }
};

} // namespace

TEST_CASE("weighted_la: the single-vertex path answers v itself") {
    fixture f(2, 1);
    f.grow(50, 8);
    for (t_index v = 0; v < 50; v += 7) {
        word_t w = f.oracle.weight(v);
        wla_outcome r = weighted_la(f.tree, v, w);
        CHECK(r.st == outcome_status::answer);
        CHECK(r.v == v);
    }
}

TEST_CASE("unit weights: weighted_la(v,k) == la(v,k-1)") {
    for (word_t delta : {1, 2, 5}) {
        fixture f(delta, 40 + delta);
        f.grow(400, 1); // all weights 1
        for (int s = 0; s < 400; ++s) {
            t_index v = f.rng.below(400);
            word_t k = 1 + f.rng.below(f.oracle.depth(v) + 1);
            wla_outcome w = weighted_la(f.tree, v, k);
            la_outcome l = f.tree.la(v, k - 1);
            REQUIRE(l.st == outcome_status::answer);
            REQUIRE(w.st == outcome_status::answer);
            CHECK(w.v == l.v);
        }
    }
}

TEST_CASE("weighted_la equals the brute-force scan, corruption-free") {
    for (word_t delta : {1, 3, 6}) {
        fixture f(delta, 60 + delta);
        f.grow(500, 8);
        for (int s = 0; s < 600; ++s) {
            t_index v = f.rng.below(500);
            word_t k = 1 + f.rng.below(f.oracle.depth(v) * 8 + 16);
            wla_outcome got = weighted_la(f.tree, v, k);
            wla_outcome want = f.oracle.o_wla(v, k);
            CHECK(got == want);
        }
    }
}

TEST_CASE("bvq: single vertex and monotone chain endpoints") {
    fixture f(2, 9);
    // chain with weights strictly increasing from the root
    word_t n = 60;
    for (word_t i = 1; i < n; ++i) {
        f.tree.add_leaf(i - 1, i + 1);
        f.oracle.add_leaf(i - 1, i + 1);
    }
    bvq_outcome self = bvq(f.tree, 5, 5);
    CHECK(self.st == outcome_status::answer);
    CHECK(self.witness == 5);
    bvq_outcome r = bvq(f.tree, 0, n - 1);
    CHECK(r.st == outcome_status::answer);
    CHECK(r.witness == 0); // minimum at the root endpoint
    CHECK(r.min_weight == 1);
}

TEST_CASE("bvq equals the brute-force path scan, corruption-free") {
    for (word_t delta : {1, 2, 4}) {
        fixture f(delta, 80 + delta);
        f.grow(400, 8, 2);
        for (int s = 0; s < 400; ++s) {
            t_index u = f.rng.below(400);
            t_index v = f.rng.below(400);
            bvq_outcome got = bvq(f.tree, u, v);
            bvq_outcome want = f.oracle.o_bvq(u, v);
            CHECK(got == want);
        }
    }
}

TEST_CASE("naive_lca: identity, close ancestors, deep forks inconclusive") {
    word_t delta = 2;
    fixture f(delta, 13);
    // two long arms out of a fork below the root
    word_t arm = 40 * delta;
    std::vector<t_index> left{0}, right{0};
    t_index fork = f.tree.add_leaf(0, 1);
    f.oracle.add_leaf(0, 1);
    left.assign(1, fork);
    right.assign(1, fork);
    for (word_t i = 0; i < arm; ++i) {
        left.push_back(f.tree.add_leaf(left.back(), 1));
        f.oracle.add_leaf(left[left.size() - 2], 1);
        right.push_back(f.tree.add_leaf(right.back(), 1));
        f.oracle.add_leaf(right[right.size() - 2], 1);
    }
    CHECK(naive_lca(f.tree, left[5], left[5]).v == left[5]);
    auto close = naive_lca(f.tree, left[3], left[9]);
    CHECK(close.conclusive);
    CHECK(close.v == left[3]);
    // the fork is far beyond 10*delta from both tips
    auto far = naive_lca(f.tree, left.back(), right.back());
    CHECK_FALSE(far.conclusive);
    // but the full query resolves it through Q
    lca_outcome full = lca(f.tree, left.back(), right.back());
    CHECK(full.st == outcome_status::answer);
    CHECK(full.v == fork);
}

TEST_CASE("lca: identity, ancestors, random trees vs oracle") {
    for (word_t delta : {1, 2, 3, 5, 8}) {
        fixture f(delta, 100 + delta);
        f.grow(500, 4, 4);
        CHECK(lca(f.tree, 17, 17) ==
              lca_outcome{outcome_status::answer, 17});
        for (int s = 0; s < 500; ++s) {
            t_index u = f.rng.below(500);
            t_index v = f.rng.below(500);
            lca_outcome got = lca(f.tree, u, v);
            lca_outcome want = f.oracle.o_lca(u, v);
            CHECK(got == want);
        }
    }
}

TEST_CASE("all queries honor the contract under random field attacks") {
    rng64 trials(17);
    int checked = 0;
    for (int trial = 0; trial < 12; ++trial) {
        word_t delta = 1 + trials.below(8);
        fixture f(delta, 700 + trial);
        record_codec codec(record_profile::wide, f.ms.record_w_max());
        word_t n = 250;
        for (word_t i = 1; i < n; ++i) {
            t_index par = f.rng.below(3) ? i - 1 : f.rng.below(i);
            word_t w = 1 + f.rng.below(8);
            f.tree.add_leaf(par, w);
            f.oracle.add_leaf(par, w);
            if (f.rng.below(40) == 0 && f.ms.adv().budget() > 0) {
                field_mutation m;
                switch (f.rng.below(5)) {
                case 0:
                    m.which = field_mutation::field::p;
                    m.a = f.rng.below(i + 3);
                    break;
                case 1:
                    m.which = field_mutation::field::q;
                    m.a = f.rng.below(i + 1);
                    break;
                case 2:
                    m.which = field_mutation::field::flag;
                    m.a = f.rng.below(3);
                    m.b = f.rng.below(i);
                    m.c = 1 + f.rng.below(delta);
                    break;
                case 3:
                    m.which = field_mutation::field::cba;
                    m.a = f.rng.below(3);
                    m.b = f.rng.below(i);
                    m.c = 1 + f.rng.below(delta);
                    break;
                default:
                    m.which = field_mutation::field::weight;
                    m.a = f.rng.next() & 0xffff;
                    break;
                }
                apply_field_corruption(f.ms, codec, f.rng.below(i), m);
            }
        }
        for (int s = 0; s < 300; ++s) {
            t_index u = f.rng.below(n);
            t_index v = f.rng.below(n);
            word_t k = f.rng.below(f.oracle.depth(u) + 2);
            switch (f.rng.below(4)) {
            case 0:
                if (f.oracle.must_match_la(u, k)) {
                    CHECK(f.tree.la(u, k) == f.oracle.o_la(u, k));
                    ++checked;
                }
                break;
            case 1:
                if (k >= 1 && f.oracle.must_match_wla(u, k)) {
                    CHECK(weighted_la(f.tree, u, k) == f.oracle.o_wla(u, k));
                    ++checked;
                }
                break;
            case 2:
                if (f.oracle.must_match_lca(u, v)) {
                    CHECK(lca(f.tree, u, v) == f.oracle.o_lca(u, v));
                    ++checked;
                }
                break;
            default:
                if (f.oracle.must_match_bvq(u, v)) {
                    CHECK(bvq(f.tree, u, v) == f.oracle.o_bvq(u, v));
                    ++checked;
                }
                break;
            }
        }
    }
    CHECK(checked > 1000); // the filter must not starve the property
}
