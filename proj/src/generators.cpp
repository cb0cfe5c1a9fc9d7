#include "restree/generators.hpp"

#include <stdexcept>

namespace restree {

namespace {

struct model { // generator-side mirror to emit valid queries
    std::vector<t_index> parent{t_null};
    std::vector<word_t> depth{0};
    std::vector<word_t> path_weight{1}; // root..v inclusive
};

directive make_query(rng64& rng, const model& m, const gen_params& p) {
    directive d;
    word_t n = m.parent.size();
    t_index v = rng.below(n);
    switch (rng.below(4)) {
    case 0: {
        d.k = directive::kind::la;
        d.a = v;
        // mostly valid, occasionally past the root
        d.b = rng.below(m.depth[v] + 2);
        break;
    }
    case 1: {
        d.k = directive::kind::wla;
        d.a = v;
        d.b = 1 + rng.below(m.path_weight[v] + p.weight_max);
        break;
    }
    case 2:
        d.k = directive::kind::lca;
        d.a = v;
        d.b = rng.below(n);
        break;
    default:
        d.k = directive::kind::bvq;
        d.a = v;
        d.b = rng.below(n);
        break;
    }
    return d;
}

directive make_corruption(rng64& rng, const model& m) {
    directive d;
    d.k = directive::kind::corrupt_field;
    d.a = rng.below(m.parent.size());
    field_mutation mu;
    switch (rng.below(6)) {
    case 0:
        mu.which = field_mutation::field::p;
        mu.a = rng.below(m.parent.size() + 4); // often invalid on purpose
        break;
    case 1:
        mu.which = field_mutation::field::q;
        mu.a = rng.below(m.parent.size() + 2);
        break;
    case 2:
        mu.which = field_mutation::field::flag;
        mu.a = rng.below(3);
        mu.b = rng.below(m.parent.size());
        mu.c = 1 + rng.below(8);
        break;
    case 3:
        mu.which = field_mutation::field::cba;
        mu.a = rng.below(3);
        mu.b = rng.below(m.parent.size());
        mu.c = 1 + rng.below(8);
        break;
    case 4:
        mu.which = field_mutation::field::depth;
        mu.a = rng.next() & 0xffff;
        break;
    default:
        mu.which = field_mutation::field::weight;
        mu.a = rng.below(1 << 14);
        break;
    }
    d.mutation = mu;
    return d;
}

trace figure2_trace() {
    // the delta=3 static path 0-1-...-9 with a few side leaves; black set
    // {0,3,6}; LA(9,8) resolves with d=3, one Q jump, k_rest=2
    trace t;
    t.delta = 3;
    directive b;
    b.k = directive::kind::build_static;
    b.static_delta = 3;
    b.words = {t_null, 0, 1, 2, 3, 4, 5, 6, 7, 8, 1, 4, 6};
    t.directives.push_back(b);
    directive q;
    q.k = directive::kind::la;
    q.a = 9;
    q.b = 8;
    t.directives.push_back(q);
    return t;
}

} // namespace

trace generate(const gen_params& p) {
    if (p.kind == "figure2") return figure2_trace();
    if (p.n == 0) throw std::invalid_argument("generate: n must be positive");

    trace t;
    t.delta = p.delta;
    t.seed = p.seed;
    rng64 rng(p.seed ^ 0x5eedf00dull);
    model m;

    auto weight = [&]() {
        return p.weight_min + rng.below(p.weight_max - p.weight_min + 1);
    };
    auto add = [&](t_index par, word_t w) {
        directive d;
        d.k = directive::kind::addleaf;
        d.a = par;
        d.b = w;
        t.directives.push_back(d);
        m.parent.push_back(par);
        m.depth.push_back(m.depth[par] + 1);
        m.path_weight.push_back(m.path_weight[par] + w);
    };
    auto maybe_query = [&](double prob) {
        if (rng.unit() < prob)
            t.directives.push_back(make_query(rng, m, p));
    };

    if (p.kind == "chain") {
        for (word_t i = 1; i < p.n; ++i) {
            add(i - 1, weight());
            maybe_query(p.query_density / 4);
        }
    } else if (p.kind == "caterpillar") {
        // spine plus one leaf per spine vertex
        t_index spine = 0;
        for (word_t i = 1; i < p.n; ++i) {
            if (i % 2 == 1) {
                add(spine, weight());
                spine = m.parent.size() - 1;
            } else {
                add(spine, weight());
            }
            maybe_query(p.query_density / 4);
        }
    } else if (p.kind == "random_attach") {
        for (word_t i = 1; i < p.n; ++i) {
            add(rng.below(m.parent.size()), weight());
            maybe_query(p.query_density / 4);
        }
    } else if (p.kind == "star_of_paths") {
        t_index tips[4] = {0, 0, 0, 0};
        for (word_t i = 1; i < p.n; ++i) {
            std::size_t arm = (i - 1) % 4;
            add(tips[arm], weight());
            tips[arm] = m.parent.size() - 1;
            maybe_query(p.query_density / 4);
        }
    } else {
        throw std::invalid_argument("generate: unknown kind '" + p.kind + "'");
    }

    // scripted corruptions sprinkled between trailing queries
    word_t nq = static_cast<word_t>(p.query_density * p.n);
    if (nq < 4) nq = 4;
    word_t nc = p.scripted_corruptions;
    for (word_t i = 0; i < nq; ++i) {
        if (nc > 0 && rng.unit() < 0.2) {
            t.directives.push_back(make_corruption(rng, m));
            --nc;
        }
        t.directives.push_back(make_query(rng, m, p));
        if (i % 16 == 15) {
            directive cp;
            cp.k = directive::kind::checkpoint;
            t.directives.push_back(cp);
        }
    }
    while (nc-- > 0) t.directives.push_back(make_corruption(rng, m));
    directive cp;
    cp.k = directive::kind::checkpoint;
    t.directives.push_back(cp);
    return t;
}

} // namespace restree
