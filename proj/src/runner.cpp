#include "restree/runner.hpp"

#include "restree/adversary_strategies.hpp"
#include "restree/black_forest.hpp"
#include "restree/generators.hpp"
#include "restree/oracle.hpp"
#include "restree/resilient_queries.hpp"
#include "restree/resilient_tree.hpp"
#include "restree/static_la.hpp"

#include <json.hpp>

#include <memory>
#include <sstream>

namespace restree {

word_t memory_digest(memory_system& ms) {
    word_t h = 0xcbf29ce484222325ull;
    auto mix = [&](word_t w) {
        h ^= w;
        h *= 0x100000001b3ull;
    };
    for (std::size_t i = 0; i < ms.records().size(); ++i)
        mix(ms.records().peek(i));
    for (std::size_t i = 0; i < ms.aux().size(); ++i) mix(ms.aux().peek(i));
    return h;
}

namespace {

std::string outcome_str(outcome_status st, t_index v) {
    switch (st) {
    case outcome_status::answer: return std::to_string(v);
    case outcome_status::root_reached: return "ROOT";
    case outcome_status::error: return "ERROR";
    }
    return "ERROR";
}

struct cost_probe {
    memory_system& ms;
    op_cost& slot;
    std::uint64_t r0, w0, ar0, aw0;
    cost_probe(memory_system& m, op_cost& s)
        : ms(m), slot(s),
          r0(m.records().counters().reads), w0(m.records().counters().writes),
          ar0(m.aux().counters().reads), aw0(m.aux().counters().writes) {}
    ~cost_probe() {
        ++slot.count;
        std::uint64_t core = ms.records().counters().reads - r0 +
                             ms.records().counters().writes - w0;
        std::uint64_t aux = ms.aux().counters().reads - ar0 +
                            ms.aux().counters().writes - aw0;
        slot.core_reads += ms.records().counters().reads - r0;
        slot.core_writes += ms.records().counters().writes - w0;
        slot.aux_reads += ms.aux().counters().reads - ar0;
        slot.aux_writes += ms.aux().counters().writes - aw0;
        if (core > slot.core_max) slot.core_max = core;
        if (aux > slot.aux_max) slot.aux_max = aux;
    }
};

} // namespace

run_report run_trace(const trace& t, const run_config& cfg) {
    run_report rep;

    sim_config sc;
    sc.delta = cfg.delta ? cfg.delta : t.delta;
    sc.seed = cfg.seed ? cfg.seed : t.seed;
    sc.safe_words = cfg.safe_words;
    sc.profile = cfg.profile;
    word_t budget = cfg.budget != ~word_t{0}
                        ? cfg.budget
                        : (t.budget != ~word_t{0} ? t.budget : sc.delta);
    sc.budget = budget;
    double rate = cfg.rate >= 0 ? cfg.rate : t.rate;
    std::string adv_name = !cfg.adversary.empty() ? cfg.adversary : t.adversary;

    // static traces carry their own delta on the BUILD_STATIC directive
    bool static_mode = !t.directives.empty() &&
                       t.directives.front().k == directive::kind::build_static;
    if (static_mode) sc.delta = t.directives.front().static_delta;
    if (sc.delta == 0) sc.delta = 1;

    memory_system ms(sc);
    install_strategy(ms, strategy_from_name(adv_name), rate);
    record_codec codec(sc.profile, ms.record_w_max());

    oracle_tree oracle;
    ms.on_corruption = [&](const corruption_record& c) {
        if (c.node != t_null && c.node < oracle.size())
            oracle.mark_corrupted(c.node);
    };

    std::unique_ptr<resilient_tree> tree;
    std::unique_ptr<static_structure> stat;
    std::unique_ptr<coloring_replay> replay;
    if (!static_mode) {
        tree = std::make_unique<resilient_tree>(ms, cfg.root_weight);
        oracle.init_root(codec.clamp_weight(cfg.root_weight));
        replay = std::make_unique<coloring_replay>(sc.delta);
    }

    auto emit = [&](const std::string& s) { rep.output.push_back(s); };

    auto classify = [&](const std::string& type, std::size_t op, bool mm,
                        bool equal, const std::string& exp,
                        const std::string& got) {
        if (!cfg.check_oracle) return;
        char v;
        if (equal) {
            ++rep.matches;
            v = 'm';
        } else if (mm) {
            ++rep.violations;
            rep.details.push_back({op, type, exp, got});
            v = 'V';
        } else {
            ++rep.exempt_mismatches;
            v = 'x';
        }
        rep.verdicts.push_back({op, type[0] == 'L' && type[1] == 'C' ? 'C'
                                    : type[0] == 'W'                 ? 'W'
                                    : type[0] == 'B'                 ? 'B'
                                                                     : 'L',
                                v});
    };

    try {
        for (const directive& d : t.directives) {
            ms.begin_operation();
            std::size_t op = ms.op_index();
            switch (d.k) {
            case directive::kind::build_static: {
                cost_probe probe(ms, rep.costs[(std::size_t)op_kind::other]);
                std::vector<word_t> weights(d.words.size(), 1);
                stat = std::make_unique<static_structure>(ms, d.words,
                                                          weights);
                oracle.init_parent_array(d.words, weights);
                emit("BUILT n=" + std::to_string(d.words.size()) +
                     " blacks=" + std::to_string(stat->black_count()));
                break;
            }
            case directive::kind::addleaf: {
                if (!tree) throw simulation_error("ADDLEAF in static mode");
                cost_probe probe(ms, rep.costs[(std::size_t)op_kind::addleaf]);
                // mirror first: a mid-insertion corruption of the new record
                // must find the vertex already present in the oracle
                oracle.add_leaf(d.a, codec.clamp_weight(d.b));
                replay->add_leaf(d.a);
                t_index id = tree->add_leaf(d.a, d.b);
                emit(std::to_string(id));
                break;
            }
            case directive::kind::la: {
                la_outcome r;
                if (stat) {
                    cost_probe probe(ms, rep.costs[(std::size_t)op_kind::la]);
                    r = stat->la_static(d.a, d.b);
                } else {
                    cost_probe probe(ms, rep.costs[(std::size_t)op_kind::la]);
                    r = tree->la(d.a, d.b);
                }
                rep.la_internals.push_back(ms.last_la);
                emit(outcome_str(r.st, r.v));
                if (d.a < oracle.size()) {
                    la_outcome o = oracle.o_la(d.a, d.b);
                    classify("LA", op, oracle.must_match_la(d.a, d.b), r == o,
                             outcome_str(o.st, o.v), outcome_str(r.st, r.v));
                }
                break;
            }
            case directive::kind::wla: {
                if (!tree) throw simulation_error("WLA in static mode");
                wla_outcome r;
                {
                    cost_probe probe(ms, rep.costs[(std::size_t)op_kind::wla]);
                    r = weighted_la(*tree, d.a, d.b);
                }
                emit(outcome_str(r.st, r.v));
                if (d.a < oracle.size()) {
                    wla_outcome o = oracle.o_wla(d.a, d.b);
                    classify("WLA", op, oracle.must_match_wla(d.a, d.b),
                             r == o, outcome_str(o.st, o.v),
                             outcome_str(r.st, r.v));
                }
                break;
            }
            case directive::kind::lca: {
                if (!tree) throw simulation_error("LCA in static mode");
                lca_outcome r;
                {
                    cost_probe probe(ms, rep.costs[(std::size_t)op_kind::lca]);
                    r = lca(*tree, d.a, d.b);
                }
                emit(outcome_str(r.st, r.v));
                if (d.a < oracle.size() && d.b < oracle.size()) {
                    lca_outcome o = oracle.o_lca(d.a, d.b);
                    classify("LCA", op, oracle.must_match_lca(d.a, d.b),
                             r == o, outcome_str(o.st, o.v),
                             outcome_str(r.st, r.v));
                }
                break;
            }
            case directive::kind::bvq: {
                if (!tree) throw simulation_error("BVQ in static mode");
                bvq_outcome r;
                {
                    cost_probe probe(ms, rep.costs[(std::size_t)op_kind::bvq]);
                    r = bvq(*tree, d.a, d.b);
                }
                emit(outcome_str(r.st, r.witness));
                if (d.a < oracle.size() && d.b < oracle.size()) {
                    bvq_outcome o = oracle.o_bvq(d.a, d.b);
                    classify("BVQ", op, oracle.must_match_bvq(d.a, d.b),
                             r == o, outcome_str(o.st, o.witness),
                             outcome_str(r.st, r.witness));
                }
                break;
            }
            case directive::kind::corrupt_field: {
                ++rep.attempted_corruptions;
                apply_field_corruption(ms, codec, d.a, d.mutation);
                break;
            }
            case directive::kind::corrupt_raw: {
                ++rep.attempted_corruptions;
                apply_raw_corruption(ms, codec, d.a, d.words);
                break;
            }
            case directive::kind::checkpoint: {
                word_t blacks = stat ? stat->black_count()
                                     : tree->forest().size();
                word_t n = stat ? stat->size() : tree->size();
                std::ostringstream os;
                os << "CHECKPOINT n=" << n << " blacks=" << blacks
                   << " core_reads=" << ms.records().counters().reads
                   << " core_writes=" << ms.records().counters().writes
                   << " aux_reads=" << ms.aux().counters().reads
                   << " aux_writes=" << ms.aux().counters().writes;
                emit(os.str());
                break;
            }
            }

            // invariants checked after every operation
            if (tree) {
                word_t n = tree->size();
                word_t blacks = tree->forest().size();
                if (blacks * sc.delta > n + sc.delta)
                    rep.black_bound_ok = false;
                rep.black_trajectory.push_back(
                    static_cast<std::uint32_t>(blacks));
                if (ms.adv().log().empty() &&
                    replay->black_count() != blacks)
                    rep.replay_ok = false;
            } else if (stat) {
                if (stat->black_count() * sc.delta > stat->size())
                    rep.black_bound_ok = false;
                rep.black_trajectory.push_back(
                    static_cast<std::uint32_t>(stat->black_count()));
            }
        }

        // full coloring comparison once the run ends corruption-free
        if (tree && ms.adv().log().empty()) {
            std::vector<bool> black(tree->size(), false);
            for (const auto& ev : ms.colorings) {
                if (ev.colored >= black.size() ||
                    !replay->is_black(ev.colored)) {
                    rep.replay_ok = false;
                    continue;
                }
                black[ev.colored] = true;
                // the Q parent's satellite must match the replay's
                q_handle par = tree->forest().parent(ev.q_handle);
                t_index expect = replay->q_parent_of(ev.colored);
                if (par == q_null ? expect != t_null
                                  : tree->forest().satellite(par) != expect)
                    rep.replay_ok = false;
            }
            for (std::size_t v = 0; v < black.size(); ++v)
                if (black[v] != replay->is_black(v)) rep.replay_ok = false;
        }

        if (cfg.inspect && tree) cfg.inspect(ms, *tree, oracle);
    } catch (const std::exception& e) {
        rep.error = e.what();
        rep.ok = false;
    }

    for (const auto& ev : ms.colorings)
        if (ev.exceptional) ++rep.exceptional_colorings;
    rep.lca_literal_divergence = ms.lca_fallback_literal_divergence;
    rep.applied_corruptions = ms.adv().log().size();
    rep.corruption_log = ms.adv().log();
    rep.safe_high_water = ms.safe().high_water();
    rep.final_n = tree ? tree->size() : (stat ? stat->size() : 0);
    rep.final_black = tree ? tree->forest().size()
                           : (stat ? stat->black_count() : 0);
    rep.memory_digest = memory_digest(ms);
    if (rep.violations > 0 || !rep.black_bound_ok || !rep.replay_ok)
        rep.ok = false;
    return rep;
}

std::string run_report::to_json() const {
    nlohmann::json j;
    j["ok"] = ok;
    if (!error.empty()) j["error"] = error;
    j["matches"] = matches;
    j["exempt_mismatches"] = exempt_mismatches;
    j["violations"] = violations;
    j["black_bound_ok"] = black_bound_ok;
    j["replay_ok"] = replay_ok;
    j["attempted_corruptions"] = attempted_corruptions;
    j["applied_corruptions"] = applied_corruptions;
    j["exceptional_colorings"] = exceptional_colorings;
    j["lca_literal_divergence"] = lca_literal_divergence;
    j["safe_high_water"] = safe_high_water;
    j["final_n"] = final_n;
    j["final_black"] = final_black;
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(memory_digest));
    j["memory_digest"] = digest;
    j["black_trajectory"] = black_trajectory;
    const char* names[6] = {"addleaf", "la", "wla", "lca", "bvq", "other"};
    for (std::size_t i = 0; i < costs.size(); ++i) {
        nlohmann::json c;
        c["count"] = costs[i].count;
        c["core_reads"] = costs[i].core_reads;
        c["core_writes"] = costs[i].core_writes;
        c["aux_reads"] = costs[i].aux_reads;
        c["aux_writes"] = costs[i].aux_writes;
        c["core_max"] = costs[i].core_max;
        c["aux_max"] = costs[i].aux_max;
        j["costs"][names[i]] = c;
    }
    nlohmann::json dets = nlohmann::json::array();
    for (const auto& d : details) {
        dets.push_back({{"op", d.op_index},
                        {"type", d.type},
                        {"expected", d.expected},
                        {"got", d.got}});
    }
    j["violations_detail"] = dets;
    nlohmann::json verds = nlohmann::json::array();
    for (const auto& v : verdicts)
        verds.push_back({{"op", v.op_index},
                         {"type", std::string(1, v.type)},
                         {"verdict", std::string(1, v.verdict)}});
    j["verdicts"] = verds;
    nlohmann::json corr = nlohmann::json::array();
    for (const auto& c : corruption_log)
        corr.push_back(
            {{"arena", c.arena == arena_id::records ? "records" : "aux"},
             {"addr", c.addr},
             {"node",
              c.node == t_null ? nlohmann::json(nullptr)
                               : nlohmann::json(c.node)},
             {"op", c.op_index}});
    j["corruption_log"] = corr;
    nlohmann::json internals = nlohmann::json::array();
    for (const auto& li : la_internals)
        internals.push_back({{"long_path", li.long_path},
                             {"d", li.d},
                             {"jumps", li.jumps},
                             {"k_rest", li.k_rest}});
    j["la_internals"] = internals;
    j["output"] = output;
    return j.dump(2);
}

} // namespace restree
