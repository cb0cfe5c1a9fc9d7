#include "restree/adversary_strategies.hpp"

#include <memory>

namespace restree {

bool apply_field_corruption(memory_system& ms, const record_codec& codec,
                            t_index node, const field_mutation& m) {
    std::size_t rw = codec.words();
    if (static_cast<std::size_t>(node) * rw + rw > ms.records().size())
        return false;
    std::vector<word_t> words = peek_record_words(ms, codec, node);
    node_record rec = codec.decode(words);
    switch (m.which) {
    case field_mutation::field::p: rec.parent = m.a; break;
    case field_mutation::field::q: rec.q = m.a == t_null ? q_null : m.a; break;
    case field_mutation::field::depth: rec.depth = m.a; break;
    case field_mutation::field::weight: rec.weight = m.a; break;
    case field_mutation::field::flag:
        rec.flag = m.a == 0 ? flag_value{flag_value::kind::unspent, 0, 0}
                   : m.a == 1
                       ? flag_value{flag_value::kind::spent, 0, 0}
                       : flag_value{flag_value::kind::annotated, m.b, m.c};
        break;
    case field_mutation::field::cba:
        rec.cba = m.a == 0 ? cba_value{cba_value::kind::unset, 0, 0, 0}
                  : m.a == 1
                      ? cba_value{cba_value::kind::set, m.b, 0, 0}
                      : cba_value{cba_value::kind::annotated, 0, m.b, m.c};
        break;
    }
    // weight corruption may exceed the codec clamp on purpose: bypass encode
    // clamping by writing the raw field word in the wide profile
    std::vector<word_t> out;
    codec.encode(rec, out);
    if (codec.profile() == record_profile::wide &&
        m.which == field_mutation::field::weight)
        out[5] = m.a;
    if (codec.profile() == record_profile::wide &&
        m.which == field_mutation::field::depth)
        out[4] = m.a;
    return ms.adv().corrupt_record(ms, node, out);
}

bool apply_raw_corruption(memory_system& ms, const record_codec& codec,
                          t_index node, const std::vector<word_t>& words) {
    std::size_t rw = codec.words();
    if (static_cast<std::size_t>(node) * rw + rw > ms.records().size())
        return false;
    std::vector<word_t> out = peek_record_words(ms, codec, node);
    for (std::size_t i = 0; i < words.size() && i < out.size(); ++i)
        out[i] = words[i];
    return ms.adv().corrupt_record(ms, node, out);
}

adversary_strategy strategy_from_name(const std::string& name) {
    if (name == "none") return adversary_strategy::none;
    if (name == "scripted") return adversary_strategy::scripted;
    if (name == "random") return adversary_strategy::random;
    if (name == "targeted-flags" || name == "targeted_flags")
        return adversary_strategy::targeted_flags;
    if (name == "adaptive-path" || name == "adaptive_path")
        return adversary_strategy::adaptive_path;
    throw std::invalid_argument("unknown adversary '" + name + "'");
}

const char* strategy_name(adversary_strategy s) {
    switch (s) {
    case adversary_strategy::none: return "none";
    case adversary_strategy::scripted: return "scripted";
    case adversary_strategy::random: return "random";
    case adversary_strategy::targeted_flags: return "targeted-flags";
    case adversary_strategy::adaptive_path: return "adaptive-path";
    }
    return "none";
}

namespace {

// random single-field garbage aimed at a record
void corrupt_node_randomly(memory_system& ms, const record_codec& codec,
                           t_index node) {
    rng64& rng = ms.adv().rng();
    word_t n = ms.records().size() / codec.words();
    if (rng.below(8) == 0) {
        // raw bit garbage exercises the illegal-tag decode paths
        std::vector<word_t> out = peek_record_words(ms, codec, node);
        out[rng.below(out.size())] = rng.next();
        ms.adv().corrupt_record(ms, node, out);
        return;
    }
    field_mutation m;
    switch (rng.below(6)) {
    case 0:
        m.which = field_mutation::field::p;
        m.a = rng.below(n + 4);
        break;
    case 1:
        m.which = field_mutation::field::q;
        m.a = rng.below(n + 2);
        break;
    case 2:
        m.which = field_mutation::field::flag;
        m.a = rng.below(3);
        m.b = rng.below(n + 1);
        m.c = 1 + rng.below(8);
        break;
    case 3:
        m.which = field_mutation::field::cba;
        m.a = rng.below(3);
        m.b = rng.below(n + 1);
        m.c = 1 + rng.below(8);
        break;
    case 4:
        m.which = field_mutation::field::depth;
        m.a = rng.next();
        break;
    default:
        m.which = field_mutation::field::weight;
        m.a = rng.next() & 0xffff;
        break;
    }
    apply_field_corruption(ms, codec, node, m);
}

struct targeted_state {
    std::vector<std::pair<t_index, std::uint64_t>> restores;
};

} // namespace

void install_strategy(memory_system& ms, adversary_strategy strategy,
                      double rate) {
    ms.adv().strategy = strategy;
    ms.adv().rate = rate;
    auto codec = std::make_shared<record_codec>(ms.config().profile,
                                                ms.record_w_max());

    // scripted fault events fire on access counts regardless of strategy
    auto pump_events = [codec](memory_system& m) {
        auto& adv = m.adv();
        if (adv.scripted.empty()) return;
        std::uint64_t acc = m.records().counters().reads +
                            m.records().counters().writes +
                            m.aux().counters().reads +
                            m.aux().counters().writes;
        for (auto& ev : adv.scripted) {
            if (ev.fired || ev.op_index != m.op_index() ||
                acc < ev.min_access_count)
                continue;
            ev.fired = true;
            t_index node = ev.arena == arena_id::records
                               ? ev.addr / codec->words()
                               : t_null;
            adv.corrupt_word(m, ev.arena, ev.addr, ev.value, node);
        }
    };

    switch (strategy) {
    case adversary_strategy::none:
    case adversary_strategy::scripted:
        ms.adv().on_access = [pump_events](memory_system& m, arena_id,
                                           access_kind, std::size_t, word_t,
                                           word_t) { pump_events(m); };
        break;
    case adversary_strategy::random:
        ms.adv().on_access = [codec, pump_events](memory_system& m,
                                                  arena_id, access_kind,
                                                  std::size_t, word_t,
                                                  word_t) {
            pump_events(m);
            auto& adv = m.adv();
            if (adv.budget() == 0 || adv.rng().unit() >= adv.rate) return;
            word_t n = m.records().size() / codec->words();
            if (m.aux().size() > 0 && adv.rng().below(2) == 0) {
                adv.corrupt_word(m, arena_id::aux,
                                 adv.rng().below(m.aux().size()),
                                 adv.rng().next(), t_null);
            } else if (n > 0) {
                corrupt_node_randomly(m, *codec, adv.rng().below(n));
            }
        };
        break;
    case adversary_strategy::adaptive_path:
        // corrupt the record that was just climbed through
        ms.adv().on_access = [codec, pump_events](memory_system& m,
                                                  arena_id arena,
                                                  access_kind kind,
                                                  std::size_t addr, word_t,
                                                  word_t) {
            pump_events(m);
            auto& adv = m.adv();
            if (arena != arena_id::records || kind != access_kind::read)
                return;
            if (adv.budget() == 0 || adv.rng().unit() >= adv.rate) return;
            corrupt_node_randomly(m, *codec, addr / codec->words());
        };
        break;
    case adversary_strategy::targeted_flags: {
        // figure-3 style: spend flags ahead of insertions, restore later
        auto state = std::make_shared<targeted_state>();
        ms.adv().on_access = [pump_events](memory_system& m, arena_id,
                                           access_kind, std::size_t, word_t,
                                           word_t) { pump_events(m); };
        ms.adv().on_op_boundary = [codec, state](memory_system& m,
                                                 std::uint64_t op) {
            auto& adv = m.adv();
            const word_t delta = m.delta();
            for (auto it = state->restores.begin();
                 it != state->restores.end();) {
                if (it->second <= op && adv.budget() > 0) {
                    field_mutation fm;
                    fm.which = field_mutation::field::flag;
                    fm.a = 0; // back to unspent
                    apply_field_corruption(m, *codec, it->first, fm);
                    it = state->restores.erase(it);
                } else {
                    ++it;
                }
            }
            word_t n = m.records().size() / codec->words();
            if (n < 2 || adv.budget() < 2 || adv.rng().unit() >= 0.25) return;
            word_t span = 4 * delta < n - 1 ? 4 * delta : n - 1;
            t_index node = n - 1 - adv.rng().below(span + 1);
            field_mutation fm;
            fm.which = field_mutation::field::flag;
            fm.a = 1; // spent
            if (apply_field_corruption(m, *codec, node, fm))
                state->restores.emplace_back(
                    node, op + 1 + adv.rng().below(3 * delta + 1));
        };
        break;
    }
    }
}

} // namespace restree
