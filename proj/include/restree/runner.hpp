#pragma once
#include "restree/faulty_ram.hpp"
#include "restree/trace.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

// Trace execution: drives the structure, mirrors the oracle, classifies
// every query answer (match / exempt-mismatch / VIOLATION), checks the
// black-node bound after every operation, and accumulates per-operation
// access costs split between the record array and D_Q.
namespace restree {

class resilient_tree;
class oracle_tree;

struct run_config {
    word_t delta = 0;        // 0: take the trace's
    std::uint64_t seed = 0;  // 0: trace's
    std::string adversary;   // empty: trace's
    word_t budget = ~word_t{0}; // default: delta
    double rate = -1.0;      // negative: trace's
    std::size_t safe_words = 128;
    record_profile profile = record_profile::wide;
    bool check_oracle = true;
    word_t root_weight = 1;
    // invoked after the trace completes, with the final state still live
    // (dynamic runs only); used by the lemma property suites
    std::function<void(memory_system&, resilient_tree&, const oracle_tree&)>
        inspect;
};

enum class op_kind : std::size_t {
    addleaf = 0,
    la = 1,
    wla = 2,
    lca = 3,
    bvq = 4,
    other = 5,
};

struct op_cost {
    std::uint64_t count = 0;
    std::uint64_t core_reads = 0;
    std::uint64_t core_writes = 0;
    std::uint64_t aux_reads = 0;
    std::uint64_t aux_writes = 0;
    std::uint64_t core_max = 0; // worst single operation, core words
    std::uint64_t aux_max = 0;
};

struct violation_detail {
    std::size_t op_index = 0;
    std::string type;
    std::string expected;
    std::string got;
};

struct query_verdict {
    std::size_t op_index = 0;
    char type = '?';    // L, W, C, B (la, wla, lca, bvq)
    char verdict = '?'; // m match, x exempt-mismatch, V violation
};

struct run_report {
    bool ok = true; // no violations, bounds hold, no runtime error
    std::string error;

    std::uint64_t matches = 0;
    std::uint64_t exempt_mismatches = 0;
    std::uint64_t violations = 0;
    std::vector<violation_detail> details;
    std::vector<query_verdict> verdicts;
    std::vector<corruption_record> corruption_log;

    bool black_bound_ok = true;
    bool replay_ok = true; // coloring replay agreement (corruption-free runs)
    std::vector<std::uint32_t> black_trajectory;

    std::uint64_t attempted_corruptions = 0;
    std::uint64_t applied_corruptions = 0;
    std::uint64_t exceptional_colorings = 0;
    std::uint64_t lca_literal_divergence = 0;
    std::size_t safe_high_water = 0;

    std::array<op_cost, 6> costs{};
    std::vector<query_internals> la_internals;
    std::vector<std::string> output;

    std::uint64_t final_n = 0;
    std::uint64_t final_black = 0;
    std::uint64_t memory_digest = 0;

    std::string to_json() const;
};

run_report run_trace(const trace& t, const run_config& cfg);

// FNV-1a over the logical contents of both arenas
word_t memory_digest(memory_system& ms);

} // namespace restree
