#pragma once
#include "restree/black_forest.hpp"
#include "restree/faulty_ram.hpp"
#include "restree/outcomes.hpp"
#include "restree/record.hpp"

#include <vector>

// Static warm-up structure: given a known tree, color v black iff its depth
// is a multiple of delta and its subtree has height >= delta-1, build the
// black tree Q (parent = lowest black proper ancestor), and answer resilient
// LA queries. The build itself is assumed corruption-free.
namespace restree {

struct static_climb_result {
    outcome_status st = outcome_status::answer;
    t_index v = 0;
};

class static_structure {
public:
    // parents: t_null marks the root; throws simulation_error on malformed
    // input (no/multiple roots, cycles, out-of-range parents)
    static_structure(memory_system& ms, const std::vector<t_index>& parents,
                     const std::vector<word_t>& weights);
    ~static_structure();
    static_structure(const static_structure&) = delete;
    static_structure& operator=(const static_structure&) = delete;

    std::size_t size() const { return n_; }
    t_index root() const { return root_; }
    std::size_t black_count() const { return black_count_; }
    // build-time coloring (test visibility; queries go through the records)
    bool built_black(t_index v) const { return built_black_[v]; }

    static_climb_result climb(t_index v, word_t steps);
    la_outcome la_static(t_index v, word_t k);

    const record_codec& codec() const { return codec_; }
    node_record read(t_index v) { return read_record(ms_, codec_, v); }

private:
    memory_system& ms_;
    record_codec codec_;
    q_forest q_;
    std::size_t n_ = 0;
    t_index root_ = 0;
    std::size_t black_count_ = 0;
    std::vector<bool> built_black_;
};

} // namespace restree
