#pragma once
#include "restree/black_forest.hpp"
#include "restree/faulty_ram.hpp"
#include "restree/outcomes.hpp"
#include "restree/record.hpp"

// The dynamic resilient tree: the record array A in unreliable memory, the
// noisy-tree climb with the invalid-index rule, AddLeaf (discovery +
// execution phases, with the weighted-LA / BVQ / LCA bookkeeping folded in),
// and the dynamic LA query.
namespace restree {

struct climb_result {
    t_index v = 0;
    bool root_reached = false;
};

class resilient_tree {
public:
    explicit resilient_tree(memory_system& ms, word_t root_weight = 1);
    ~resilient_tree();
    resilient_tree(const resilient_tree&) = delete;
    resilient_tree& operator=(const resilient_tree&) = delete;

    memory_system& ms() { return ms_; }
    const record_codec& codec() const { return codec_; }
    q_forest& forest() { return q_; }
    word_t delta() const { return ms_.delta(); }
    word_t size() { return ms_.safe().slot(n_slot_); }

    t_index add_leaf(t_index x_par, word_t weight);
    climb_result climb(t_index v, word_t steps);
    la_outcome la(t_index v, word_t k);

    node_record read(t_index v) { return read_record(ms_, codec_, v); }
    void write(t_index v, const node_record& rec) {
        write_record(ms_, codec_, v, rec);
    }
    // the invalid-index rule: a parent pointer >= the reader's own index
    // (including the null sentinel) refers to the root
    t_index effective_parent(t_index v, const node_record& rec) const {
        return rec.parent >= v ? 0 : rec.parent;
    }

private:
    memory_system& ms_;
    record_codec codec_;
    q_forest q_;
    std::size_t n_slot_;
};

} // namespace restree
