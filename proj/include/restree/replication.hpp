#pragma once
#include "restree/faulty_ram.hpp"

// Replication strategy: one reliable logical value stored as 2*delta+1
// unreliable words in the aux arena, written in full, decoded by a
// single-pass Boyer-Moore majority vote. Under the budget the uncorrupted
// value holds >= delta+1 slots, so the surviving candidate needs no
// verification pass.
namespace restree {

struct replicated_cell {
    std::size_t base = 0;   // first slot in the aux arena
    std::uint32_t slots = 0; // 2*delta+1
};

replicated_cell rep_alloc(memory_system& ms, word_t initial);
void rep_write(memory_system& ms, replicated_cell cell, word_t w);
word_t rep_read(memory_system& ms, replicated_cell cell);

} // namespace restree
