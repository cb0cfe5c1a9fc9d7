#include "restree/replication.hpp"

namespace restree {

replicated_cell rep_alloc(memory_system& ms, word_t initial) {
    std::uint32_t slots = static_cast<std::uint32_t>(2 * ms.delta() + 1);
    replicated_cell cell{ms.aux().size(), slots};
    for (std::uint32_t i = 0; i < slots; ++i) ms.aux().append(initial);
    return cell;
}

void rep_write(memory_system& ms, replicated_cell cell, word_t w) {
    for (std::uint32_t i = 0; i < cell.slots; ++i)
        ms.aux().write(cell.base + i, w);
}

word_t rep_read(memory_system& ms, replicated_cell cell) {
    safe_frame fr(ms.safe(), 2); // candidate, count
    word_t& candidate = fr[0];
    word_t& count = fr[1];
    candidate = 0;
    count = 0;
    for (std::uint32_t i = 0; i < cell.slots; ++i) {
        word_t w = ms.aux().read(cell.base + i);
        if (count == 0) {
            candidate = w;
            count = 1;
        } else if (w == candidate) {
            ++count;
        } else {
            --count;
        }
    }
    return candidate;
}

} // namespace restree
