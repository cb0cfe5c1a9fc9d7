#include "restree/faulty_ram.hpp"

namespace restree {

word_t& unreliable_memory::cell(std::size_t addr) {
    if (!old_.empty()) {
        if (addr >= migrated_ && addr < old_.size()) return old_[addr];
    }
    return primary_[addr];
}

const word_t& unreliable_memory::cell(std::size_t addr) const {
    if (!old_.empty()) {
        if (addr >= migrated_ && addr < old_.size()) return old_[addr];
    }
    return primary_[addr];
}

void unreliable_memory::hook(access_kind k, std::size_t addr, word_t oldv,
                             word_t newv) {
    if (adversary_ && owner_ && adversary_->on_access &&
        !adversary_->reentry_ && !owner_->suspend_adversary) {
        adversary_->reentry_ = true;
        adversary_->on_access(*owner_, id_, k, addr, oldv, newv);
        adversary_->reentry_ = false;
    }
}

word_t unreliable_memory::read(std::size_t addr) {
    if (addr >= size_) throw simulation_error("unreliable read out of range");
    ++counters_.reads;
    word_t w = cell(addr);
    hook(access_kind::read, addr, w, w);
    return w;
}

void unreliable_memory::write(std::size_t addr, word_t w) {
    if (addr >= size_) throw simulation_error("unreliable write out of range");
    word_t old = cell(addr);
    cell(addr) = w;
    ++counters_.writes;
    hook(access_kind::write, addr, old, w);
}

std::size_t unreliable_memory::append(word_t w) {
    if (old_.empty() && size_ == primary_.size()) {
        // full: begin incremental migration into a doubled backing array
        std::size_t cap = primary_.size();
        old_ = std::move(primary_);
        primary_.assign(cap == 0 ? 1 : cap * 2, 0);
        migrated_ = 0;
        if (cap == 0) old_.clear();
    }
    std::size_t idx = size_;
    primary_[idx] = w;
    ++size_;
    if (!old_.empty()) {
        for (int m = 0; m < 2 && migrated_ < old_.size(); ++m) {
            primary_[migrated_] = old_[migrated_];
            ++migrated_;
            ++counters_.migration_moves;
        }
        if (migrated_ == old_.size()) {
            old_.clear();
            migrated_ = 0;
        }
    }
    ++counters_.writes;
    hook(access_kind::write, idx, 0, w);
    return idx;
}

word_t unreliable_memory::corrupt_raw(std::size_t addr, word_t w) {
    if (addr >= size_) throw simulation_error("corruption out of range");
    word_t old = cell(addr);
    cell(addr) = w;
    return old;
}

word_t unreliable_memory::peek(std::size_t addr) const {
    if (addr >= size_) throw simulation_error("peek out of range");
    return cell(addr);
}

bool adversary::corrupt_word(memory_system& ms, arena_id arena,
                             std::size_t addr, word_t value, t_index node) {
    if (budget_ == 0 || ms.suspend_adversary) return false;
    unreliable_memory& mem =
        arena == arena_id::records ? ms.records() : ms.aux();
    if (addr >= mem.size()) return false;
    word_t old = mem.corrupt_raw(addr, value);
    --budget_;
    corruption_record rec{arena, addr, old, value, current_op_, node};
    log_.push_back(rec);
    if (ms.on_corruption) ms.on_corruption(rec);
    return true;
}

bool adversary::corrupt_record(memory_system& ms, t_index node,
                               const std::vector<word_t>& words) {
    if (budget_ == 0 || ms.suspend_adversary) return false;
    std::size_t base = static_cast<std::size_t>(node) * ms.record_words();
    if (base + words.size() > ms.records().size() || words.empty())
        return false;
    word_t old0 = ms.records().peek(base);
    for (std::size_t i = 0; i < words.size(); ++i)
        ms.records().corrupt_raw(base + i, words[i]);
    --budget_;
    corruption_record rec{arena_id::records, base, old0, words[0],
                          current_op_, node};
    log_.push_back(rec);
    if (ms.on_corruption) ms.on_corruption(rec);
    return true;
}

namespace {
std::uint64_t profile_record_words(record_profile p) {
    return p == record_profile::wide ? 6 : 1;
}
std::uint64_t profile_w_max(record_profile p) {
    return p == record_profile::wide ? (1ull << 14) : 63;
}
} // namespace

memory_system::memory_system(const sim_config& cfg)
    : cfg_(cfg),
      record_words_(profile_record_words(cfg.profile)),
      record_w_max_(cfg.record_w_max ? cfg.record_w_max
                                     : profile_w_max(cfg.profile)),
      safe_(cfg.safe_words),
      adv_(cfg.budget == ~std::uint64_t{0} ? cfg.delta : cfg.budget, cfg.seed),
      records_(arena_id::records),
      aux_(arena_id::aux) {
    records_.set_adversary(&adv_);
    aux_.set_adversary(&adv_);
    records_.owner_ = this;
    aux_.owner_ = this;
}

void memory_system::begin_operation() {
    ++op_index_;
    adv_.current_op_ = op_index_;
    if (!suspend_adversary && adv_.on_op_boundary)
        adv_.on_op_boundary(*this, op_index_);
}

} // namespace restree
