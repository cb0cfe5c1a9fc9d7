#pragma once
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

// Faulty-RAM simulation: growable unreliable word memories, a bounded safe
// store invisible to the adversary, and an adaptive adversary with a global
// corruption budget delta.
namespace restree {

using word_t = std::uint64_t;
using t_index = std::uint64_t;

inline constexpr word_t t_null = ~word_t{0};

struct simulation_error : std::logic_error {
    using std::logic_error::logic_error;
};

// splitmix64; hand-rolled so traces and adversary schedules are byte-stable
// across standard libraries.
class rng64 {
public:
    explicit rng64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    // uniform in [0, 1)
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// The O(1) incorruptible region. Algorithms acquire slots through safe_frame;
// the high-water mark is what the acceptance suite bounds.
class safe_store {
public:
    explicit safe_store(std::size_t capacity = 128)
        : slots_(capacity, 0), used_(0), high_water_(0) {}

    std::size_t capacity() const { return slots_.size(); }
    std::size_t used() const { return used_; }
    std::size_t high_water() const { return high_water_; }

    std::size_t acquire(std::size_t count) {
        if (used_ + count > slots_.size())
            throw simulation_error("safe store capacity exceeded");
        std::size_t base = used_;
        used_ += count;
        if (used_ > high_water_) high_water_ = used_;
        return base;
    }
    void release(std::size_t base, std::size_t count) {
        // frames are strictly LIFO
        if (base + count != used_)
            throw simulation_error("safe store frames released out of order");
        used_ = base;
    }
    word_t& slot(std::size_t i) { return slots_[i]; }

private:
    std::vector<word_t> slots_;
    std::size_t used_;
    std::size_t high_water_;
};

// RAII block of safe words. Operations keep all state that must survive an
// unreliable-memory access inside one of these.
class safe_frame {
public:
    safe_frame(safe_store& store, std::size_t count)
        : store_(store), base_(store.acquire(count)), count_(count) {}
    ~safe_frame() { store_.release(base_, count_); }
    safe_frame(const safe_frame&) = delete;
    safe_frame& operator=(const safe_frame&) = delete;
    word_t& operator[](std::size_t i) { return store_.slot(base_ + i); }

private:
    safe_store& store_;
    std::size_t base_;
    std::size_t count_;
};

enum class arena_id : std::uint8_t { records = 0, aux = 1 };
enum class access_kind : std::uint8_t { read, write };

struct access_counters {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t migration_moves = 0;
};

class adversary;
class memory_system;

// Growable unreliable word array. Logical cells have stable indices; the
// physical backing doubles with the two-moves-per-insertion incremental
// migration, so each logical cell occupies exactly one word at any instant.
class unreliable_memory {
public:
    explicit unreliable_memory(arena_id id) : id_(id) {}

    std::size_t size() const { return size_; }
    arena_id id() const { return id_; }
    const access_counters& counters() const { return counters_; }

    void set_adversary(adversary* adv) { adversary_ = adv; }

    word_t read(std::size_t addr);
    void write(std::size_t addr, word_t w);
    std::size_t append(word_t w);

    // adversary-side rewrite: no counter, no hook; returns the old value
    word_t corrupt_raw(std::size_t addr, word_t w);
    // inspection that bypasses counters/hooks (tests, adversary visibility)
    word_t peek(std::size_t addr) const;

private:
    friend class memory_system;
    word_t& cell(std::size_t addr);
    const word_t& cell(std::size_t addr) const;
    void hook(access_kind k, std::size_t addr, word_t oldv, word_t newv);

    arena_id id_;
    std::vector<word_t> primary_;
    std::vector<word_t> old_;     // non-empty while migrating
    std::size_t migrated_ = 0;    // cells [0, migrated_) already moved
    std::size_t size_ = 0;
    access_counters counters_;
    adversary* adversary_ = nullptr;
    memory_system* owner_ = nullptr;
};

struct corruption_record {
    arena_id arena;
    std::size_t addr;       // word address (first word for record-level hits)
    word_t old_value;
    word_t new_value;
    std::uint64_t op_index; // logical time: operation during which it fired
    t_index node;           // t_null unless the hit maps to a tree record
};

// One scripted corruption: fires at most once, when the current operation
// index matches and the global access count has reached the threshold.
struct fault_event {
    std::uint64_t op_index = 0;
    std::uint64_t min_access_count = 0;
    arena_id arena = arena_id::records;
    std::size_t addr = 0;
    word_t value = 0;
    bool fired = false;
};

enum class adversary_strategy : std::uint8_t {
    none,
    scripted,
    random,
    targeted_flags,
    adaptive_path,
};

class memory_system;

// Corruption budget, log, and the strategy hooks. Strategy behaviors
// themselves live in the harness (adversary_strategies.cpp); this class
// owns the budget accounting every strategy funnels through.
class adversary {
public:
    adversary(std::uint64_t budget, std::uint64_t seed)
        : budget_(budget), rng_(seed) {}

    std::uint64_t budget() const { return budget_; }
    const std::vector<corruption_record>& log() const { return log_; }

    // Budget-checked word rewrite; silently refused once the budget is spent.
    // node: the tree vertex this corruption logically hits (t_null if none).
    bool corrupt_word(memory_system& ms, arena_id arena, std::size_t addr,
                      word_t value, t_index node);
    // Whole-record rewrite, counted as a single corruption of `node`.
    bool corrupt_record(memory_system& ms, t_index node,
                        const std::vector<word_t>& words);

    // wired to every unreliable access and to operation boundaries
    std::function<void(memory_system&, arena_id, access_kind, std::size_t,
                       word_t, word_t)>
        on_access;
    std::function<void(memory_system&, std::uint64_t)> on_op_boundary;

    std::vector<fault_event> scripted;
    adversary_strategy strategy = adversary_strategy::none;
    double rate = 0.0;
    rng64& rng() { return rng_; }

private:
    friend class memory_system;
    friend class unreliable_memory;
    std::uint64_t budget_;
    std::vector<corruption_record> log_;
    rng64 rng_;
    bool reentry_ = false;
    std::uint64_t current_op_ = 0;
};

// Per-operation coloring / query instrumentation consumed by the oracle
// contract checks and the lemma suites.
struct coloring_event {
    std::uint64_t op_index;
    t_index colored;
    word_t q_handle;
    bool near_a_black;
    bool exceptional;
};

struct query_internals { // last long LA query (criterion: figure-2 scenario)
    bool long_path = false;
    std::uint64_t d = 0;
    std::uint64_t jumps = 0;
    std::uint64_t k_rest = 0;
};

enum class record_profile : std::uint8_t { wide, packed };

struct sim_config {
    std::uint64_t delta = 1;
    std::uint64_t budget = ~std::uint64_t{0}; // defaults to delta if unset
    std::uint64_t seed = 1;
    std::size_t safe_words = 128;
    record_profile profile = record_profile::wide;
    std::uint64_t q_lmax = 16;       // jump-table levels per Q vertex
    std::uint64_t record_w_max = 0;  // 0 = profile default
    std::uint64_t q_w_max = 1ull << 20;
};

// One simulation instance: the two unreliable arenas, the safe store, and
// the adversary. Strictly single-threaded.
class memory_system {
public:
    explicit memory_system(const sim_config& cfg);

    unreliable_memory& records() { return records_; }
    unreliable_memory& aux() { return aux_; }
    const unreliable_memory& records() const { return records_; }
    const unreliable_memory& aux() const { return aux_; }
    safe_store& safe() { return safe_; }
    adversary& adv() { return adv_; }
    const adversary& adv() const { return adv_; }
    const sim_config& config() const { return cfg_; }

    std::uint64_t delta() const { return cfg_.delta; }
    std::size_t record_words() const { return record_words_; }
    std::uint64_t record_w_max() const { return record_w_max_; }

    // operation boundary bookkeeping (time stamps for the corruption log)
    void begin_operation();
    std::uint64_t op_index() const { return op_index_; }

    // instrumentation
    std::vector<coloring_event> colorings;
    query_internals last_la;
    std::uint64_t lca_fallback_literal_divergence = 0;
    bool suspend_adversary = false; // corruption-free build phases (static_la)

    // notifies the oracle layer about applied corruptions
    std::function<void(const corruption_record&)> on_corruption;

private:
    friend class unreliable_memory;
    friend class adversary;
    sim_config cfg_;
    std::size_t record_words_;
    std::uint64_t record_w_max_;
    safe_store safe_;
    adversary adv_;
    unreliable_memory records_;
    unreliable_memory aux_;
    std::uint64_t op_index_ = 0;
};

} // namespace restree
