#pragma once
#include "restree/faulty_ram.hpp"

#include <array>
#include <vector>

// NodeRecord codec. A record packs (p, q, flag, cba, depth, weight) and is
// the unit of corruption. Two profiles:
//   wide   — 6 words, every field full width (default);
//   packed — one 64-bit word, p:20|q:18|depth:16|weight:6|flag:2|cba:2.
// Garbage decode rules: a flag word with an illegal tag reads as SPENT, a cba
// word with an illegal tag reads as SET to an invalid handle. In the packed
// profile the flag/cba payloads (x,i)/target do not fit and only tags are
// kept.
namespace restree {

inline constexpr word_t q_null = ~word_t{0};
inline constexpr word_t wmin_infinity = ~word_t{0};

struct flag_value {
    enum class kind : std::uint8_t { unspent, spent, annotated } k =
        kind::unspent;
    word_t x = 0; // annotating vertex
    word_t i = 0; // observed distance
    bool operator==(const flag_value&) const = default;
};

struct cba_value {
    enum class kind : std::uint8_t { unset, set, annotated } k = kind::unset;
    word_t target = 0; // SET payload: Q handle
    word_t x = 0;      // annotation payload
    word_t i = 0;
    bool operator==(const cba_value&) const = default;
};

struct node_record {
    word_t parent = t_null; // t_null only for the root
    word_t q = q_null;      // q_null iff white
    flag_value flag;
    cba_value cba;
    word_t depth = 0; // modular (2^64 wide, 2^16 packed)
    word_t weight = 1;
};

class record_codec {
public:
    explicit record_codec(record_profile profile, word_t w_max)
        : profile_(profile), w_max_(w_max) {}

    record_profile profile() const { return profile_; }
    std::size_t words() const {
        return profile_ == record_profile::wide ? 6 : 1;
    }
    word_t depth_mask() const {
        return profile_ == record_profile::wide ? ~word_t{0} : word_t{0xffff};
    }
    word_t mod_sub(word_t a, word_t b) const {
        return (a - b) & depth_mask();
    }
    word_t clamp_weight(word_t w) const {
        if (w < 1) return 1;
        if (w > w_max_) return w_max_;
        return w;
    }
    word_t w_max() const { return w_max_; }

    void encode(const node_record& rec, std::vector<word_t>& out) const;
    node_record decode(const std::vector<word_t>& in) const;

    // annotation-check helpers; packed profiles compare tags only
    bool flag_is_annotation(const flag_value& f, word_t x, word_t i) const;
    bool cba_is_annotation(const cba_value& c, word_t x, word_t i) const;
    bool cba_is_set_to(const cba_value& c, word_t target) const;

private:
    record_profile profile_;
    word_t w_max_;
};

// record array access on top of the records arena; vertex id == record slot
node_record read_record(memory_system& ms, const record_codec& codec,
                        t_index v);
void write_record(memory_system& ms, const record_codec& codec, t_index v,
                  const node_record& rec);
t_index append_record(memory_system& ms, const record_codec& codec,
                      const node_record& rec);
// raw view bypassing counters/hooks (harness corruption + tests)
std::vector<word_t> peek_record_words(const memory_system& ms,
                                      const record_codec& codec, t_index v);

} // namespace restree
