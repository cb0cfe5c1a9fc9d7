#include "restree/record.hpp"

namespace restree {

namespace {

// wide-profile flag/cba word layout: tag in bits 63..62, x in 61..21, i in
// 20..0
constexpr word_t tag_shift = 62;
constexpr word_t x_shift = 21;
constexpr word_t x_mask = (word_t{1} << 41) - 1;
constexpr word_t i_mask = (word_t{1} << 21) - 1;
constexpr word_t set_mask = (word_t{1} << 42) - 1;

word_t pack_ann(word_t tag, word_t x, word_t i) {
    return (tag << tag_shift) | ((x & x_mask) << x_shift) | (i & i_mask);
}

word_t encode_flag_wide(const flag_value& f) {
    switch (f.k) {
    case flag_value::kind::unspent: return 0;
    case flag_value::kind::spent: return word_t{1} << tag_shift;
    case flag_value::kind::annotated: return pack_ann(2, f.x, f.i);
    }
    return word_t{1} << tag_shift;
}

flag_value decode_flag_wide(word_t w) {
    switch (w >> tag_shift) {
    case 0:
        if (w == 0) return {flag_value::kind::unspent, 0, 0};
        break; // nonzero residue under an unspent tag is garbage
    case 1:
        if ((w & ~(word_t{1} << tag_shift)) == 0)
            return {flag_value::kind::spent, 0, 0};
        break;
    case 2:
        return {flag_value::kind::annotated, (w >> x_shift) & x_mask,
                w & i_mask};
    default: break;
    }
    return {flag_value::kind::spent, 0, 0}; // illegal pattern reads as spent
}

word_t encode_cba_wide(const cba_value& c) {
    switch (c.k) {
    case cba_value::kind::unset: return 0;
    case cba_value::kind::set:
        return (word_t{1} << tag_shift) | (c.target & set_mask);
    case cba_value::kind::annotated: return pack_ann(2, c.x, c.i);
    }
    return 0;
}

cba_value decode_cba_wide(word_t w) {
    switch (w >> tag_shift) {
    case 0:
        if (w == 0) return {cba_value::kind::unset, 0, 0, 0};
        break;
    case 1: {
        cba_value c{cba_value::kind::set, 0, 0, 0};
        c.target = w & set_mask;
        return c;
    }
    case 2:
        return {cba_value::kind::annotated, 0, (w >> x_shift) & x_mask,
                w & i_mask};
    default: break;
    }
    // illegal pattern reads as SET to an invalid handle
    return {cba_value::kind::set, q_null, 0, 0};
}

// packed layout masks
constexpr word_t p_null_packed = (word_t{1} << 20) - 1;
constexpr word_t q_null_packed = (word_t{1} << 18) - 1;

} // namespace

void record_codec::encode(const node_record& rec,
                          std::vector<word_t>& out) const {
    out.clear();
    if (profile_ == record_profile::wide) {
        out.push_back(rec.parent);
        out.push_back(rec.q);
        out.push_back(encode_flag_wide(rec.flag));
        out.push_back(encode_cba_wide(rec.cba));
        out.push_back(rec.depth);
        out.push_back(rec.weight);
        return;
    }
    word_t p = rec.parent == t_null ? p_null_packed : (rec.parent & p_null_packed);
    word_t q = rec.q == q_null ? q_null_packed : (rec.q & q_null_packed);
    word_t flag_tag = rec.flag.k == flag_value::kind::unspent  ? 0
                      : rec.flag.k == flag_value::kind::spent ? 1
                                                              : 2;
    word_t cba_tag = rec.cba.k == cba_value::kind::unset ? 0
                     : rec.cba.k == cba_value::kind::set ? 1
                                                         : 2;
    word_t w = (p << 44) | (q << 26) | ((rec.depth & 0xffff) << 10) |
               ((rec.weight & 0x3f) << 4) | (flag_tag << 2) | cba_tag;
    out.push_back(w);
}

node_record record_codec::decode(const std::vector<word_t>& in) const {
    node_record rec;
    if (profile_ == record_profile::wide) {
        rec.parent = in[0];
        rec.q = in[1];
        rec.flag = decode_flag_wide(in[2]);
        rec.cba = decode_cba_wide(in[3]);
        rec.depth = in[4];
        rec.weight = clamp_weight(in[5]);
        return rec;
    }
    word_t w = in[0];
    word_t p = (w >> 44) & p_null_packed;
    word_t q = (w >> 26) & q_null_packed;
    rec.parent = p == p_null_packed ? t_null : p;
    rec.q = q == q_null_packed ? q_null : q;
    rec.depth = (w >> 10) & 0xffff;
    rec.weight = clamp_weight((w >> 4) & 0x3f);
    switch ((w >> 2) & 3) {
    case 0: rec.flag = {flag_value::kind::unspent, 0, 0}; break;
    case 1: rec.flag = {flag_value::kind::spent, 0, 0}; break;
    case 2: rec.flag = {flag_value::kind::annotated, 0, 0}; break;
    default: rec.flag = {flag_value::kind::spent, 0, 0}; break;
    }
    switch (w & 3) {
    case 0: rec.cba = {cba_value::kind::unset, 0, 0, 0}; break;
    case 1: rec.cba = {cba_value::kind::set, 0, 0, 0}; break;
    case 2: rec.cba = {cba_value::kind::annotated, 0, 0, 0}; break;
    default: rec.cba = {cba_value::kind::set, q_null, 0, 0}; break;
    }
    return rec;
}

bool record_codec::flag_is_annotation(const flag_value& f, word_t x,
                                      word_t i) const {
    if (f.k != flag_value::kind::annotated) return false;
    if (profile_ == record_profile::packed) return true; // tag only
    return f.x == (x & x_mask) && f.i == (i & i_mask);
}

bool record_codec::cba_is_annotation(const cba_value& c, word_t x,
                                     word_t i) const {
    if (c.k != cba_value::kind::annotated) return false;
    if (profile_ == record_profile::packed) return true;
    return c.x == (x & x_mask) && c.i == (i & i_mask);
}

bool record_codec::cba_is_set_to(const cba_value& c, word_t target) const {
    if (c.k != cba_value::kind::set) return false;
    if (profile_ == record_profile::packed) return true;
    return c.target == (target & set_mask);
}

node_record read_record(memory_system& ms, const record_codec& codec,
                        t_index v) {
    std::size_t base = static_cast<std::size_t>(v) * codec.words();
    std::vector<word_t> words(codec.words());
    for (std::size_t i = 0; i < words.size(); ++i)
        words[i] = ms.records().read(base + i);
    return codec.decode(words);
}

void write_record(memory_system& ms, const record_codec& codec, t_index v,
                  const node_record& rec) {
    std::size_t base = static_cast<std::size_t>(v) * codec.words();
    std::vector<word_t> words;
    codec.encode(rec, words);
    for (std::size_t i = 0; i < words.size(); ++i)
        ms.records().write(base + i, words[i]);
}

t_index append_record(memory_system& ms, const record_codec& codec,
                      const node_record& rec) {
    std::vector<word_t> words;
    codec.encode(rec, words);
    std::size_t base = ms.records().size();
    for (word_t w : words) ms.records().append(w);
    return static_cast<t_index>(base / codec.words());
}

std::vector<word_t> peek_record_words(const memory_system& ms,
                                      const record_codec& codec, t_index v) {
    std::size_t base = static_cast<std::size_t>(v) * codec.words();
    std::vector<word_t> words(codec.words());
    for (std::size_t i = 0; i < words.size(); ++i)
        words[i] = ms.records().peek(base + i);
    return words;
}

} // namespace restree
