#pragma once
#include "restree/faulty_ram.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

// Line-oriented trace format. Metadata headers (DELTA, SEED, ADVERSARY,
// BUDGET, RATE) come first, then one directive per line:
//   ADDLEAF <parent_id> <weight>
//   LA <v> <k> | WLA <v> <k> | LCA <u> <v> | BVQ <u> <v>
//   CORRUPT <node_id> FIELD <name>=<value>
//   CORRUPT <node_id> RAW <word_hex> [...]
//   CHECKPOINT
//   BUILD_STATIC <delta> <n>   followed by n parent entries (-1 = root)
namespace restree {

struct field_mutation {
    enum class field : std::uint8_t { p, q, flag, cba, depth, weight } which =
        field::p;
    // numeric fields use a; flag/cba use a=tag (0 unset/unspent, 1
    // spent/set, 2 annotated), b=x or target, c=i
    word_t a = 0;
    word_t b = 0;
    word_t c = 0;
};

struct directive {
    enum class kind : std::uint8_t {
        addleaf,
        build_static,
        la,
        wla,
        lca,
        bvq,
        corrupt_field,
        corrupt_raw,
        checkpoint,
    };
    kind k = kind::checkpoint;
    word_t a = 0; // addleaf: parent; queries: first arg; corrupt: node
    word_t b = 0; // addleaf: weight; queries: second arg
    field_mutation mutation;
    std::vector<word_t> words;   // corrupt_raw payload; build_static parents
    word_t static_delta = 0;     // build_static
    std::size_t line = 0;        // source line, for diagnostics
};

struct trace {
    word_t delta = 1;
    std::uint64_t seed = 1;
    std::string adversary = "none";
    word_t budget = ~word_t{0}; // default: delta
    double rate = 0.0;
    std::vector<directive> directives;
};

struct parse_error {
    std::size_t line = 0;
    std::string message;
};

std::variant<trace, parse_error> parse_trace(std::istream& in);
std::variant<trace, parse_error> parse_trace_file(const std::string& path);
std::string serialize_trace(const trace& t);

} // namespace restree
