#pragma once
#include "restree/trace.hpp"

// Deterministic trace generators. kind is one of chain, caterpillar,
// random_attach, star_of_paths, figure2. n counts tree vertices including
// the root (so chain n emits n-1 ADDLEAFs). figure2 reproduces the paper's
// static example: the delta=3 colored path with the LA(v,8) query.
namespace restree {

struct gen_params {
    std::string kind = "chain";
    word_t n = 64;
    word_t delta = 2;
    word_t weight_min = 1;
    word_t weight_max = 8;
    double query_density = 0.5;
    word_t scripted_corruptions = 0;
    std::uint64_t seed = 1;
};

trace generate(const gen_params& p);

} // namespace restree
