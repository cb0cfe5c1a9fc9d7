#pragma once
#include "restree/faulty_ram.hpp"

// Query outcome types shared by the resilient structure and the oracle so
// contract checks compare them structurally.
namespace restree {

enum class outcome_status : std::uint8_t { answer, root_reached, error };

struct la_outcome {
    outcome_status st = outcome_status::error;
    t_index v = t_null;
    bool operator==(const la_outcome&) const = default;
};

// weighted LA: error doubles as "no ancestor reaches weight k"
struct wla_outcome {
    outcome_status st = outcome_status::error;
    t_index v = t_null;
    bool operator==(const wla_outcome&) const = default;
};

struct bvq_outcome {
    outcome_status st = outcome_status::error;
    t_index witness = t_null;
    word_t min_weight = 0;
    bool operator==(const bvq_outcome&) const = default;
};

struct lca_outcome {
    outcome_status st = outcome_status::error;
    t_index v = t_null;
    bool operator==(const lca_outcome&) const = default;
};

} // namespace restree
