#pragma once
#include "restree/faulty_ram.hpp"
#include "restree/record.hpp"
#include "restree/trace.hpp"

// Adversary behaviors and the record-corruption helpers shared by the
// scripted trace directives and the online strategies.
namespace restree {

// rewrite one field of a node's record; a single budgeted corruption
bool apply_field_corruption(memory_system& ms, const record_codec& codec,
                            t_index node, const field_mutation& m);
// rewrite the leading words of a node's record; a single budgeted corruption
bool apply_raw_corruption(memory_system& ms, const record_codec& codec,
                          t_index node, const std::vector<word_t>& words);

adversary_strategy strategy_from_name(const std::string& name);
const char* strategy_name(adversary_strategy s);

// installs the on_access / on_op_boundary behavior for the chosen strategy
// (and the scripted fault-event pump for all of them)
void install_strategy(memory_system& ms, adversary_strategy strategy,
                      double rate);

} // namespace restree
