#pragma once

#include <string>
#include <string_view>

#include "persuasion/model.hpp"

namespace persuasion {

// Instance files are JSON:
//   {"locations": [{"name": "L1", "states": ["0", "1"], "prior": [0.8, 0.2],
//                   "utility": [-1, 3], "payoff": 1}, ...],
//    "joint_prior": [{"state": ["0", "1"], "prob": 0.25}, ...]}
// "payoff" defaults to 1; without "joint_prior" locations are independent.
// Tuples missing from "joint_prior" have probability 0.
//
// Syntax errors report line and column; schema errors report the key path
// (e.g. locations[1].prior[0]). Both throw InputError, as does a parsed
// system that fails validate().
SystemModel parse_instance(std::string_view text);
SystemModel load_instance(const std::string& path);

// Inverse of parse_instance; numbers are written in shortest round-trip form
// so parse(serialize(x)) reproduces every double bit for bit. Zero entries of
// a joint table are omitted.
std::string serialize_instance(const SystemModel& system);

}  // namespace persuasion
