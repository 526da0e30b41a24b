#pragma once

#include <string>

#include "stabsec/core.hpp"

namespace stabsec {

// {"num_girls":..,"num_boys":..,"girl_weights":[..]?,"boy_weights":[..]?}
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

// [[boy, girl], ...] with 1-based indices
std::string matching_to_json(const Matching& m);
Matching matching_from_json(const std::string& text);

}  // namespace stabsec
