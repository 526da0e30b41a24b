#include "stabsec/json_io.hpp"

#include <json.hpp>

namespace stabsec {

using nlohmann::json;

std::string instance_to_json(const Instance& inst) {
  json j;
  j["num_girls"] = inst.num_girls();
  j["num_boys"] = inst.num_boys();
  if (inst.has_girl_weights()) j["girl_weights"] = *inst.girl_weights();
  if (inst.has_boy_weights()) j["boy_weights"] = *inst.boy_weights();
  return j.dump();
}

Instance instance_from_json(const std::string& text) {
  json j = json::parse(text);
  std::optional<std::vector<double>> gw, bw;
  if (j.contains("girl_weights")) gw = j["girl_weights"].get<std::vector<double>>();
  if (j.contains("boy_weights")) bw = j["boy_weights"].get<std::vector<double>>();
  return Instance(j.at("num_girls").get<int>(), j.at("num_boys").get<int>(), std::move(gw),
                  std::move(bw));
}

std::string matching_to_json(const Matching& m) {
  json j = json::array();
  for (auto [boy, girl] : m.pairs()) j.push_back({boy, girl});
  return j.dump();
}

Matching matching_from_json(const std::string& text) {
  json j = json::parse(text);
  Matching m;
  for (const auto& pair : j) m.add(pair.at(0).get<int>(), pair.at(1).get<int>());
  return m;
}

}  // namespace stabsec
