#include "eealloc/cli/scenario_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

namespace eealloc::cli {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("cannot write " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

namespace {

double number_at(const json& obj, const std::string& key,
                 const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw InputError("missing field '" + path + key + "'");
  }
  if (!it->is_number()) {
    throw InputError("field '" + path + key + "' must be a number");
  }
  return it->get<double>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& path) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      ok = ok || item.key() == k;
    }
    if (!ok) {
      throw InputError("unknown field '" + path + item.key() + "'");
    }
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed scenario document: ") + e.what());
  }
  if (!doc.is_object()) {
    throw InputError("scenario document must be an object");
  }
  reject_unknown(doc,
                 {"users", "bandwidth_budget", "power_budget",
                  "amp_efficiency", "circuit_power"},
                 "");

  Scenario s;
  s.bandwidth_budget = number_at(doc, "bandwidth_budget", "");
  s.power_budget = number_at(doc, "power_budget", "");
  s.power_model.amp_efficiency = number_at(doc, "amp_efficiency", "");
  s.power_model.circuit_power = number_at(doc, "circuit_power", "");

  const auto users = doc.find("users");
  if (users == doc.end()) {
    throw InputError("missing field 'users'");
  }
  if (!users->is_array()) {
    throw InputError("field 'users' must be an array");
  }
  for (std::size_t k = 0; k < users->size(); ++k) {
    const auto& u = (*users)[k];
    const std::string path = "users[" + std::to_string(k) + "].";
    if (!u.is_object()) {
      throw InputError("field 'users[" + std::to_string(k) +
                       "]' must be an object");
    }
    reject_unknown(u, {"gain", "min_rate", "bandwidth"}, path);
    UserChannel ch;
    ch.gain = number_at(u, "gain", path);
    ch.min_rate = number_at(u, "min_rate", path);
    if (u.contains("bandwidth")) {
      ch.fixed_bandwidth = number_at(u, "bandwidth", path);
    }
    s.users.push_back(ch);
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json doc;
  auto users = nlohmann::ordered_json::array();
  for (const auto& u : s.users) {
    nlohmann::ordered_json j;
    j["gain"] = u.gain;
    j["min_rate"] = u.min_rate;
    if (u.fixed_bandwidth) {
      j["bandwidth"] = *u.fixed_bandwidth;
    }
    users.push_back(std::move(j));
  }
  doc["users"] = std::move(users);
  doc["bandwidth_budget"] = s.bandwidth_budget;
  doc["power_budget"] = s.power_budget;
  doc["amp_efficiency"] = s.power_model.amp_efficiency;
  doc["circuit_power"] = s.power_model.circuit_power;
  return doc.dump(2) + "\n";
}

}  // namespace eealloc::cli
