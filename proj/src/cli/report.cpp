#include "eealloc/cli/report.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "eealloc/joint.hpp"
#include "eealloc/waterfill.hpp"
#include "json.hpp"

namespace eealloc::cli {

using ojson = nlohmann::ordered_json;

std::string content_digest(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    out += fmt::format("{:02x}", md[i]);
  }
  return out;
}

double round12(double x) {
  if (!std::isfinite(x)) {
    return x;
  }
  return std::strtod(fmt::format("{:.12g}", x).c_str(), nullptr);
}

namespace {

ojson num(double x) {
  if (!std::isfinite(x)) {
    return nullptr;
  }
  return round12(x);
}

ojson users_json(const Allocation& a) {
  auto arr = ojson::array();
  for (const auto& u : a.per_user) {
    ojson j;
    j["bandwidth"] = num(u.bandwidth);
    j["power"] = num(u.power);
    j["rate"] = num(u.rate);
    arr.push_back(std::move(j));
  }
  return arr;
}

ojson totals_json(const Allocation& a) {
  ojson j;
  j["bandwidth"] = num(a.total_bandwidth);
  j["power"] = num(a.total_power);
  j["sum_rate"] = num(a.sum_rate);
  return j;
}

}  // namespace

FixedResiduals fixed_residuals(const Scenario& s, const Allocation& alloc,
                               double total_power) {
  FixedResiduals r;
  const auto diag = allocate(s, total_power).diagnostics;
  r.kkt = kkt_residual(s, alloc, diag);
  double sum = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& u = alloc.per_user.at(k);
    sum += u.power;
    const double floor = s.users[k].min_rate;
    r.floor = std::max(r.floor, std::max(0.0, floor - u.rate) /
                                    std::max(1.0, floor));
  }
  r.power_budget =
      std::abs(sum - total_power) / std::max(1.0, std::abs(total_power));
  return r;
}

JointResiduals joint_residuals(const Scenario& s, const Allocation& alloc,
                               double total_bandwidth, double total_power) {
  JointResiduals r;
  const auto lead = leader_index(s);
  const auto& leader = alloc.per_user.at(lead);
  const double psi =
      leader.bandwidth > 0.0
          ? psi_from_leader(leader.bandwidth, leader.power, s.users[lead].gain)
          : 0.0;
  double w_sum = 0.0;
  double p_sum = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& u = alloc.per_user.at(k);
    const double floor = s.users[k].min_rate;
    w_sum += u.bandwidth;
    p_sum += u.power;
    if (k == lead) {
      r.leader_floor = std::max(0.0, floor - u.rate) / std::max(1.0, floor);
      continue;
    }
    r.floor_equality = std::max(
        r.floor_equality, std::abs(u.rate - floor) / std::max(1.0, floor));
    if (u.bandwidth > 0.0 && psi > 0.0) {
      const double psi_k = psi_from_leader(u.bandwidth, u.power, s.users[k].gain);
      r.stationarity = std::max(r.stationarity, std::abs(psi_k - psi) / psi);
    }
  }
  r.bandwidth_budget = std::abs(w_sum - total_bandwidth) /
                       std::max(1.0, std::abs(total_bandwidth));
  r.power_budget =
      std::abs(p_sum - total_power) / std::max(1.0, std::abs(total_power));
  return r;
}

std::string fixed_report(const Scenario& s, std::string_view digest,
                         const FixedOptResult& result) {
  const auto wf = allocate(s, result.p_opt);
  const auto res = fixed_residuals(s, result.allocation, result.p_opt);

  ojson doc;
  doc["scenario_digest"] = std::string(digest);
  doc["mode"] = "fixed";
  doc["boundary_case"] = to_string(result.boundary_case);
  doc["p_opt"] = num(result.p_opt);
  doc["energy_efficiency"] = num(result.max_ee);
  doc["totals"] = totals_json(result.allocation);
  doc["users"] = users_json(result.allocation);
  doc["water_level"] = num(wf.diagnostics.water_level);
  doc["binding_set"] = wf.diagnostics.binding_set;
  doc["min_total_power"] = num(wf.diagnostics.min_total_power);
  if (result.bracket) {
    doc["bracket"] = {num(result.bracket->first), num(result.bracket->second)};
  } else {
    doc["bracket"] = nullptr;
  }
  ojson r;
  r["kkt"] = num(res.kkt);
  r["power_budget"] = num(res.power_budget);
  r["floor"] = num(res.floor);
  doc["residuals"] = std::move(r);
  return doc.dump(2) + "\n";
}

std::string joint_report(const Scenario& s, std::string_view digest,
                         const JointOptResult& result) {
  const auto& sol = result.solution;
  const auto res = joint_residuals(s, sol.allocation, s.bandwidth_budget,
                                   result.p_opt);
  const auto& lead = sol.allocation.per_user.at(sol.leader_index);
  const double psi_check =
      lead.bandwidth > 0.0
          ? psi_from_leader(lead.bandwidth, lead.power,
                            s.users[sol.leader_index].gain)
          : 0.0;
  const double psi_consistency =
      sol.psi > 0.0 ? std::abs(psi_check - sol.psi) / sol.psi : 0.0;
  const double rate_consistency =
      std::abs(sol.max_sum_rate - sol.allocation.sum_rate) /
      std::max(1.0, sol.allocation.sum_rate);

  ojson doc;
  doc["scenario_digest"] = std::string(digest);
  doc["mode"] = "joint";
  doc["boundary_case"] = to_string(result.boundary_case);
  doc["p_opt"] = num(result.p_opt);
  doc["energy_efficiency"] = num(result.max_ee);
  doc["totals"] = totals_json(sol.allocation);
  doc["users"] = users_json(sol.allocation);
  doc["psi"] = num(sol.psi);
  doc["leader_index"] = sol.leader_index;
  auto omegas = ojson::array();
  for (double o : sol.omegas) {
    omegas.push_back(num(o));
  }
  doc["omegas"] = std::move(omegas);
  doc["used_fallback"] = result.used_fallback;
  ojson r;
  r["stationarity"] = num(res.stationarity);
  r["floor_equality"] = num(res.floor_equality);
  r["leader_floor"] = num(res.leader_floor);
  r["bandwidth_budget"] = num(res.bandwidth_budget);
  r["power_budget"] = num(res.power_budget);
  r["psi_consistency"] = num(psi_consistency);
  r["sum_rate_consistency"] = num(rate_consistency);
  doc["residuals"] = std::move(r);
  return doc.dump(2) + "\n";
}

std::string sweep_csv(const SweepCurve& curve) {
  std::string out = "P,sum_rate,ee,indicator\n";
  for (const auto& x : curve.samples) {
    out += fmt::format("{:.12g},{:.12g},{:.12g},{:.12g}\n", x.power,
                       x.sum_rate, x.ee, x.indicator);
  }
  return out;
}

}  // namespace eealloc::cli
