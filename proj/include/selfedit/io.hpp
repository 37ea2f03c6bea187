#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "selfedit/engine.hpp"

namespace selfedit {

// One self-contained JSON record per line; keys are emitted in sorted order
// so two identical runs write byte-identical logs.
inline std::string event_to_json_line(const TransitionEvent& e) {
  nlohmann::json j;
  j["action"] = e.action;
  if (e.code_text) j["code"] = *e.code_text;
  if (!e.detail.empty()) j["detail"] = e.detail;
  j["gen"] = e.generation;
  j["org"] = e.organism_id;
  j["points"] = e.points_after;
  j["reward"] = e.reward;
  j["step"] = e.step_index;
  return j.dump();
}

inline std::string events_to_jsonl(const EventLog& log) {
  std::string out;
  for (const TransitionEvent& e : log.events()) {
    out += event_to_json_line(e);
    out += '\n';
  }
  return out;
}

inline std::string metrics_to_csv(const RunReport& report) {
  std::string out = "generation,pop,mean_points,punishments,diag_success\n";
  char buf[64];
  for (const GenMetrics& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%.4f", row.mean_points);
    out += std::to_string(row.generation) + "," + std::to_string(row.pop) + "," +
           buf + "," + std::to_string(row.punishments) + "," +
           std::to_string(row.diag_success) + "\n";
  }
  return out;
}

inline nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["generations_executed"] = report.generations_executed;
  j["extinct"] = report.extinct;
  j["events_hash"] = report.events_hash;

  nlohmann::json adoptions = nlohmann::json::array();
  for (const AdoptionRecord& a : report.adoptions)
    adoptions.push_back({{"gen", a.generation}, {"org", a.organism_id},
                         {"policy", a.policy}});
  j["policies_adopted"] = adoptions;

  nlohmann::json discoveries = nlohmann::json::array();
  for (const DiscoveryRecord& d : report.discoveries)
    discoveries.push_back({{"gen", d.generation}, {"org", d.organism_id},
                           {"testing_code", d.testing_code}});
  j["testing_codes_found"] = discoveries;

  nlohmann::json finals = nlohmann::json::array();
  for (const FinalOrganism& f : report.final_population)
    finals.push_back({{"id", f.id}, {"points", f.points}, {"age", f.age},
                      {"effective", f.effective}, {"policies", f.policies}});
  j["final_population"] = finals;

  nlohmann::json summary = nlohmann::json::array();
  for (const GenMetrics& row : report.rows)
    summary.push_back({{"gen", row.generation}, {"pop", row.pop},
                       {"mean_points", row.mean_points},
                       {"punishments", row.punishments},
                       {"diag_success", row.diag_success},
                       {"diag_fail", row.diag_fail}});
  j["per_generation"] = summary;
  return j;
}

}  // namespace selfedit
