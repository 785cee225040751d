#pragma once

#include "gatehold/schedule.hpp"

#include <optional>
#include <string>

namespace testing {

inline gatehold::Flight turn(std::string id, gatehold::Minute arr, gatehold::Minute dep,
                             std::string gate = "G1", std::string airline = "AA",
                             std::string terminal = "A") {
  gatehold::Flight f;
  f.id = std::move(id);
  f.airline = std::move(airline);
  f.terminal = std::move(terminal);
  f.sched_arr = arr;
  f.sched_dep = dep;
  f.act_arr = arr;
  f.act_dep = dep;
  f.current_gate = std::move(gate);
  return f;
}

inline gatehold::Flight arrival(std::string id, gatehold::Minute t, std::string gate,
                                gatehold::EquipmentClass eq = gatehold::EquipmentClass::small) {
  gatehold::Flight f;
  f.id = std::move(id);
  f.airline = "AA";
  f.terminal = "A";
  f.equipment = eq;
  f.sched_arr = t;
  f.act_arr = t;
  f.current_gate = std::move(gate);
  return f;
}

inline gatehold::Flight departure(std::string id, gatehold::Minute t, std::string gate,
                                  gatehold::EquipmentClass eq = gatehold::EquipmentClass::small) {
  gatehold::Flight f;
  f.id = std::move(id);
  f.airline = "AA";
  f.terminal = "A";
  f.equipment = eq;
  f.sched_dep = t;
  f.act_dep = t;
  f.current_gate = std::move(gate);
  return f;
}

inline gatehold::Gate gate(std::string id, std::string terminal = "A") {
  return {std::move(id), std::move(terminal), {"AA"},
          {gatehold::EquipmentClass::small, gatehold::EquipmentClass::large}};
}

}  // namespace testing
