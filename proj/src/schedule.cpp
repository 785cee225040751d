#include "gatehold/schedule.hpp"
#include "gatehold/csv.hpp"
#include "gatehold/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <tuple>

namespace gatehold {

std::string_view to_string(EquipmentClass c) {
  return c == EquipmentClass::small ? "small" : "large";
}

EquipmentClass parse_equipment(std::string_view s) {
  if (s == "small") return EquipmentClass::small;
  if (s == "large") return EquipmentClass::large;
  throw Error("unknown equipment class '" + std::string(s) + "'");
}

std::vector<std::string> Flight::source_ids() const {
  if (!legs.empty()) return legs;
  return {id};
}

const Gate* Schedule::find_gate(std::string_view id) const {
  for (const auto& g : gates)
    if (g.id == id) return &g;
  return nullptr;
}

GateOccupancy scheduled_window(const Flight& f, Minute dwell) {
  GateOccupancy w{f.id, f.current_gate.value_or(""), 0, 0};
  if (f.is_turn()) {
    w.t_in = *f.sched_arr;
    w.t_out = *f.sched_dep;
  } else if (f.has_arrival()) {
    w.t_in = *f.sched_arr;
    w.t_out = *f.sched_arr + dwell;
  } else {
    w.t_in = *f.sched_dep - dwell;
    w.t_out = *f.sched_dep;
  }
  return w;
}

GateOccupancy actual_window(const Flight& f, Minute dwell) {
  if ((f.has_arrival() && !f.act_arr) || (f.has_departure() && !f.act_dep))
    throw Error("flight " + f.id + " has no actual times");
  GateOccupancy w{f.id, f.current_gate.value_or(""), 0, 0};
  if (f.is_turn()) {
    w.t_in = *f.act_arr;
    w.t_out = *f.act_dep;
  } else if (f.has_arrival()) {
    w.t_in = *f.act_arr;
    w.t_out = *f.act_arr + dwell;
  } else {
    w.t_in = *f.act_dep - dwell;
    w.t_out = *f.act_dep;
  }
  return w;
}

void validate_flight(const Flight& f) {
  if (f.id.empty()) throw Error("flight with empty id");
  if (!f.sched_arr && !f.sched_dep)
    throw Error("flight " + f.id + ": needs a scheduled arrival or departure");
  if (f.sched_arr && f.sched_dep && *f.sched_arr >= *f.sched_dep)
    throw Error("flight " + f.id + ": arrival after departure");
  if (f.act_arr && !f.sched_arr)
    throw Error("flight " + f.id + ": actual arrival without scheduled arrival");
  if (f.act_dep && !f.sched_dep)
    throw Error("flight " + f.id + ": actual departure without scheduled departure");
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("bad integer '" + std::string(s) + "'");
  return v;
}

std::optional<Minute> opt_time(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return parse_time(cell);
}

std::string fmt_time(const std::optional<Minute>& t) {
  return t ? std::to_string(*t) : std::string();
}

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ';';
    out += s;
  }
  return out;
}

}  // namespace

Minute parse_time(std::string_view text) {
  if (text.find('-', 1) == std::string_view::npos || text.size() < 10)
    return parse_int(text);
  // YYYY-MM-DD[THH:MM[:SS]]
  const auto y = parse_int(text.substr(0, 4));
  const auto mo = parse_int(text.substr(5, 2));
  const auto d = parse_int(text.substr(8, 2));
  if (text[4] != '-' || text[7] != '-' || mo < 1 || mo > 12 || d < 1 || d > 31)
    throw Error("bad timestamp '" + std::string(text) + "'");
  Minute minutes = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 1440;
  if (text.size() > 10) {
    if ((text[10] != 'T' && text[10] != ' ') || text.size() < 16 || text[13] != ':')
      throw Error("bad timestamp '" + std::string(text) + "'");
    minutes += parse_int(text.substr(11, 2)) * 60 + parse_int(text.substr(14, 2));
  }
  return minutes;
}

Horizon span_of(const std::vector<Flight>& flights) {
  Horizon h{0, 0};
  bool first = true;
  auto widen = [&](const std::optional<Minute>& t) {
    if (!t) return;
    if (first) {
      h = {*t, *t};
      first = false;
    }
    h.start = std::min(h.start, *t);
    h.end = std::max(h.end, *t);
  };
  for (const auto& f : flights) {
    widen(f.sched_arr);
    widen(f.sched_dep);
    widen(f.act_arr);
    widen(f.act_dep);
  }
  return h;
}

Schedule read_schedule(std::istream& in) {
  const auto table = csv::Table::parse(in);
  static constexpr const char* kColumns[] = {"flight_id", "airline",  "terminal",
                                             "equipment_class", "sched_arr", "sched_dep",
                                             "act_arr",   "act_dep",  "current_gate"};
  for (const char* c : kColumns)
    if (!table.has_column(c)) throw Error(std::string("schedule: missing column ") + c);

  Schedule s;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    Flight f;
    try {
      f.id = table.at(r, "flight_id");
      f.airline = table.at(r, "airline");
      f.terminal = table.at(r, "terminal");
      f.equipment = parse_equipment(table.at(r, "equipment_class"));
      f.sched_arr = opt_time(table.at(r, "sched_arr"));
      f.sched_dep = opt_time(table.at(r, "sched_dep"));
      f.act_arr = opt_time(table.at(r, "act_arr"));
      f.act_dep = opt_time(table.at(r, "act_dep"));
      if (const auto& g = table.at(r, "current_gate"); !g.empty()) f.current_gate = g;
      validate_flight(f);
    } catch (const Error& e) {
      throw Error("schedule row " + std::to_string(r + 1) + " (line " +
                  std::to_string(table.line_of(r)) + "): " + e.what());
    }
    if (!seen.insert(f.id).second) throw Error("schedule: duplicate flight id " + f.id);
    s.flights.push_back(std::move(f));
  }
  s.horizon = span_of(s.flights);
  return s;
}

Schedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_schedule(in);
}

void write_schedule(std::ostream& out, const Schedule& s) {
  out << "flight_id,airline,terminal,equipment_class,sched_arr,sched_dep,act_arr,act_dep,"
         "current_gate\n";
  for (const auto& f : s.flights) {
    out << csv::escape(f.id) << ',' << csv::escape(f.airline) << ','
        << csv::escape(f.terminal) << ',' << to_string(f.equipment) << ','
        << fmt_time(f.sched_arr) << ',' << fmt_time(f.sched_dep) << ','
        << fmt_time(f.act_arr) << ',' << fmt_time(f.act_dep) << ','
        << csv::escape(f.current_gate.value_or("")) << '\n';
  }
}

void save_schedule(const std::filesystem::path& path, const Schedule& s) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_schedule(out, s);
}

std::vector<Gate> read_gates(std::istream& in) {
  const auto table = csv::Table::parse(in);
  std::vector<Gate> gates;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    Gate g;
    try {
      g.id = table.at(r, "gate_id");
      g.terminal = table.at(r, "terminal");
      for (auto& a : csv::split_list(table.at(r, "airlines"))) g.airlines.insert(std::move(a));
      for (auto& e : csv::split_list(table.at(r, "equipment")))
        g.equipment.insert(parse_equipment(e));
    } catch (const Error& e) {
      throw Error("gates row " + std::to_string(r + 1) + ": " + e.what());
    }
    if (g.id.empty()) throw Error("gates row " + std::to_string(r + 1) + ": empty gate id");
    if (g.airlines.empty() || g.equipment.empty())
      throw Error("gate " + g.id + ": empty compatibility set");
    if (!seen.insert(g.id).second) throw Error("gates: duplicate gate id " + g.id);
    gates.push_back(std::move(g));
  }
  return gates;
}

std::vector<Gate> load_gates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_gates(in);
}

void write_gates(std::ostream& out, const std::vector<Gate>& gates) {
  out << "gate_id,terminal,airlines,equipment\n";
  for (const auto& g : gates) {
    std::string eq;
    for (auto e : g.equipment) eq += (eq.empty() ? "" : ";") + std::string(to_string(e));
    out << csv::escape(g.id) << ',' << csv::escape(g.terminal) << ','
        << csv::escape(join(g.airlines)) << ',' << eq << '\n';
  }
}

void save_gates(const std::filesystem::path& path, const std::vector<Gate>& gates) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_gates(out, gates);
}

GateMap load_gate_map(const std::filesystem::path& path) {
  const auto table = csv::Table::read(path);
  GateMap m;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& f = table.at(r, "flight_id");
    if (!m.emplace(f, table.at(r, "gate_id")).second)
      throw Error("assignment: duplicate flight id " + f);
  }
  return m;
}

void save_gate_map(const std::filesystem::path& path, const GateMap& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "flight_id,gate_id\n";
  for (const auto& [f, g] : m) out << csv::escape(f) << ',' << csv::escape(g) << '\n';
}

// Pairing -------------------------------------------------------------------

namespace {

struct GateEvent {
  Minute time;
  bool is_arrival;
  std::size_t index;  // into arrivals or departures
};

Flight merge(const Flight& arr, const Flight& dep) {
  Flight t;
  t.id = arr.id + "+" + dep.id;
  t.airline = dep.airline;
  t.terminal = dep.terminal;
  t.equipment = dep.equipment;
  t.sched_arr = arr.sched_arr;
  t.sched_dep = dep.sched_dep;
  t.act_arr = arr.act_arr;
  t.act_dep = dep.act_dep;
  t.current_gate = dep.current_gate;
  t.legs = {arr.id, dep.id};
  return t;
}

}  // namespace

std::vector<Flight> pair_flights(const std::vector<Flight>& arrivals,
                                 const std::vector<Flight>& departures) {
  std::vector<Flight> out;
  std::map<std::string, std::vector<GateEvent>> by_gate;
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    const auto& a = arrivals[i];
    if (a.current_gate && a.sched_arr)
      by_gate[*a.current_gate].push_back({*a.sched_arr, true, i});
    else
      out.push_back(a);
  }
  for (std::size_t i = 0; i < departures.size(); ++i) {
    const auto& d = departures[i];
    if (d.current_gate && d.sched_dep)
      by_gate[*d.current_gate].push_back({*d.sched_dep, false, i});
    else
      out.push_back(d);
  }

  for (auto& [gate, events] : by_gate) {
    // Arrivals before departures at equal times: an aircraft cannot leave a
    // gate it has not yet reached.
    std::sort(events.begin(), events.end(), [&](const GateEvent& x, const GateEvent& y) {
      if (x.time != y.time) return x.time < y.time;
      if (x.is_arrival != y.is_arrival) return x.is_arrival;
      const auto& fx = x.is_arrival ? arrivals[x.index] : departures[x.index];
      const auto& fy = y.is_arrival ? arrivals[y.index] : departures[y.index];
      return fx.id < fy.id;
    });
    struct Parked {
      std::size_t arrival;
      bool towed;
    };
    std::vector<Parked> stack;
    for (const auto& ev : events) {
      if (ev.is_arrival) {
        if (!stack.empty()) stack.back().towed = true;
        stack.push_back({ev.index, false});
        continue;
      }
      const auto& dep = departures[ev.index];
      if (stack.empty()) {
        out.push_back(dep);
        continue;
      }
      const Parked top = stack.back();
      stack.pop_back();
      const auto& arr = arrivals[top.arrival];
      if (!top.towed && arr.equipment == dep.equipment) {
        out.push_back(merge(arr, dep));
      } else {
        out.push_back(arr);
        out.push_back(dep);
      }
    }
    for (const auto& p : stack) out.push_back(arrivals[p.arrival]);
  }

  std::sort(out.begin(), out.end(), [](const Flight& x, const Flight& y) {
    const auto wx = scheduled_window(x).t_in;
    const auto wy = scheduled_window(y).t_in;
    return std::tie(wx, x.id) < std::tie(wy, y.id);
  });
  return out;
}

Schedule pair_schedule(const Schedule& legs) {
  std::vector<Flight> arrivals, departures, turns;
  for (const auto& f : legs.flights) {
    if (f.is_turn())
      turns.push_back(f);
    else if (f.has_arrival())
      arrivals.push_back(f);
    else
      departures.push_back(f);
  }
  Schedule out;
  out.gates = legs.gates;
  out.horizon = legs.horizon;
  out.flights = pair_flights(arrivals, departures);
  out.flights.insert(out.flights.end(), turns.begin(), turns.end());
  std::sort(out.flights.begin(), out.flights.end(), [](const Flight& x, const Flight& y) {
    const auto wx = scheduled_window(x).t_in;
    const auto wy = scheduled_window(y).t_in;
    return std::tie(wx, x.id) < std::tie(wy, y.id);
  });
  return out;
}

}  // namespace gatehold
