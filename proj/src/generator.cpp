#include "gatehold/generator.hpp"
#include "gatehold/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

namespace gatehold {

double ShiftedLognormal::cdf(double x) const {
  if (x <= shift) return 0.0;
  return 0.5 * std::erfc(-(std::log(x - shift) - mu_log) / (sigma_log * std::sqrt(2.0)));
}

namespace {

struct LogParams {
  double mu;
  double sigma;
};

LogParams from_mean_cv(double mean, double cv) {
  const double s2 = std::log1p(cv * cv);
  return {std::log(mean) - 0.5 * s2, std::sqrt(s2)};
}

double bank_intensity(const std::vector<Bank>& banks, Minute t) {
  double lambda = 1.0;
  for (const auto& b : banks) {
    const double z = static_cast<double>(t - b.center) / static_cast<double>(b.width);
    lambda += b.weight * std::exp(-0.5 * z * z);
  }
  return lambda;
}

Minute rounded(double x) { return static_cast<Minute>(std::llround(x)); }

struct Leg {
  Minute time;      // scheduled event time
  std::size_t gate; // global gate index
  Flight flight;
};

class GateTimeline {
 public:
  GateTimeline(const GeneratorConfig& cfg, const TerminalLayout& term, const Gate& gate,
               bool small_only, std::uint64_t seed, double scale)
      : cfg_(cfg), term_(term), gate_(gate), small_only_(small_only), rng_(seed), scale_(scale) {}

  std::vector<Flight> build() {
    std::vector<Flight> legs;
    const Minute end = cfg_.horizon.end;
    Minute free = cfg_.horizon.start + rng_.uniform_int(0, 60);
    legs.push_back(departure(free, std::nullopt));

    while (true) {
      const Minute arr = free + separation(free);
      if (arr > end - 30) break;
      const Minute dep = arr + occupancy();
      if (rng_.uniform() < cfg_.tow_fraction) {
        // Outer aircraft is towed off, an inner turn uses the gate, then the
        // outer aircraft is towed back for its departure.
        const Minute inner_arr = arr + kDefaultTowDwell + 10;
        const Minute inner_dep = inner_arr + occupancy();
        const Minute outer_dep = inner_dep + kDefaultTowDwell + 10;
        if (outer_dep > end) break;
        auto outer = arrival(arr);
        auto inner = arrival(inner_arr);
        const auto outer_act = outer.act_arr;
        const auto inner_act = inner.act_arr;
        legs.push_back(std::move(outer));
        legs.push_back(std::move(inner));
        legs.push_back(departure(inner_dep, inner_act, legs[legs.size() - 1]));
        legs.push_back(departure(outer_dep, outer_act, legs[legs.size() - 3]));
        free = outer_dep;
        continue;
      }
      if (dep > end) {
        legs.push_back(arrival(arr));  // parked overnight
        break;
      }
      auto in = arrival(arr);
      const auto act = in.act_arr;
      legs.push_back(std::move(in));
      legs.push_back(departure(dep, act, legs.back()));
      free = dep;
    }
    return legs;
  }

 private:
  Minute separation(Minute t) {
    const double mean = scale_ * cfg_.mean_separation / bank_intensity(cfg_.banks, t);
    const auto p = from_mean_cv(mean, cfg_.separation_cv);
    return std::max(cfg_.min_separation, rounded(rng_.lognormal(p.mu, p.sigma)));
  }

  Minute occupancy() {
    const auto p = from_mean_cv(cfg_.mean_occupancy, cfg_.occupancy_cv);
    return std::max(cfg_.min_occupancy, rounded(rng_.lognormal(p.mu, p.sigma)));
  }

  Minute delay(const ShiftedLognormal& d) {
    const double x = std::clamp(d.sample(rng_), static_cast<double>(cfg_.delay_min),
                                static_cast<double>(cfg_.delay_max));
    return rounded(x);
  }

  Flight base() {
    Flight f;
    f.airline = term_.airlines[static_cast<std::size_t>(
        rng_.uniform_int(0, static_cast<std::int64_t>(term_.airlines.size()) - 1))];
    f.terminal = term_.name;
    f.equipment = (!small_only_ && rng_.uniform() < cfg_.large_fraction) ? EquipmentClass::large
                                                                         : EquipmentClass::small;
    f.current_gate = gate_.id;
    return f;
  }

  Flight arrival(Minute sched) {
    Flight f = base();
    f.sched_arr = sched;
    f.act_arr = sched + delay(cfg_.arrival_delay);
    return f;
  }

  // A departure flown by the aircraft of `inbound` (same airline/class).
  Flight departure(Minute sched, std::optional<Minute> inbound_act, const Flight& inbound) {
    Flight f;
    f.airline = inbound.airline;
    f.terminal = inbound.terminal;
    f.equipment = inbound.equipment;
    f.current_gate = gate_.id;
    f.sched_dep = sched;
    Minute act = sched + delay(cfg_.departure_delay);
    if (inbound_act) act = std::max(act, *inbound_act + cfg_.min_turnaround);
    f.act_dep = act;
    return f;
  }

  Flight departure(Minute sched, std::optional<Minute>) {
    Flight f = base();
    f.sched_dep = sched;
    f.act_dep = sched + delay(cfg_.departure_delay);
    return f;
  }

  const GeneratorConfig& cfg_;
  const TerminalLayout& term_;
  const Gate& gate_;
  bool small_only_;
  Rng rng_;
  double scale_;
};

Minute leg_time(const Flight& f) { return f.sched_arr ? *f.sched_arr : *f.sched_dep; }

Schedule generate(const GeneratorConfig& cfg, std::uint64_t seed, double scale) {
  Schedule s;
  struct GateInfo {
    const TerminalLayout* term;
    bool small_only;
  };
  std::vector<GateInfo> info;
  for (const auto& term : cfg.terminals) {
    if (term.airlines.empty()) throw Error("terminal " + term.name + " has no airlines");
    for (int k = 0; k < term.gates; ++k) {
      Gate g;
      g.id = term.name + std::to_string(k + 1);
      g.terminal = term.name;
      g.airlines.insert(term.airlines.begin(), term.airlines.end());
      const bool small_only = k < term.small_only_gates;
      g.equipment = small_only ? std::set<EquipmentClass>{EquipmentClass::small}
                               : std::set<EquipmentClass>{EquipmentClass::small,
                                                          EquipmentClass::large};
      s.gates.push_back(std::move(g));
      info.push_back({&term, small_only});
    }
  }
  if (s.gates.empty()) throw Error("generator: no gates configured");

  std::vector<Leg> legs;
  for (std::size_t gi = 0; gi < s.gates.size(); ++gi) {
    GateTimeline tl(cfg, *info[gi].term, s.gates[gi], info[gi].small_only,
                    derive_seed(seed, gi), scale);
    for (auto& f : tl.build()) legs.push_back({leg_time(f), gi, std::move(f)});
  }
  std::stable_sort(legs.begin(), legs.end(), [](const Leg& a, const Leg& b) {
    return std::tie(a.time, a.gate) < std::tie(b.time, b.gate);
  });

  if (cfg.flight_count > 0) {
    if (cfg.flight_count > legs.size())
      throw Error("generator: infeasible config, the gates hold only " +
                  std::to_string(legs.size()) + " legs in the horizon but " +
                  std::to_string(cfg.flight_count) + " were requested");
    legs.resize(cfg.flight_count);
  }

  std::map<std::string, int> numbers;
  for (auto& leg : legs) {
    auto& f = leg.flight;
    const int n = 100 + numbers[f.airline]++;
    f.id = f.airline + std::to_string(n);
    s.flights.push_back(std::move(f));
  }
  s.horizon = span_of(s.flights);
  s.horizon.start = std::min(s.horizon.start, cfg.horizon.start);
  s.horizon.end = std::max(s.horizon.end, cfg.horizon.end);
  return s;
}

}  // namespace

Schedule gen_synthetic(const GeneratorConfig& config, std::uint64_t seed) {
  if (config.mean_separation <= 0 || config.mean_occupancy <= 0)
    throw Error("generator: separation and occupancy means must be positive");
  // Banking shortens separations at peaks, so the separation scale is solved
  // by a few fixed-point passes until the realised mean hits the target.
  double scale = 1.0;
  for (int pass = 0; pass < 4; ++pass) {
    const auto s = generate(config, seed, scale);
    const auto stats = current_separation_stats(pair_schedule(s).flights);
    if (stats.pairs < 2 || stats.mean <= 0) break;
    scale = std::clamp(scale * config.mean_separation / stats.mean, 0.25, 4.0);
  }
  return generate(config, seed, scale);
}

SeparationStats current_separation_stats(const std::vector<Flight>& flights, Minute dwell) {
  std::map<std::string, std::vector<GateOccupancy>> by_gate;
  for (const auto& f : flights)
    if (f.current_gate) by_gate[*f.current_gate].push_back(scheduled_window(f, dwell));
  std::vector<double> seps;
  for (auto& [gate, windows] : by_gate) {
    std::sort(windows.begin(), windows.end(), [](const auto& a, const auto& b) {
      return std::tie(a.t_in, a.flight) < std::tie(b.t_in, b.flight);
    });
    for (std::size_t i = 1; i < windows.size(); ++i)
      seps.push_back(static_cast<double>(windows[i].t_in - windows[i - 1].t_out));
  }
  SeparationStats st;
  st.pairs = seps.size();
  if (seps.empty()) return st;
  st.mean = std::accumulate(seps.begin(), seps.end(), 0.0) / static_cast<double>(seps.size());
  double ss = 0.0;
  for (double s : seps) ss += (s - st.mean) * (s - st.mean);
  st.stddev = std::sqrt(ss / static_cast<double>(seps.size()));
  return st;
}

double mean_turn_occupancy(const std::vector<Flight>& flights) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& f : flights) {
    if (!f.is_turn()) continue;
    sum += static_cast<double>(*f.sched_dep - *f.sched_arr);
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace gatehold
