#include "gatehold/simulation.hpp"
#include "gatehold/error.hpp"
#include "gatehold/parallel.hpp"
#include "gatehold/random.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <tuple>

namespace gatehold {

void SimConfig::validate() const {
  if (n_star && *n_star < 1) throw Error("n_star must be at least 1");
  if (replications < 1) throw Error("replications must be at least 1");
  if (tow_dwell < 1) throw Error("tow dwell must be positive");
  takeoff.validate();
  for (const auto& t : taxi)
    if (!(t.sigma_log > 0)) throw Error("taxi fit for " + t.terminal + " needs sigma_log > 0");
}

const TaxiFit& SimConfig::taxi_for(const std::string& terminal) const {
  for (const auto& t : taxi)
    if (t.terminal == terminal) return t;
  return default_taxi;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Timed {
  Minute time;
  std::size_t flight;
};

struct FlightPlan {
  std::size_t gate = 0;
  Minute gate_in = 0;
  std::optional<Minute> ready;   // departures
  std::optional<Minute> tow_off; // arrival-only legs
};

class Simulator {
 public:
  Simulator(const Schedule& s, const GateMap& gate_of, const SimConfig& cfg, std::uint64_t seed)
      : sched_(s), cfg_(cfg), seed_(seed), runway_(cfg.takeoff, derive_seed(seed, 0)) {
    std::map<std::string, std::size_t> gate_ids;
    for (const auto& [flight, gate] : gate_of)
      if (!gate_ids.contains(gate)) gate_ids.emplace(gate, gate_ids.size());

    plans_.resize(s.flights.size());
    out_.flights.resize(s.flights.size());
    for (std::size_t i = 0; i < s.flights.size(); ++i) {
      const auto& f = s.flights[i];
      const auto it = gate_of.find(f.id);
      if (it == gate_of.end()) throw Error("assignment has no gate for flight " + f.id);
      auto& p = plans_[i];
      p.gate = gate_ids.at(it->second);
      const auto w = actual_window(f, cfg.tow_dwell);
      p.gate_in = w.t_in;
      if (f.has_departure())
        p.ready = std::max(*f.act_dep, p.gate_in);
      else
        p.tow_off = w.t_out;

      auto& r = out_.flights[i];
      r.flight = f.id;
      r.terminal = f.terminal;
      r.gate = it->second;

      claims_.push_back({p.gate_in, i});
      if (p.ready) readies_.push_back({*p.ready, i});
      if (p.tow_off) tows_.push_back({*p.tow_off, i});
    }
    occupant_.assign(gate_ids.size(), kNone);
    cleared_.assign(s.flights.size(), false);
    auto by_time_id = [&](const Timed& a, const Timed& b) {
      return std::tie(a.time, sched_.flights[a.flight].id) <
             std::tie(b.time, sched_.flights[b.flight].id);
    };
    std::sort(claims_.begin(), claims_.end(), by_time_id);
    std::sort(readies_.begin(), readies_.end(), by_time_id);
    std::sort(tows_.begin(), tows_.end(), by_time_id);
  }

  SimOutcome run() {
    if (sched_.flights.empty()) return std::move(out_);
    Minute t = claims_.front().time;
    Minute last_event = t;
    for (const auto* v : {&claims_, &readies_, &tows_})
      for (const auto& e : *v) last_event = std::max(last_event, e.time);

    std::size_t departures_left = readies_.size();
    taken_off_ = 0;
    while (next_claim_ < claims_.size() || next_ready_ < readies_.size() ||
           next_tow_ < tows_.size() || taken_off_ < departures_left) {
      if (t > last_event + cfg_.max_overrun)
        throw Error("simulation did not drain; check the take-off parameters");
      minute(t);
      ++t;
    }
    finish();
    return std::move(out_);
  }

 private:
  void minute(Minute t) {
    // Arrivals first: an aircraft leaving this minute still blocks its gate.
    for (; next_claim_ < claims_.size() && claims_[next_claim_].time <= t; ++next_claim_)
      claim(claims_[next_claim_].flight, t);
    for (; next_tow_ < tows_.size() && tows_[next_tow_].time <= t; ++next_tow_) {
      const auto f = tows_[next_tow_].flight;
      if (occupant_[plans_[f].gate] == f) occupant_[plans_[f].gate] = kNone;
    }
    for (; next_ready_ < readies_.size() && readies_[next_ready_].time <= t; ++next_ready_) {
      const auto f = readies_[next_ready_].flight;
      if (cleared_[f]) continue;
      out_.flights[f].ready = t;
      pushback_queue_.push_back(f);
    }
    // Taxiing aircraft reaching the runway, FCFS by arrival then id.
    std::vector<std::size_t> arriving;
    for (auto it = taxiing_.begin(); it != taxiing_.end();) {
      if (out_.flights[*it].runway <= t) {
        arriving.push_back(*it);
        it = taxiing_.erase(it);
      } else {
        ++it;
      }
    }
    std::sort(arriving.begin(), arriving.end(), [&](std::size_t a, std::size_t b) {
      return sched_.flights[a].id < sched_.flights[b].id;
    });
    for (auto f : arriving) runway_queue_.push_back(f);

    const int cleared = runway_.step(static_cast<int>(runway_queue_.size()));
    for (int k = 0; k < cleared; ++k) {
      const auto f = runway_queue_.front();
      runway_queue_.pop_front();
      out_.flights[f].takeoff = t;
      --n_;
      ++taken_off_;
    }

    while (!pushback_queue_.empty() && (!cfg_.n_star || n_ < *cfg_.n_star)) {
      const auto f = pushback_queue_.front();
      pushback_queue_.pop_front();
      clear_pushback(f, t);
    }
  }

  void claim(std::size_t f, Minute t) {
    auto& rec = out_.flights[f];
    rec.gate_in = t;
    const std::size_t g = plans_[f].gate;
    const std::size_t blocker = occupant_[g];
    if (blocker != kNone) {
      const auto& bp = plans_[blocker];
      GateConflictEvent ev;
      ev.arriving = sched_.flights[f].id;
      ev.gate = rec.gate;
      ev.blocking = sched_.flights[blocker].id;
      ev.time = t;
      const Minute planned_release = bp.ready ? *bp.ready : *bp.tow_off;
      ev.overlap = std::max<Minute>(1, planned_release - t);
      out_.conflicts.push_back(std::move(ev));
      if (bp.ready) {
        // Promote: the blocker is cleared now regardless of N versus N*.
        auto& brec = out_.flights[blocker];
        brec.promoted = true;
        if (!brec.ready) brec.ready = t;
        pushback_queue_.erase(std::remove(pushback_queue_.begin(), pushback_queue_.end(), blocker),
                              pushback_queue_.end());
        clear_pushback(blocker, t);
      } else {
        occupant_[g] = kNone;  // tow the parked aircraft off early
      }
    }
    occupant_[g] = f;
  }

  void clear_pushback(std::size_t f, Minute t) {
    auto& rec = out_.flights[f];
    cleared_[f] = true;
    rec.pushback = t;
    rec.hold = t - *rec.ready;
    rec.npb = n_;
    if (occupant_[plans_[f].gate] == f) occupant_[plans_[f].gate] = kNone;
    const auto& fit = cfg_.taxi_for(sched_.flights[f].terminal);
    Rng rng(derive_seed(seed_, f + 1));
    rec.taxi_nominal = std::max<Minute>(1, std::llround(rng.lognormal(fit.mu_log, fit.sigma_log)));
    rec.runway = t + rec.taxi_nominal;
    taxiing_.push_back(f);
    ++n_;
  }

  void finish() {
    double held = 0, hold_sum = 0, taxi_sum = 0, deps = 0;
    for (const auto& r : out_.flights) {
      if (!r.is_departure()) continue;
      if (!r.takeoff || !r.pushback) throw Error("departure " + r.flight + " never took off");
      deps += 1;
      hold_sum += static_cast<double>(r.hold);
      taxi_sum += static_cast<double>(*r.takeoff - *r.pushback);
      if (r.hold > 0) held += 1;
    }
    for (std::size_t i = 0; i < out_.flights.size(); ++i)
      if (!out_.flights[i].gate_in) throw Error("flight " + out_.flights[i].flight + " never reached its gate");
    out_.departures = deps;
    out_.gate_conflicts = static_cast<double>(out_.conflicts.size());
    out_.gate_held_departures = held;
    out_.mean_hold_min = held > 0 ? hold_sum / held : 0.0;
    out_.mean_hold_all_min = deps > 0 ? hold_sum / deps : 0.0;
    out_.mean_taxi_out_min = deps > 0 ? taxi_sum / deps : 0.0;
  }

  const Schedule& sched_;
  const SimConfig& cfg_;
  std::uint64_t seed_;
  RunwayProcess runway_;
  std::vector<FlightPlan> plans_;
  std::vector<Timed> claims_, readies_, tows_;
  std::size_t next_claim_ = 0, next_ready_ = 0, next_tow_ = 0;
  std::vector<std::size_t> occupant_;
  std::vector<bool> cleared_;
  std::deque<std::size_t> pushback_queue_;
  std::vector<std::size_t> taxiing_;
  std::deque<std::size_t> runway_queue_;
  int n_ = 0;
  std::size_t taken_off_ = 0;
  SimOutcome out_;
};

SimOutcome average(const std::vector<SimOutcome>& reps) {
  SimOutcome m;
  if (reps.empty()) return m;
  for (const auto& r : reps) {
    m.gate_conflicts += r.gate_conflicts;
    m.gate_held_departures += r.gate_held_departures;
    m.mean_hold_min += r.mean_hold_min;
    m.mean_hold_all_min += r.mean_hold_all_min;
    m.mean_taxi_out_min += r.mean_taxi_out_min;
    m.departures += r.departures;
  }
  const auto n = static_cast<double>(reps.size());
  m.gate_conflicts /= n;
  m.gate_held_departures /= n;
  m.mean_hold_min /= n;
  m.mean_hold_all_min /= n;
  m.mean_taxi_out_min /= n;
  m.departures /= n;
  return m;
}

}  // namespace

SimOutcome run_once(const Schedule& schedule, const GateMap& gate_of, const SimConfig& config,
                    std::uint64_t replication_seed) {
  config.validate();
  return Simulator(schedule, gate_of, config, replication_seed).run();
}

std::uint64_t replication_seed(const SimConfig& config, int index) {
  return derive_seed(config.seed, static_cast<std::uint64_t>(index));
}

ReplicatedOutcome run_replicated_serial(const Schedule& schedule, const GateMap& gate_of,
                                        const SimConfig& config, bool keep_records) {
  config.validate();
  ReplicatedOutcome out;
  for (int r = 0; r < config.replications; ++r) {
    auto o = run_once(schedule, gate_of, config, replication_seed(config, r));
    if (!keep_records) {
      o.flights.clear();
      o.conflicts.clear();
    }
    out.replications.push_back(std::move(o));
  }
  out.mean = average(out.replications);
  return out;
}

ReplicatedOutcome run_replicated(const Schedule& schedule, const GateMap& gate_of,
                                 const SimConfig& config, bool keep_records) {
  config.validate();
  ReplicatedOutcome out;
  out.replications.resize(static_cast<std::size_t>(config.replications));
  std::vector<std::string> errors(out.replications.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (int r = 0; r < config.replications; ++r) {
    try {
      auto o = run_once(schedule, gate_of, config, replication_seed(config, r));
      if (!keep_records) {
        o.flights.clear();
        o.conflicts.clear();
      }
      out.replications[static_cast<std::size_t>(r)] = std::move(o);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(r)] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(e);
  out.mean = average(out.replications);
  return out;
}

Sweep sweep_n_star(const Schedule& schedule, const GateMap& gate_of, const SimConfig& config,
                   int n_star_lo, int n_star_hi) {
  if (n_star_hi < n_star_lo) throw Error("sweep_n_star: empty range");
  auto row_of = [&](std::optional<int> n_star) {
    auto cfg = config;
    cfg.n_star = n_star;
    const auto m = run_replicated(schedule, gate_of, cfg).mean;
    return SweepRow{n_star.value_or(0), m.mean_hold_all_min, m.mean_taxi_out_min,
                    m.gate_held_departures, m.gate_conflicts};
  };
  Sweep s;
  for (int n = n_star_lo; n <= n_star_hi; ++n) s.rows.push_back(row_of(n));
  s.baseline = row_of(std::nullopt);
  return s;
}

std::size_t count_conflicts_static(const Schedule& schedule, const GateMap& gate_of,
                                   Minute tow_dwell) {
  std::map<std::string, std::vector<std::pair<GateOccupancy, GateOccupancy>>> by_gate;
  for (const auto& f : schedule.flights) {
    const auto it = gate_of.find(f.id);
    if (it == gate_of.end()) throw Error("assignment has no gate for flight " + f.id);
    by_gate[it->second].emplace_back(scheduled_window(f, tow_dwell), actual_window(f, tow_dwell));
  }
  std::size_t conflicts = 0;
  for (auto& [gate, v] : by_gate) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return std::tie(a.first.t_in, a.first.flight) < std::tie(b.first.t_in, b.first.flight);
    });
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k].second.t_in <= v[k - 1].second.t_out) ++conflicts;
  }
  return conflicts;
}

std::vector<SurfaceEvent> surface_events(const SimOutcome& outcome) {
  std::vector<SurfaceEvent> events;
  for (const auto& r : outcome.flights)
    if (r.pushback && r.takeoff) events.push_back({r.flight, *r.pushback, *r.takeoff, r.terminal});
  std::stable_sort(events.begin(), events.end(), [](const SurfaceEvent& a, const SurfaceEvent& b) {
    return std::tie(a.pushback, a.flight_id) < std::tie(b.pushback, b.flight_id);
  });
  return events;
}

}  // namespace gatehold
