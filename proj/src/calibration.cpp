#include "gatehold/calibration.hpp"
#include "gatehold/csv.hpp"
#include "gatehold/error.hpp"
#include "gatehold/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>

#include <omp.h>

namespace gatehold {

std::vector<SurfaceEvent> load_events(const std::filesystem::path& path) {
  const auto table = csv::Table::read(path);
  std::vector<SurfaceEvent> events;
  events.reserve(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    try {
      SurfaceEvent e;
      e.flight_id = table.at(r, "flight_id");
      e.pushback = parse_time(table.at(r, "pushback_min"));
      e.takeoff = parse_time(table.at(r, "takeoff_min"));
      e.terminal = table.at(r, "terminal");
      if (e.takeoff < e.pushback) throw Error("take-off before push-back");
      events.push_back(std::move(e));
    } catch (const Error& err) {
      throw Error("events row " + std::to_string(r + 1) + ": " + err.what());
    }
  }
  return events;
}

void save_events(const std::filesystem::path& path, const std::vector<SurfaceEvent>& events) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "flight_id,pushback_min,takeoff_min,terminal\n";
  for (const auto& e : events)
    out << csv::escape(e.flight_id) << ',' << e.pushback << ',' << e.takeoff << ','
        << csv::escape(e.terminal) << '\n';
}

NTSeries build_nt(std::span<const SurfaceEvent> events, int window) {
  NTSeries s;
  s.window = window;
  if (events.empty()) return s;
  for (std::size_t i = 1; i < events.size(); ++i)
    if (events[i].pushback < events[i - 1].pushback)
      throw Error("build_nt: events not sorted by push-back time");

  Minute first = events.front().pushback;
  Minute last = first;
  for (const auto& e : events) {
    if (e.takeoff < e.pushback) throw Error("build_nt: take-off before push-back for " + e.flight_id);
    last = std::max(last, e.takeoff);
  }
  const auto len = static_cast<std::size_t>(last - first + 1);
  std::vector<int> delta(len + 1, 0);
  std::vector<int> takeoffs(len, 0);
  for (const auto& e : events) {
    delta[static_cast<std::size_t>(e.pushback - first)] += 1;
    delta[static_cast<std::size_t>(e.takeoff - first)] -= 1;
    takeoffs[static_cast<std::size_t>(e.takeoff - first)] += 1;
  }
  s.start = first;
  s.n.resize(len);
  s.rate.resize(len);
  int running = 0;
  for (std::size_t i = 0; i < len; ++i) {
    running += delta[i];
    s.n[i] = running;
  }
  // Sliding sum over [i, i + window - 1].
  int sum = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(len, window); ++i) sum += takeoffs[i];
  for (std::size_t i = 0; i < len; ++i) {
    s.rate[i] = static_cast<double>(sum) / window;
    sum -= takeoffs[i];
    if (i + window < len) sum += takeoffs[i + window];
  }
  return s;
}

namespace {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = x.size();
  if (n < 2) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

struct MeanStd {
  double mean = 0;
  double stddev = 0;
};

MeanStd mean_std(std::span<const double> v) {
  MeanStd r;
  if (v.empty()) return r;
  r.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.stddev = std::sqrt(ss / static_cast<double>(v.size()));
  return r;
}

}  // namespace

CorrelationScan correlation_scan(std::span<const int> n, std::span<const double> rate,
                                 int min_offset, int max_offset) {
  if (n.size() != rate.size()) throw Error("correlation_scan: series length mismatch");
  CorrelationScan scan;
  const auto len = static_cast<long>(n.size());
  for (int d = min_offset; d <= max_offset; ++d) {
    std::vector<double> x, y;
    for (long i = std::max(0L, -static_cast<long>(d)); i < len && i + d < len; ++i) {
      x.push_back(n[static_cast<std::size_t>(i)]);
      y.push_back(rate[static_cast<std::size_t>(i + d)]);
    }
    CorrelationPoint p{d, pearson(x, y)};
    if (p.r && (!scan.best_offset || *p.r > *scan.points[static_cast<std::size_t>(
                                                   *scan.best_offset - min_offset)].r))
      scan.best_offset = d;
    scan.points.push_back(p);
  }
  return scan;
}

ThroughputCurve build_throughput_curve(const NTSeries& series) {
  std::map<int, std::vector<double>> by_n;
  for (std::size_t i = 0; i < series.n.size(); ++i) by_n[series.n[i]].push_back(series.rate[i]);
  ThroughputCurve c;
  for (const auto& [n, rates] : by_n) {
    const auto ms = mean_std(rates);
    c.entries.push_back({n, ms.mean, ms.stddev, rates.size()});
  }
  return c;
}

ThroughputCurve trim_curve(const ThroughputCurve& curve, std::size_t min_samples) {
  ThroughputCurve out;
  for (const auto& e : curve.entries) {
    if (e.samples < min_samples) {
      if (out.entries.empty()) continue;
      break;
    }
    if (!out.entries.empty() && e.n != out.entries.back().n + 1) break;
    out.entries.push_back(e);
  }
  return out;
}

int detect_saturation(const ThroughputCurve& curve, double slope_threshold, int window) {
  const auto& e = curve.entries;
  if (window < 1) throw Error("detect_saturation: window must be positive");
  for (std::size_t i = 1; i < e.size(); ++i)
    if (e[i].n != e[i - 1].n + 1) throw Error("detect_saturation: curve is not contiguous in N");
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i + w < e.size(); ++i) {
    const double slope = (e[i + w].mean_rate - e[i].mean_rate) / window;
    if (slope < slope_threshold) return e[i].n;
  }
  throw Error("no saturation in range");
}

CapacitySample capacity_sample(const NTSeries& series, int n_lo, int n_hi) {
  std::vector<double> rates;
  std::vector<double> counts;
  for (std::size_t i = 0; i < series.n.size(); ++i) {
    if (series.n[i] < n_lo || series.n[i] > n_hi) continue;
    rates.push_back(series.rate[i]);
    const auto k = static_cast<std::size_t>(std::llround(series.rate[i] * series.window));
    if (counts.size() <= k) counts.resize(k + 1, 0.0);
    counts[k] += 1.0;
  }
  CapacitySample c;
  const auto ms = mean_std(rates);
  c.mean_rate = ms.mean;
  c.std_rate = ms.stddev;
  c.samples = rates.size();
  for (auto& x : counts) x /= static_cast<double>(rates.size());
  c.window_counts = std::move(counts);
  return c;
}

std::optional<TakeoffParams> solve_probabilities(double c1, double c2, double c3, double mu,
                                                 double sigma, int window) {
  const double a11 = c1 - c3, a12 = c2 - c3, b1 = mu - c3;
  const double a21 = c1 * c1 - c3 * c3, a22 = c2 * c2 - c3 * c3;
  const double b2 = window * sigma * sigma + mu * mu - c3 * c3;
  const double det = a11 * a22 - a12 * a21;
  if (std::abs(det) < 1e-12) return std::nullopt;
  double p1 = (b1 * a22 - a12 * b2) / det;
  double p2 = (a11 * b2 - a21 * b1) / det;
  constexpr double eps = 1e-12;
  if (p1 < -eps || p2 < -eps || p1 + p2 > 1.0 + eps) return std::nullopt;
  p1 = std::clamp(p1, 0.0, 1.0);
  p2 = std::clamp(p2, 0.0, 1.0 - p1);
  return TakeoffParams{c1, c2, c3, p1, p2};
}

namespace {

// Rates as integer multiples of the lattice step.
struct Lattice {
  long states;
  long u1, u2, u3;
};

long lattice_units(double x, double step) {
  const double u = x / step;
  const long r = std::lround(u);
  if (std::abs(u - r) > 1e-6) throw Error("rate is not a multiple of the lattice step");
  return r;
}

// Window-count distribution for lattice rates with a precomputed table of
// log multinomial coefficients.
void window_counts(const Lattice& lat, const TakeoffParams& p, int window,
                   const std::vector<double>& log_fact, std::vector<double>& out) {
  const long max_count = (window * std::max({lat.u1, lat.u2, lat.u3}) + lat.states) / lat.states + 1;
  out.assign(static_cast<std::size_t>(max_count + 1), 0.0);
  std::vector<double> pw1(window + 1), pw2(window + 1), pw3(window + 1);
  pw1[0] = pw2[0] = pw3[0] = 1.0;
  const double p3 = std::max(0.0, p.p3());
  for (int k = 1; k <= window; ++k) {
    pw1[k] = pw1[k - 1] * p.p1;
    pw2[k] = pw2[k - 1] * p.p2;
    pw3[k] = pw3[k - 1] * p3;
  }
  for (int n1 = 0; n1 <= window; ++n1) {
    if (pw1[n1] == 0.0) continue;
    for (int n2 = 0; n1 + n2 <= window; ++n2) {
      const int n3 = window - n1 - n2;
      const double w = pw1[n1] * pw2[n2] * pw3[n3];
      if (w == 0.0) continue;
      const double prob =
          std::exp(log_fact[window] - log_fact[n1] - log_fact[n2] - log_fact[n3]) * w;
      const long sum = n1 * lat.u1 + n2 * lat.u2 + n3 * lat.u3;
      const long q = sum / lat.states;
      const long r = sum % lat.states;
      out[static_cast<std::size_t>(q)] += prob * static_cast<double>(lat.states - r) / lat.states;
      if (r > 0) out[static_cast<std::size_t>(q + 1)] += prob * static_cast<double>(r) / lat.states;
    }
  }
}

std::vector<double> log_factorials(int n) {
  std::vector<double> lf(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
  return lf;
}

struct Candidate {
  long long key = 0;  // quantised distance
  int i1 = 0, i2 = 0, i3 = 0;
  TakeoffFit fit;
  bool valid = false;

  [[nodiscard]] bool better_than(const Candidate& o) const {
    if (!o.valid) return valid;
    if (!valid) return false;
    return std::tie(key, i1, i2, i3) < std::tie(o.key, o.i1, o.i2, o.i3);
  }
};

void check_fit_inputs(double mu, double sigma, const TakeoffFitOptions& o) {
  if (!(mu > 0) || sigma < 0 || !(o.step > 0) || o.c_max < o.step || o.window < 1)
    throw Error("fit_takeoff_params: invalid targets or grid");
}

// Evaluates every (c2, c3) for one c1 index.
Candidate scan_slice(int i1, int grid, double mu, double sigma, std::span<const double> empirical,
                     const TakeoffFitOptions& o, const std::vector<double>& log_fact,
                     std::size_t& feasible) {
  const long states = lattice_units(1.0, o.step);
  Candidate best;
  std::vector<double> model;
  for (int i2 = 1; i2 <= grid; ++i2) {
    for (int i3 = 1; i3 <= grid; ++i3) {
      const auto p = solve_probabilities(i1 * o.step, i2 * o.step, i3 * o.step, mu, sigma, o.window);
      if (!p) continue;
      ++feasible;
      window_counts({states, i1, i2, i3}, *p, o.window, log_fact, model);
      Candidate c;
      c.fit.params = *p;
      c.fit.distance = total_variation(model, empirical);
      c.key = std::llround(c.fit.distance * 1e12);
      c.i1 = i1;
      c.i2 = i2;
      c.i3 = i3;
      c.valid = true;
      if (c.better_than(best)) best = c;
    }
  }
  return best;
}

TakeoffFit finish(const Candidate& best, std::size_t feasible) {
  if (!best.valid) throw Error("fit_takeoff_params: no feasible (p1, p2) anywhere on the grid");
  TakeoffFit fit = best.fit;
  fit.feasible = feasible;
  return fit;
}

}  // namespace

std::vector<double> window_count_distribution(const TakeoffParams& p, double step, int window) {
  p.validate();
  const Lattice lat{lattice_units(1.0, step), lattice_units(p.c1, step), lattice_units(p.c2, step),
                    lattice_units(p.c3, step)};
  std::vector<double> out;
  window_counts(lat, p, window, log_factorials(window), out);
  while (out.size() > 1 && out.back() == 0.0) out.pop_back();
  return out;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    d += std::abs(x - y);
  }
  return 0.5 * d;
}

TakeoffFit fit_takeoff_params_serial(double mu, double sigma, std::span<const double> empirical,
                                     const TakeoffFitOptions& options) {
  check_fit_inputs(mu, sigma, options);
  const int grid = static_cast<int>(std::floor(options.c_max / options.step + 1e-9));
  const auto log_fact = log_factorials(options.window);
  Candidate best;
  std::size_t feasible = 0;
  for (int i1 = 1; i1 <= grid; ++i1) {
    const auto c = scan_slice(i1, grid, mu, sigma, empirical, options, log_fact, feasible);
    if (c.better_than(best)) best = c;
  }
  return finish(best, feasible);
}

TakeoffFit fit_takeoff_params(double mu, double sigma, std::span<const double> empirical,
                              const TakeoffFitOptions& options) {
  check_fit_inputs(mu, sigma, options);
  const int grid = static_cast<int>(std::floor(options.c_max / options.step + 1e-9));
  const auto log_fact = log_factorials(options.window);
  std::vector<Candidate> slices(static_cast<std::size_t>(grid) + 1);
  std::vector<std::size_t> counts(static_cast<std::size_t>(grid) + 1, 0);
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (int i1 = 1; i1 <= grid; ++i1) {
    slices[static_cast<std::size_t>(i1)] =
        scan_slice(i1, grid, mu, sigma, empirical, options, log_fact, counts[static_cast<std::size_t>(i1)]);
  }
  Candidate best;
  for (const auto& c : slices)
    if (c.better_than(best)) best = c;
  return finish(best, std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
}

// Taxi-out -------------------------------------------------------------------

TaxiFit fit_taxi_lognormal(std::span<const double> minutes, std::string terminal) {
  if (minutes.size() < kMinTaxiSamples)
    throw Error("fit_taxi_lognormal: need at least " + std::to_string(kMinTaxiSamples) +
                " samples, got " + std::to_string(minutes.size()));
  std::vector<double> logs;
  logs.reserve(minutes.size());
  for (double m : minutes) {
    if (!(m > 0)) throw Error("fit_taxi_lognormal: non-positive taxi time");
    logs.push_back(std::log(m));
  }
  const auto ms = mean_std(logs);
  return {std::move(terminal), ms.mean, std::max(ms.stddev, kSigmaLogFloor), minutes.size()};
}

std::vector<int> pushback_congestion(std::span<const SurfaceEvent> events) {
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return events[a].pushback < events[b].pushback;
  });
  std::vector<int> npb(events.size(), 0);
  std::priority_queue<Minute, std::vector<Minute>, std::greater<>> active;
  for (auto idx : order) {
    const auto& e = events[idx];
    while (!active.empty() && active.top() <= e.pushback) active.pop();
    npb[idx] = static_cast<int>(active.size());
    active.push(e.takeoff);
  }
  return npb;
}

std::vector<TaxiFit> fit_taxi_by_terminal(std::span<const SurfaceEvent> events, int threshold) {
  const auto npb = pushback_congestion(events);
  std::map<std::string, std::vector<double>> samples;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (npb[i] >= threshold) continue;
    const auto taxi = static_cast<double>(events[i].takeoff - events[i].pushback);
    if (taxi > 0) samples[events[i].terminal].push_back(taxi);
  }
  std::vector<TaxiFit> fits;
  for (const auto& [terminal, v] : samples)
    if (v.size() >= kMinTaxiSamples) fits.push_back(fit_taxi_lognormal(v, terminal));
  return fits;
}

CalibrationReport calibrate(std::vector<SurfaceEvent> events, const CalibrationOptions& o) {
  std::stable_sort(events.begin(), events.end(), [](const SurfaceEvent& a, const SurfaceEvent& b) {
    return std::tie(a.pushback, a.flight_id) < std::tie(b.pushback, b.flight_id);
  });
  CalibrationReport rep;
  rep.series = build_nt(events, o.fit.window);
  rep.curve = build_throughput_curve(rep.series);
  rep.correlation = correlation_scan(rep.series.n, rep.series.rate, o.min_offset, o.max_offset);
  rep.n_star = detect_saturation(trim_curve(rep.curve, o.min_curve_samples), o.slope_threshold,
                                 o.slope_window);
  rep.capacity = capacity_sample(rep.series, rep.n_star, rep.n_star + o.capacity_span);
  if (rep.capacity.samples == 0) throw Error("calibrate: no samples in the capacity window");
  rep.takeoff = fit_takeoff_params(rep.capacity.mean_rate, rep.capacity.std_rate,
                                   rep.capacity.window_counts, o.fit);
  rep.taxi = fit_taxi_by_terminal(events, o.npb_threshold);

  const auto npb = pushback_congestion(events);
  std::map<int, std::vector<double>> by_npb;
  for (std::size_t i = 0; i < events.size(); ++i)
    by_npb[npb[i]].push_back(static_cast<double>(events[i].takeoff - events[i].pushback));
  for (const auto& [n, v] : by_npb) {
    const auto ms = mean_std(v);
    rep.taxi_by_npb.push_back({n, ms.mean, ms.stddev, v.size()});
  }
  return rep;
}

}  // namespace gatehold
