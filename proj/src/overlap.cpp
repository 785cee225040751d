#include "gatehold/overlap.hpp"
#include "gatehold/error.hpp"
#include "gatehold/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace gatehold {

namespace {

void normalise(std::vector<double>& v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (!(total > 0)) throw Error("distribution has no mass");
  for (auto& x : v) x /= total;
}

}  // namespace

EmpiricalDistribution EmpiricalDistribution::from_samples(std::span<const double> samples, int lo,
                                                          int hi) {
  if (samples.empty()) throw Error("empirical distribution from no samples");
  if (hi < lo) throw Error("empirical distribution with empty support");
  EmpiricalDistribution d;
  d.lo = lo;
  d.mass.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (double s : samples) {
    const auto k = std::clamp(static_cast<int>(std::lround(s)), lo, hi);
    d.mass[static_cast<std::size_t>(k - lo)] += 1.0;
  }
  normalise(d.mass);
  return d;
}

EmpiricalDistribution EmpiricalDistribution::point_mass(int value) {
  return {value, {1.0}};
}

EmpiricalDistribution EmpiricalDistribution::from_weights(int lo, std::vector<double> weights) {
  for (double w : weights)
    if (w < 0) throw Error("negative histogram weight");
  normalise(weights);
  return {lo, std::move(weights)};
}

DelayDistributions delays_from_schedule(const Schedule& s, int lo, int hi) {
  std::vector<double> dep, arr;
  for (const auto& f : s.flights) {
    if (f.sched_dep && f.act_dep) dep.push_back(static_cast<double>(*f.act_dep - *f.sched_dep));
    if (f.sched_arr && f.act_arr) arr.push_back(static_cast<double>(*f.act_arr - *f.sched_arr));
  }
  if (dep.empty() || arr.empty())
    throw Error("schedule has no actual times to extract delays from");
  return {EmpiricalDistribution::from_samples(dep, lo, hi),
          EmpiricalDistribution::from_samples(arr, lo, hi)};
}

EmpiricalDistribution delay_difference(const DelayDistributions& d) {
  const auto& dep = d.departure;
  const auto& arr = d.arrival;
  EmpiricalDistribution diff;
  diff.lo = dep.lo - arr.hi();
  diff.mass.assign(dep.mass.size() + arr.mass.size() - 1, 0.0);
  // x = dep - arr; index = (dep.lo + i) - (arr.lo + j) - diff.lo
  const std::size_t na = arr.mass.size();
  for (std::size_t i = 0; i < dep.mass.size(); ++i) {
    if (dep.mass[i] == 0.0) continue;
    for (std::size_t j = 0; j < na; ++j)
      diff.mass[i + (na - 1 - j)] += dep.mass[i] * arr.mass[j];
  }
  return diff;
}

OverlapValue overlap_at(const EmpiricalDistribution& difference, int sep) {
  OverlapValue v;
  for (std::size_t k = 0; k < difference.mass.size(); ++k) {
    const int overlap = difference.lo + static_cast<int>(k) - sep;
    if (overlap <= 0) continue;
    v.probability += difference.mass[k];
    v.unconditional += difference.mass[k] * overlap;
  }
  v.conditional = v.probability > 0 ? v.unconditional / v.probability : 0.0;
  return v;
}

double expected_overlap(const DelayDistributions& d, int sep) {
  if (sep < 0) throw Error("expected_overlap: negative separation");
  return overlap_at(delay_difference(d), sep).unconditional;
}

std::vector<OverlapRow> overlap_table_serial(const DelayDistributions& d, int max_sep) {
  const auto diff = delay_difference(d);
  std::vector<OverlapRow> rows(static_cast<std::size_t>(max_sep) + 1);
  for (int s = 0; s <= max_sep; ++s) rows[static_cast<std::size_t>(s)] = {s, overlap_at(diff, s)};
  return rows;
}

std::vector<OverlapRow> overlap_table(const DelayDistributions& d, int max_sep) {
  const auto diff = delay_difference(d);
  std::vector<OverlapRow> rows(static_cast<std::size_t>(max_sep) + 1);
#pragma omp parallel for num_threads(worker_threads())
  for (int s = 0; s <= max_sep; ++s) rows[static_cast<std::size_t>(s)] = {s, overlap_at(diff, s)};
  return rows;
}

ExponentialFit fit_exponential(std::span<const std::pair<double, double>> table) {
  std::vector<double> xs, ys;
  std::set<double> distinct;
  for (const auto& [x, y] : table) {
    if (!(y > 0)) continue;
    xs.push_back(x);
    ys.push_back(std::log(y));
    distinct.insert(x);
  }
  if (distinct.size() < 3) throw Error("degenerate table");
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  return {std::exp(intercept), std::exp(slope), std::sqrt(ss / n), xs.size()};
}

double DisturbanceModel::operator()(double sep) const { return A * std::pow(B, sep); }

DisturbanceModel fit_disturbance(const DelayDistributions& d, int max_sep) {
  DisturbanceModel m;
  m.table = overlap_table(d, max_sep);
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : m.table) pts.emplace_back(r.sep, r.value.unconditional);
  const auto fit = fit_exponential(pts);
  m.A = fit.A;
  m.B = fit.B;
  return m;
}

}  // namespace gatehold
