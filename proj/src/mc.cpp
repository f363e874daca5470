#include "lpwa/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "lpwa/interference.hpp"
#include "lpwa/reliability.hpp"

namespace lpwa {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LPWA_PLAN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

double default_field_radius(const Scenario& sc) {
  return std::sqrt(2.0 * sc.cost.area_m2);
}

QuadratureSpec default_quadrature(const Scenario& sc) {
  QuadratureSpec spec;
  spec.truncation_radius_m = default_field_radius(sc);
  return spec;
}

double Deployment::torus_distance(const Point2D& a, const Point2D& b) const {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  if (dx > 0.5 * side_m) dx = side_m - dx;
  if (dy > 0.5 * side_m) dy = side_m - dy;
  return std::hypot(dx, dy);
}

namespace {

Point2D sample_offset(const ScatteringDensity& s, Rng& rng) {
  if (s.kind == ScatteringDensity::Kind::Normal)
    return {s.sigma_m * rng.normal(), s.sigma_m * rng.normal()};
  const double r = s.radius_m * std::sqrt(rng.uniform());
  const double th = rng.uniform(0.0, 2.0 * M_PI);
  return {r * std::cos(th), r * std::sin(th)};
}

Point2D sample_in_disc(double radius, Rng& rng) {
  const double r = radius * std::sqrt(rng.uniform());
  const double th = rng.uniform(0.0, 2.0 * M_PI);
  return {r * std::cos(th), r * std::sin(th)};
}

double wrap(double v, double side) {
  v = std::fmod(v + 0.5 * side, side);
  if (v < 0.0) v += side;
  return v - 0.5 * side;
}

// Ordered-block parallel map: block b uses substream (seed, tag, b) and
// results are combined in block order, so worker count never changes
// the outcome.
template <typename Accum, typename BlockFn>
Accum parallel_accumulate(std::uint64_t seed, std::uint64_t tag, int total,
                          int block_size, int workers, BlockFn block_fn) {
  const int blocks = (total + block_size - 1) / block_size;
  std::vector<Accum> partial(blocks);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= blocks) return;
      const int begin = b * block_size;
      const int end = std::min(total, begin + block_size);
      Rng rng(seed, (tag << 32) ^ static_cast<std::uint64_t>(b));
      partial[b] = block_fn(rng, begin, end);
    }
  };
  const int nw = std::min(resolve_workers(workers), blocks);
  std::vector<std::thread> pool;
  for (int i = 1; i < nw; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  Accum total_acc{};
  for (const auto& p : partial) total_acc += p;
  return total_acc;
}

struct BernoulliAcc {
  std::uint64_t success = 0;
  std::uint64_t n = 0;
  BernoulliAcc& operator+=(const BernoulliAcc& o) {
    success += o.success;
    n += o.n;
    return *this;
  }
};

BinomialEstimate to_estimate(const BernoulliAcc& a) {
  const double p = a.n ? static_cast<double>(a.success) / a.n : 0.0;
  const double se = a.n ? std::sqrt(std::max(p * (1.0 - p), 0.0) / a.n) : 0.0;
  return {p, se, a.n};
}

// One active interferer in a snapshot.
struct ActiveTx {
  Point2D pos;
  double power_w = 0.0;
  double code_weight = 1.0;
  int type_id = 0;
};

// Sample the activity-thinned interferer field of the analytic model:
// outer clusters as a PPP of parents with zero-truncated Poisson active
// members per code bucket, plus the probe's own cluster with its parent
// scattered around the receiver.
void sample_active_field(const Scenario& sc, const IoTTypeSpec& probe,
                         double field_radius, Rng& rng,
                         std::vector<ActiveTx>& out) {
  out.clear();
  const double area = M_PI * field_radius * field_radius;
  for (const auto& k : sc.types) {
    const ActivityFactors act = activity_factors(k, sc.network);
    const double buckets[2] = {act.same_code, act.cross_code};
    for (int j = 0; j < 2; ++j) {
      const double q = code_weight(sc.network, j);
      if (buckets[j] <= 0.0 || q <= 0.0 || k.parent_density <= 0.0) continue;
      const double lam_active = k.parent_density * (1.0 - std::exp(-buckets[j]));
      const std::uint64_t parents = rng.poisson(lam_active * area);
      for (std::uint64_t p = 0; p < parents; ++p) {
        const Point2D parent = sample_in_disc(field_radius, rng);
        const std::uint64_t members = rng.poisson_positive(buckets[j]);
        for (std::uint64_t m = 0; m < members; ++m) {
          const Point2D pos = parent + sample_offset(k.scattering, rng);
          out.push_back({pos, k.tx_power_w, q, k.id});
        }
      }
    }
  }
  // Own cluster: one parent shared by both code buckets.
  const ActivityFactors own = activity_factors(probe, sc.network);
  const double own_buckets[2] = {own.same_code, own.cross_code};
  const Point2D own_parent = sample_offset(probe.scattering, rng);
  for (int j = 0; j < 2; ++j) {
    const double q = code_weight(sc.network, j);
    if (own_buckets[j] <= 0.0 || q <= 0.0) continue;
    const std::uint64_t members = rng.poisson(own_buckets[j]);
    for (std::uint64_t m = 0; m < members; ++m) {
      const Point2D pos = own_parent + sample_offset(probe.scattering, rng);
      out.push_back({pos, probe.tx_power_w, q, probe.id});
    }
  }
}

double interference_at(const std::vector<ActiveTx>& field, const Point2D& ap,
                       const Scenario& sc, Rng& rng) {
  const auto& ch = sc.network.channel;
  double total = 0.0;
  for (const auto& tx : field) {
    const double d = (tx.pos - ap).norm();
    total += tx.code_weight * tx.power_w * rng.fading(ch) *
             pathloss_clamped(ch.pathloss, d);
  }
  return total;
}

}  // namespace

Deployment sample_deployment(const Scenario& sc, Rng& rng) {
  Deployment d;
  d.side_m = std::sqrt(sc.cost.area_m2);
  const double area = sc.cost.area_m2;
  const double half = 0.5 * d.side_m;
  for (const auto& t : sc.types) {
    Deployment::TypePoints tp;
    tp.type_id = t.id;
    const std::uint64_t parents = rng.poisson(t.parent_density * area);
    tp.parents.reserve(parents);
    for (std::uint64_t p = 0; p < parents; ++p) {
      tp.parents.push_back({rng.uniform(-half, half), rng.uniform(-half, half)});
      const std::uint64_t daughters = rng.poisson(t.daughters_per_parent);
      for (std::uint64_t q = 0; q < daughters; ++q) {
        Point2D pos = tp.parents.back() + sample_offset(t.scattering, rng);
        pos.x = wrap(pos.x, d.side_m);
        pos.y = wrap(pos.y, d.side_m);
        tp.devices.push_back(pos);
        tp.device_parent.push_back(static_cast<std::uint32_t>(p));
      }
    }
    d.types.push_back(std::move(tp));
  }
  const std::uint64_t aps = rng.poisson(sc.network.ap_density * area);
  for (std::uint64_t a = 0; a < aps; ++a)
    d.aps.push_back({rng.uniform(-half, half), rng.uniform(-half, half)});
  return d;
}

std::vector<double> nearest_ap_distances(const Deployment& d, const Point2D& p,
                                         int ell_max) {
  std::vector<double> dist;
  dist.reserve(d.aps.size());
  for (const auto& ap : d.aps) dist.push_back(d.torus_distance(p, ap));
  const std::size_t keep = std::min<std::size_t>(ell_max, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + keep, dist.end());
  dist.resize(keep);
  return dist;
}

BinomialEstimate estimate_ps_at(const Scenario& sc, const IoTTypeSpec& probe,
                                double z_m, int episodes, std::uint64_t seed,
                                double field_radius_m, int workers) {
  const auto& ch = sc.network.channel;
  const double noise = sc.noise_power_w(probe);
  const double gz = pathloss_clamped(ch.pathloss, z_m);
  const auto acc = parallel_accumulate<BernoulliAcc>(
      seed, 0x5A01, episodes, 4096, workers,
      [&](Rng& rng, int begin, int end) {
        BernoulliAcc a;
        std::vector<ActiveTx> field;
        for (int e = begin; e < end; ++e) {
          sample_active_field(sc, probe, field_radius_m, rng, field);
          const double interf = interference_at(field, {0.0, 0.0}, sc, rng);
          const double signal = probe.tx_power_w * rng.fading(ch) * gz;
          a.success += signal >= ch.sinr_threshold * (noise + interf) ? 1 : 0;
          ++a.n;
        }
        return a;
      });
  return to_estimate(acc);
}

BinomialEstimate estimate_ps_spatial(const Scenario& sc, const IoTTypeSpec& probe,
                                     int episodes, std::uint64_t seed,
                                     double field_radius_m, int workers) {
  const auto& ch = sc.network.channel;
  const double noise = sc.noise_power_w(probe);
  const double lap = sc.network.ap_density * M_PI;
  const int ell_max = sc.network.ell_max;
  const auto acc = parallel_accumulate<BernoulliAcc>(
      seed, 0x5A02, episodes, 4096, workers,
      [&](Rng& rng, int begin, int end) {
        BernoulliAcc a;
        std::vector<ActiveTx> field;
        std::vector<double> d2(ell_max);
        for (int e = begin; e < end; ++e) {
          // Joint nearest-AP distances: successive exponential area gaps.
          double acc_area = 0.0;
          for (int l = 0; l < ell_max; ++l) {
            acc_area += rng.exponential();
            d2[l] = acc_area / lap;
          }
          // Probe at distance d1 from the nearest AP at the origin; the
          // field and the own cluster follow the per-distance model.
          sample_active_field(sc, probe, field_radius_m, rng, field);
          bool ok = false;
          for (int l = 0; l < ell_max && !ok; ++l) {
            const double z = std::sqrt(d2[l]);
            const Point2D ap = l == 0 ? Point2D{0.0, 0.0}
                                      : [&] {
                                          const double th =
                                              rng.uniform(0.0, 2.0 * M_PI);
                                          return Point2D{z * std::cos(th),
                                                         z * std::sin(th)};
                                        }();
            const double interf = interference_at(field, ap, sc, rng);
            const double gz = pathloss_clamped(ch.pathloss, z);
            const double signal = probe.tx_power_w * rng.fading(ch) * gz;
            ok = signal >= ch.sinr_threshold * (noise + interf);
          }
          a.success += ok ? 1 : 0;
          ++a.n;
        }
        return a;
      });
  return to_estimate(acc);
}

namespace {

struct LaplaceAcc {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  std::uint64_t n = 0;
  LaplaceAcc& operator+=(const LaplaceAcc& o) {
    if (sum.empty()) {
      sum = o.sum;
      sum_sq = o.sum_sq;
      n = o.n;
      return *this;
    }
    if (!o.sum.empty()) {
      for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] += o.sum[i];
        sum_sq[i] += o.sum_sq[i];
      }
      n += o.n;
    }
    return *this;
  }
};

}  // namespace

std::vector<LaplaceEstimate> estimate_laplace(const Scenario& sc,
                                              const IoTTypeSpec& probe,
                                              const std::vector<double>& s_grid,
                                              int episodes, std::uint64_t seed,
                                              double field_radius_m, int workers) {
  const auto acc = parallel_accumulate<LaplaceAcc>(
      seed, 0x5A03, episodes, 4096, workers,
      [&](Rng& rng, int begin, int end) {
        LaplaceAcc a;
        a.sum.assign(s_grid.size(), 0.0);
        a.sum_sq.assign(s_grid.size(), 0.0);
        std::vector<ActiveTx> field;
        for (int e = begin; e < end; ++e) {
          sample_active_field(sc, probe, field_radius_m, rng, field);
          const double interf = interference_at(field, {0.0, 0.0}, sc, rng);
          for (std::size_t i = 0; i < s_grid.size(); ++i) {
            const double v = std::exp(-s_grid[i] * interf);
            a.sum[i] += v;
            a.sum_sq[i] += v * v;
          }
          ++a.n;
        }
        return a;
      });
  std::vector<LaplaceEstimate> out;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double mean = acc.sum[i] / acc.n;
    const double var =
        std::max(acc.sum_sq[i] / acc.n - mean * mean, 0.0) / (acc.n - 1.0);
    out.push_back({s_grid[i], mean, std::sqrt(var)});
  }
  return out;
}

namespace {

struct ReplayAcc {
  std::uint64_t replica_success = 0;
  std::uint64_t replicas = 0;
  std::uint64_t outages = 0;
  std::uint64_t episodes = 0;
  double attempts_verbatim = 0.0;
  double attempts_verbatim_sq = 0.0;
  double attempts_capped = 0.0;
  double attempts_capped_sq = 0.0;
  ReplayAcc& operator+=(const ReplayAcc& o) {
    replica_success += o.replica_success;
    replicas += o.replicas;
    outages += o.outages;
    episodes += o.episodes;
    attempts_verbatim += o.attempts_verbatim;
    attempts_verbatim_sq += o.attempts_verbatim_sq;
    attempts_capped += o.attempts_capped;
    attempts_capped_sq += o.attempts_capped_sq;
    return *this;
  }
};

// Overlapping-transmission field for one probe replica under the
// asynchronous time-frequency usage model.
struct ReplayContext {
  const Scenario& sc;
  const IoTTypeSpec& probe;
  double field_radius;
  CampaignSpec::Overlap overlap;
};

double replica_interference(const ReplayContext& ctx, double z_m, Rng& rng) {
  const auto& sc = ctx.sc;
  const auto& ch = sc.network.channel;
  const double w_sys = sc.network.system_bandwidth_hz;
  const double w_probe = ctx.probe.signal_bandwidth_hz;
  const double tau_probe = ctx.probe.packet_time_s;
  const double probe_f0 = rng.uniform() * (w_sys - w_probe);
  const double area = M_PI * ctx.field_radius * ctx.field_radius;
  const double inv_codes = 1.0 / sc.network.code_count;
  double total = 0.0;

  auto add_tx = [&](const IoTTypeSpec& k, const Point2D& pos) {
    // Time overlap: interferer replica start uniform in the window where
    // any overlap with the probe replica is possible.
    const double start = rng.uniform(-k.packet_time_s, tau_probe);
    const double t_ov = std::min(start + k.packet_time_s, tau_probe) -
                        std::max(start, 0.0);
    if (t_ov <= 0.0) return;
    const double f0 = rng.uniform() * (w_sys - k.signal_bandwidth_hz);
    const double f_ov = std::min(f0 + k.signal_bandwidth_hz, probe_f0 + w_probe) -
                        std::max(f0, probe_f0);
    if (f_ov <= 0.0) return;
    double q;
    if (k.in_phi && ctx.probe.in_phi)
      q = rng.uniform() < inv_codes ? 1.0 : sc.network.rejection_factor;
    else
      q = sc.network.rejection_factor;
    if (q <= 0.0) return;
    double weight = 1.0;
    if (ctx.overlap == CampaignSpec::Overlap::FractionalOverlap)
      weight = (t_ov / tau_probe) * (f_ov / w_probe);
    const double d = pos.norm();
    total += weight * q * k.tx_power_w * rng.fading(ch) *
             pathloss_clamped(ch.pathloss, d);
  };

  for (const auto& k : sc.types) {
    if (k.parent_density <= 0.0) continue;
    // Replicas starting inside the overlap window, per cluster.
    const double mu = k.daughters_per_parent * k.replicas *
                      (tau_probe + k.packet_time_s) / k.reporting_period_s;
    const double lam_active = k.parent_density * (1.0 - std::exp(-mu));
    const std::uint64_t parents = rng.poisson(lam_active * area);
    for (std::uint64_t p = 0; p < parents; ++p) {
      const Point2D parent = sample_in_disc(ctx.field_radius, rng);
      const std::uint64_t txs = rng.poisson_positive(mu);
      for (std::uint64_t m = 0; m < txs; ++m)
        add_tx(k, parent + sample_offset(k.scattering, rng));
    }
  }
  // Siblings of the probe's own cluster (physical geometry: the parent
  // sits next to the device).
  const auto& t = ctx.probe;
  const double mu_own = t.daughters_per_parent * t.replicas *
                        (tau_probe + t.packet_time_s) / t.reporting_period_s;
  if (mu_own > 0.0) {
    const Point2D device{z_m, 0.0};
    const Point2D parent = device + sample_offset(t.scattering, rng);
    const std::uint64_t txs = rng.poisson(mu_own);
    for (std::uint64_t m = 0; m < txs; ++m)
      add_tx(t, parent + sample_offset(t.scattering, rng));
  }
  return total;
}

}  // namespace

ReplayStats replay_protocol(const Scenario& sc, const IoTTypeSpec& probe,
                            double z_m, int episodes, std::uint64_t seed,
                            double field_radius_m, CampaignSpec::Overlap overlap,
                            int workers) {
  const auto& ch = sc.network.channel;
  const double noise = sc.noise_power_w(probe);
  const double gz = pathloss_clamped(ch.pathloss, z_m);
  const ReplayContext ctx{sc, probe, field_radius_m, overlap};
  const auto acc = parallel_accumulate<ReplayAcc>(
      seed, 0x5A04, episodes, 1024, workers,
      [&](Rng& rng, int begin, int end) {
        ReplayAcc a;
        for (int e = begin; e < end; ++e) {
          int attempts_used = 0;
          bool delivered = false;
          for (int attempt = 1; attempt <= probe.retx_bound && !delivered;
               ++attempt) {
            attempts_used = attempt;
            for (int rep = 0; rep < probe.replicas; ++rep) {
              const double interf = replica_interference(ctx, z_m, rng);
              const double signal = probe.tx_power_w * rng.fading(ch) * gz;
              const bool ok = signal >= ch.sinr_threshold * (noise + interf);
              a.replica_success += ok ? 1 : 0;
              ++a.replicas;
              delivered = delivered || ok;
            }
          }
          ++a.episodes;
          if (!delivered) ++a.outages;
          const double verbatim = delivered ? attempts_used : 0.0;
          a.attempts_verbatim += verbatim;
          a.attempts_verbatim_sq += verbatim * verbatim;
          a.attempts_capped += attempts_used;
          a.attempts_capped_sq += attempts_used * attempts_used;
        }
        return a;
      });

  ReplayStats st;
  st.replica_success = to_estimate({acc.replica_success, acc.replicas});
  st.episode_outage = to_estimate({acc.outages, acc.episodes});
  const double n = static_cast<double>(acc.episodes);
  const double mv = acc.attempts_verbatim / n;
  const double vv = std::max(acc.attempts_verbatim_sq / n - mv * mv, 0.0);
  st.attempts_verbatim = {mv, std::sqrt(vv / n), acc.episodes};
  const double mc = acc.attempts_capped / n;
  const double vc = std::max(acc.attempts_capped_sq / n - mc * mc, 0.0);
  st.attempts_capped = {mc, std::sqrt(vc / n), acc.episodes};
  return st;
}

LifetimePopulation lifetime_population(const Scenario& sc, const IoTTypeSpec& t,
                                       std::uint64_t seed,
                                       const QuadratureSpec& spec) {
  Rng rng(seed, 0x5A05);
  const Deployment dep = sample_deployment(sc, rng);
  LifetimePopulation pop;
  for (const auto& tp : dep.types) {
    if (tp.type_id != t.id) continue;
    pop.lifetimes_s.reserve(tp.devices.size());
    for (const auto& dev : tp.devices) {
      const auto dists = nearest_ap_distances(dep, dev, sc.network.ell_max);
      if (dists.empty()) continue;
      pop.lifetimes_s.push_back(
          device_lifetime(t, dists, sc, SuccessMethod::ClosedApprox, spec)
              .lifetime_s);
    }
  }
  return pop;
}

CampaignResult run_campaign(const Scenario& sc, const CampaignSpec& spec) {
  CampaignResult res;
  res.seed = spec.seed;
  const double radius =
      spec.field_radius_m > 0.0 ? spec.field_radius_m : default_field_radius(sc);
  const QuadratureSpec qspec = default_quadrature(sc);

  for (const auto& t : sc.types) {
    if (!t.in_phi) continue;
    CampaignResult::TypeResult tr;
    tr.type_id = t.id;
    tr.z_bins_m = spec.z_bins_m;
    const std::uint64_t tseed = spec.seed ^ (0x9e3779b97f4a7c15ULL * (t.id + 1));

    for (std::size_t b = 0; b < spec.z_bins_m.size(); ++b)
      tr.ps_by_z.push_back(estimate_ps_at(sc, t, spec.z_bins_m[b],
                                          spec.snapshot_episodes,
                                          tseed + 101 + b, radius, spec.workers));

    tr.ps_spatial = estimate_ps_spatial(sc, t, spec.snapshot_episodes,
                                        tseed + 331, radius, spec.workers);

    tr.probe_distance_m = spec.probe_distance_m > 0.0
                              ? spec.probe_distance_m
                              : cell_edge_distance(sc.network.ap_density);
    const ReplayStats replay =
        replay_protocol(sc, t, tr.probe_distance_m, spec.replay_episodes,
                        tseed + 577, radius, spec.overlap, spec.workers);
    tr.replay_replica_success = replay.replica_success;
    tr.replay_outage = replay.episode_outage;
    tr.attempts_verbatim = replay.attempts_verbatim;
    tr.attempts_capped = replay.attempts_capped;

    if (!spec.laplace_s_grid.empty())
      tr.laplace = estimate_laplace(sc, t, spec.laplace_s_grid,
                                    spec.snapshot_episodes, tseed + 733, radius,
                                    spec.workers);

    tr.lifetimes = lifetime_population(sc, t, tseed + 911, qspec);
    if (!tr.lifetimes.lifetimes_s.empty()) {
      const auto [lo, hi] = std::minmax_element(tr.lifetimes.lifetimes_s.begin(),
                                                tr.lifetimes.lifetimes_s.end());
      tr.sibl_s = *lo;
      tr.libl_s = *hi;
    }
    res.types.push_back(std::move(tr));
  }
  return res;
}

}  // namespace lpwa
