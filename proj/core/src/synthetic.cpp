#include "mint/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace mint {

namespace {

// 2022-04-15T00:00:00Z, a day boundary
constexpr std::int64_t kSynthDay0 = 1649980800;

int daily_count(const SynthRegime& r, int day) {
  double cyc = std::sin(2.0 * std::numbers::pi * (day + r.phase) / r.period);
  double lam = r.base_intensity * (1.0 + r.amplitude * cyc) +
               r.daily_drift * day;
  return std::max(1, static_cast<int>(std::lround(lam)));
}

}  // namespace

std::vector<EdgeEvent> synthetic_events(const SynthRegime& r) {
  check(r.days >= 1 && r.period >= 2 && r.node_pool >= 2,
        "synthetic: days >= 1, period >= 2, node_pool >= 2 required");
  check(r.amplitude >= 0.0 && r.amplitude < 1.0 && r.base_intensity > 0.0,
        "synthetic: need base_intensity > 0 and amplitude in [0, 1)");
  check(r.churn >= 0.0 && r.churn <= 1.0, "synthetic: churn in [0, 1]");

  std::mt19937_64 rng(r.seed);
  // churn edges draw from a larger pool of rarely-repeating "drive-by"
  // nodes, so edge novelty stays high while the node universe stays bounded
  const int fresh_pool = 4 * r.node_pool;
  std::uniform_int_distribution<int> pick_node(0, r.node_pool - 1);
  std::uniform_int_distribution<int> pick_fresh(0, fresh_pool - 1);
  std::uniform_int_distribution<int> pick_sec(0, kSecondsPerDay - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::lognormal_distribution<double> weight_dist(0.0, 0.5);

  std::vector<EdgeEvent> events;
  auto core_id = [&](int i) { return r.name + ":c" + std::to_string(i); };
  auto fresh_id = [&](int i) { return r.name + ":f" + std::to_string(i); };

  for (int day = 0; day < r.days; ++day) {
    int n = daily_count(r, day);
    for (int k = 0; k < n; ++k) {
      EdgeEvent e;
      if (unit(rng) < r.churn) {
        int u = pick_fresh(rng);
        int v = pick_fresh(rng);
        if (v == u) v = (v + 1) % fresh_pool;
        e.src = fresh_id(u);
        e.dst = fresh_id(v);
      } else {
        int u = pick_node(rng);
        int v = pick_node(rng);
        if (v == u) v = (v + 1) % r.node_pool;
        e.src = core_id(u);
        e.dst = core_id(v);
      }
      e.timestamp = kSynthDay0 + static_cast<std::int64_t>(day) *
                                     kSecondsPerDay +
                    pick_sec(rng);
      e.weight = weight_dist(rng);
      events.push_back(std::move(e));
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const EdgeEvent& a, const EdgeEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  return events;
}

TemporalGraph generate_synthetic(const SynthRegime& r) {
  return discretize(synthetic_events(r), r.name);
}

std::vector<SynthRegime> synthetic_pack(int count, std::uint64_t seed) {
  check(count >= 1, "synthetic_pack: count >= 1");
  std::vector<SynthRegime> pack;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> base(30.0, 70.0);
  std::uniform_real_distribution<double> amp(0.55, 0.8);
  std::uniform_int_distribution<int> phase(0, 13);
  std::uniform_real_distribution<double> churn(0.1, 0.35);
  std::uniform_int_distribution<int> pool(40, 90);
  for (int i = 0; i < count; ++i) {
    SynthRegime r;
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "%02d", i);
    r.name = std::string("pack") + suffix;
    r.days = 140;
    r.period = 14;
    r.base_intensity = base(rng);
    r.amplitude = amp(rng);
    r.phase = phase(rng);
    r.churn = churn(rng);
    r.node_pool = pool(rng);
    r.seed = seed + 1000003ULL * static_cast<std::uint64_t>(i + 1);
    pack.push_back(std::move(r));
  }
  return pack;
}

}  // namespace mint
