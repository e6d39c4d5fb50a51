#pragma once

// Synthetic transaction networks with a controllable weekly activity cycle.
// The daily transaction count follows a deterministic sinusoid (plus an
// optional linear drift), so growth labels are a pure function of the cycle
// position while the graph structure itself is random. That gives training
// corpora where the label is learnable from activity dynamics and where the
// persistence baseline can be made exactly anti-correlated (period == two
// label windows).

#include <cstdint>
#include <string>
#include <vector>

#include "mint/dtdg.hpp"

namespace mint {

struct SynthRegime {
  std::string name = "synth";
  int days = 140;
  double base_intensity = 40.0;  // mean transactions per day
  double amplitude = 0.6;        // relative cycle amplitude, in [0, 1)
  int period = 14;               // cycle length in days
  int phase = 0;                 // cycle offset in days
  double daily_drift = 0.0;      // adds drift * day to the intensity
  int node_pool = 60;            // recurring core nodes
  double churn = 0.25;           // fraction of edges between brand-new nodes
  std::uint64_t seed = 1;
};

// Deterministic in all fields. Node ids are prefixed with the regime name so
// different synthetic networks have disjoint node sets.
std::vector<EdgeEvent> synthetic_events(const SynthRegime& r);

TemporalGraph generate_synthetic(const SynthRegime& r);

// A family of related regimes (same period, varied intensity/amplitude/phase/
// churn/pool) for multi-network experiments: names pack00, pack01, ...
std::vector<SynthRegime> synthetic_pack(int count, std::uint64_t seed);

}  // namespace mint
