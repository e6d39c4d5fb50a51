#pragma once

// On-disk snapshot store. One directory per network:
//
//   <dir>/manifest.json       counts, day0 epoch, format version
//   <dir>/nodes.csv           node ids, one per line, dense-id order
//   <dir>/days/day_00042.csv  that day's edges, same schema as the input
//                             edge CSV (source,target,timestamp,weight)
//
// Days with no edges have no file; the manifest records the day count.
// Loading a saved store reproduces the TemporalGraph exactly.

#include <string>
#include <vector>

#include "mint/dtdg.hpp"

namespace mint {

inline constexpr int kStoreFormatVersion = 1;

// The manifest records the label params and the split indices derived from
// them, so a store is self-describing about how it will be consumed.
void save_network_store(const TemporalGraph& g, const std::string& dir,
                        const LabelParams& lp = {}, const SplitSpec& sp = {});

TemporalGraph load_network_store(const std::string& dir);

// Subdirectories of root that contain a manifest.json, sorted by name.
std::vector<std::string> list_network_stores(const std::string& root);

}  // namespace mint
