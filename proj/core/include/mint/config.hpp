#pragma once

// Flat key=value run configuration. Lines are `key = value`, `#` starts a
// comment, blank lines are ignored. Every training hyperparameter has an
// explicit key; keys left out keep the per-mode defaults.

#include <string>
#include <vector>

#include "mint/training.hpp"

namespace mint::cfg {

struct Entry {
  std::string key;
  std::string value;
};

class Config {
 public:
  explicit Config(std::vector<Entry> entries);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // comma-separated, whitespace-trimmed, empty items rejected
  std::vector<std::string> get_list(const std::string& key) const;

  const std::vector<Entry>& entries() const { return entries_; }

  // Throws if a key is present that the caller does not understand.
  void require_known(const std::vector<std::string>& known) const;

 private:
  const std::string* find(const std::string& key) const;
  std::vector<Entry> entries_;
};

Config parse_config_text(const std::string& text, const std::string& origin);
Config parse_config_file(const std::string& path);

// Keys consumed by train_config_from_config, in documentation order.
const std::vector<std::string>& train_config_keys();

// Builds a TrainConfig starting from the mode's defaults (`mode` key,
// single|mint) and applying every present override key.
train::TrainConfig train_config_from_config(const Config& c);

}  // namespace mint::cfg
