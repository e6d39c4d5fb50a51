#include "mint/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mint/common.hpp"

namespace mint::cfg {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Config::Config(std::vector<Entry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (std::size_t j = i + 1; j < entries_.size(); ++j)
      check(entries_[i].key != entries_[j].key,
            "config: duplicate key '" + entries_[i].key + "'");
}

const std::string* Config::find(const std::string& key) const {
  for (const Entry& e : entries_)
    if (e.key == key) return &e.value;
  return nullptr;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

int Config::get_int(const std::string& key, int fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    int out = std::stoi(*v, &pos);
    check(pos == v->size(), "trailing characters");
    return out;
  } catch (const std::exception&) {
    fail("config: key '" + key + "' is not an integer: '" + *v + "'");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    double out = std::stod(*v, &pos);
    check(pos == v->size(), "trailing characters");
    return out;
  } catch (const std::exception&) {
    fail("config: key '" + key + "' is not a number: '" + *v + "'");
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  fail("config: key '" + key + "' is not a bool (true/false): '" + *v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  const std::string* v = find(key);
  std::vector<std::string> out;
  if (!v) return out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    check(!item.empty(), "config: key '" + key + "' has an empty list item");
    out.push_back(item);
  }
  check(!out.empty(), "config: key '" + key + "' is an empty list");
  return out;
}

void Config::require_known(const std::vector<std::string>& known) const {
  for (const Entry& e : entries_)
    check(std::find(known.begin(), known.end(), e.key) != known.end(),
          "config: unknown key '" + e.key + "'");
}

Config parse_config_text(const std::string& text, const std::string& origin) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    check(eq != std::string::npos, origin + ":" + std::to_string(lineno) +
                                       ": expected key = value");
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    check(!e.key.empty(), origin + ":" + std::to_string(lineno) +
                              ": empty key");
    entries.push_back(std::move(e));
  }
  return Config(std::move(entries));
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), "config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

const std::vector<std::string>& train_config_keys() {
  static const std::vector<std::string> keys = {
      "mode",          "model",        "dim",
      "hgnn_layers",   "window",       "curvature",
      "slope",         "dec_hidden",   "label_window",
      "horizon_start", "horizon_end",  "train_frac",
      "val_frac",      "lr",           "max_epochs",
      "min_epochs",    "patience",     "min_delta",
      "grad_clip",     "seed",         "ablate_shuffle",
      "ablate_context_switch"};
  return keys;
}

train::TrainConfig train_config_from_config(const Config& c) {
  std::string mode = c.get_string("mode", "single");
  train::TrainConfig tc;
  if (mode == "single")
    tc = train::TrainConfig::single_defaults();
  else if (mode == "mint")
    tc = train::TrainConfig::mint_defaults();
  else
    fail("config: mode must be single or mint, got '" + mode + "'");

  tc.model = c.get_string("model", tc.model);
  tc.arch.dim = c.get_int("dim", tc.arch.dim);
  tc.arch.hgnn_layers = c.get_int("hgnn_layers", tc.arch.hgnn_layers);
  tc.arch.window = c.get_int("window", tc.arch.window);
  tc.arch.curvature = c.get_double("curvature", tc.arch.curvature);
  tc.arch.slope = c.get_double("slope", tc.arch.slope);
  tc.arch.dec_hidden = c.get_int("dec_hidden", tc.arch.dec_hidden);
  tc.labels.window = c.get_int("label_window", tc.labels.window);
  tc.labels.horizon_start = c.get_int("horizon_start", tc.labels.horizon_start);
  tc.labels.horizon_end = c.get_int("horizon_end", tc.labels.horizon_end);
  tc.split.train_frac = c.get_double("train_frac", tc.split.train_frac);
  tc.split.val_frac = c.get_double("val_frac", tc.split.val_frac);
  tc.lr = c.get_double("lr", tc.lr);
  tc.max_epochs = c.get_int("max_epochs", tc.max_epochs);
  tc.min_epochs = c.get_int("min_epochs", tc.min_epochs);
  tc.patience = c.get_int("patience", tc.patience);
  tc.min_delta = c.get_double("min_delta", tc.min_delta);
  tc.grad_clip = c.get_double("grad_clip", tc.grad_clip);
  tc.seed = static_cast<std::uint64_t>(c.get_int("seed",
                                                 static_cast<int>(tc.seed)));
  tc.ablate_shuffle = c.get_bool("ablate_shuffle", tc.ablate_shuffle);
  tc.ablate_context_switch =
      c.get_bool("ablate_context_switch", tc.ablate_context_switch);
  return tc;
}

}  // namespace mint::cfg
