#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "mint/config.hpp"

using mint::cfg::Config;

TEST_SUITE("config") {

TEST_CASE("parses keys, comments and blank lines") {
  Config c = mint::cfg::parse_config_text(
      "# run setup\n"
      "mode = mint\n"
      "\n"
      "lr=0.001   # inline comment\n"
      "  seed =  42\n"
      "train_roster = a, b ,c\n",
      "mem");
  CHECK(c.has("mode"));
  CHECK(c.get_string("mode", "x") == "mint");
  CHECK(c.get_double("lr", 0.0) == 0.001);
  CHECK(c.get_int("seed", 0) == 42);
  CHECK(c.get_list("train_roster") ==
        std::vector<std::string>{"a", "b", "c"});
  CHECK(!c.has("absent"));
  CHECK(c.get_int("absent", 5) == 5);
  CHECK(c.get_string("absent", "dflt") == "dflt");
}

TEST_CASE("bool values") {
  Config c = mint::cfg::parse_config_text(
      "a = true\nb = false\nc = 1\nd = 0\n", "mem");
  CHECK(c.get_bool("a", false));
  CHECK(!c.get_bool("b", true));
  CHECK(c.get_bool("c", false));
  CHECK(!c.get_bool("d", true));
  CHECK(c.get_bool("absent", true));
  Config bad = mint::cfg::parse_config_text("x = yes\n", "mem");
  CHECK_THROWS_AS(bad.get_bool("x", false), mint::Error);
}

TEST_CASE("malformed input errors carry the origin and line") {
  CHECK_THROWS_WITH_AS(mint::cfg::parse_config_text("novalue\n", "conf"),
                       doctest::Contains("conf"), mint::Error);
  CHECK_THROWS_AS(mint::cfg::parse_config_text("= 3\n", "conf"), mint::Error);
  CHECK_THROWS_AS(
      mint::cfg::parse_config_text("a = 1\na = 2\n", "conf"), mint::Error);
  CHECK_THROWS_AS(mint::cfg::parse_config_file("/definitely/not/here.conf"),
                  mint::Error);
}

TEST_CASE("typed getters validate their input") {
  Config c = mint::cfg::parse_config_text(
      "i = 12x\nd = 0.5.5\nl = a,,b\n", "mem");
  CHECK_THROWS_AS(c.get_int("i", 0), mint::Error);
  CHECK_THROWS_AS(c.get_double("d", 0.0), mint::Error);
  CHECK_THROWS_AS(c.get_list("l"), mint::Error);
  CHECK(c.get_list("absent").empty());
}

TEST_CASE("require_known rejects stray keys") {
  Config c = mint::cfg::parse_config_text("mode = single\ntypo = 3\n", "mem");
  CHECK_THROWS_WITH_AS(c.require_known({"mode"}),
                       doctest::Contains("typo"), mint::Error);
  c.require_known({"mode", "typo"});  // no throw
}

TEST_CASE("train config defaults per mode") {
  Config single = mint::cfg::parse_config_text("mode = single\n", "mem");
  mint::train::TrainConfig sc = mint::cfg::train_config_from_config(single);
  CHECK(sc.mode == "single");
  CHECK(sc.lr == 1.5e-3);
  CHECK(sc.max_epochs == 250);
  CHECK(sc.min_epochs == 100);
  CHECK(sc.patience == 20);
  CHECK(sc.min_delta == 0.05);

  Config multi = mint::cfg::parse_config_text("mode = mint\n", "mem");
  mint::train::TrainConfig mc = mint::cfg::train_config_from_config(multi);
  CHECK(mc.mode == "mint");
  CHECK(mc.lr == 1e-4);
  CHECK(mc.max_epochs == 300);
  CHECK(mc.min_epochs == 1);
  CHECK(mc.patience == 30);
  CHECK(mc.min_delta == 0.05);

  // defaults follow the mode even with other keys present
  Config d = mint::cfg::parse_config_text("model = gclstm\n", "mem");
  mint::train::TrainConfig dc = mint::cfg::train_config_from_config(d);
  CHECK(dc.mode == "single");
  CHECK(dc.model == "gclstm");
}

TEST_CASE("train config overrides") {
  Config c = mint::cfg::parse_config_text(
      "mode = mint\n"
      "model = gclstm\n"
      "dim = 64\n"
      "hgnn_layers = 2\n"
      "window = 9\n"
      "curvature = 0.5\n"
      "slope = 0.1\n"
      "dec_hidden = 48\n"
      "label_window = 5\n"
      "horizon_start = 2\n"
      "horizon_end = 6\n"
      "train_frac = 0.6\n"
      "val_frac = 0.2\n"
      "lr = 0.01\n"
      "max_epochs = 12\n"
      "min_epochs = 2\n"
      "patience = 4\n"
      "min_delta = 0.01\n"
      "grad_clip = 5.0\n"
      "seed = 99\n"
      "ablate_shuffle = true\n"
      "ablate_context_switch = true\n",
      "mem");
  c.require_known(mint::cfg::train_config_keys());
  mint::train::TrainConfig tc = mint::cfg::train_config_from_config(c);
  CHECK(tc.model == "gclstm");
  CHECK(tc.arch.dim == 64);
  CHECK(tc.arch.hgnn_layers == 2);
  CHECK(tc.arch.window == 9);
  CHECK(tc.arch.curvature == 0.5);
  CHECK(tc.arch.slope == 0.1);
  CHECK(tc.arch.dec_hidden == 48);
  CHECK(tc.labels.window == 5);
  CHECK(tc.labels.horizon_start == 2);
  CHECK(tc.labels.horizon_end == 6);
  CHECK(tc.split.train_frac == 0.6);
  CHECK(tc.split.val_frac == 0.2);
  CHECK(tc.lr == 0.01);
  CHECK(tc.max_epochs == 12);
  CHECK(tc.min_epochs == 2);
  CHECK(tc.patience == 4);
  CHECK(tc.min_delta == 0.01);
  CHECK(tc.grad_clip == 5.0);
  CHECK(tc.seed == 99);
  CHECK(tc.ablate_shuffle);
  CHECK(tc.ablate_context_switch);
}

TEST_CASE("train config key list covers every consumed key") {
  const auto& keys = mint::cfg::train_config_keys();
  CHECK(keys.size() == 22);
  for (const char* k :
       {"mode", "model", "dim", "label_window", "lr", "seed",
        "ablate_shuffle", "ablate_context_switch"})
    CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
}

}  // TEST_SUITE
