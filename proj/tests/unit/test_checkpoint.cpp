// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "lncl/checkpoint.hpp"
#include "lncl/rng.hpp"

using namespace lncl;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name) {
    path = fs::temp_directory_path() / ("lncl_test_" + name);
  }
  ~TempFile() { std::remove(path.string().c_str()); }
};

Checkpoint sample_checkpoint() {
  ClassifierConfig config;
  config.feature_dim = 128;
  config.num_classes = 3;
  config.hidden_width = 4;
  config.activation = Activation::relu;
  config.init_scale = 0.07;
  Checkpoint ck;
  ck.task_kind = TaskKind::sequence;
  ck.label_names = {"O", "B-PER", "I-PER"};
  ck.params = init_params(config, 2718);
  ck.confusions = {ConfusionMatrix::diagonal(3, 0.8), ConfusionMatrix::uniform(3)};
  return ck;
}

}  // namespace

TEST_CASE("checkpoints round trip bit for bit") {
  TempFile file("roundtrip.ckpt");
  Checkpoint original = sample_checkpoint();
  save_checkpoint(file.path.string(), original);
  Checkpoint loaded = load_checkpoint(file.path.string());

  CHECK(loaded.task_kind == original.task_kind);
  CHECK(loaded.label_names == original.label_names);
  CHECK(loaded.params == original.params);  // exact double equality
  REQUIRE(loaded.confusions.size() == original.confusions.size());
  for (std::size_t j = 0; j < loaded.confusions.size(); ++j)
    CHECK(loaded.confusions[j] == original.confusions[j]);
}

TEST_CASE("linear classification checkpoints round trip too") {
  TempFile file("linear.ckpt");
  ClassifierConfig config;
  config.feature_dim = 64;
  config.num_classes = 2;
  Checkpoint ck;
  ck.task_kind = TaskKind::classification;
  ck.label_names = {"negative", "positive"};
  ck.params = init_params(config, 7);
  ck.confusions = {ConfusionMatrix::diagonal(2, 0.9)};
  save_checkpoint(file.path.string(), ck);
  Checkpoint loaded = load_checkpoint(file.path.string());
  CHECK(loaded.params == ck.params);
  CHECK(loaded.params.w2.empty());
}

TEST_CASE("corrupt checkpoints are rejected") {
  TempFile file("corrupt.ckpt");
  Checkpoint ck = sample_checkpoint();
  save_checkpoint(file.path.string(), ck);

  SUBCASE("bad magic") {
    std::fstream f(file.path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("WRONGMAG", 8);
    f.close();
    CHECK_THROWS_AS(load_checkpoint(file.path.string()), std::runtime_error);
  }
  SUBCASE("bad version") {
    std::fstream f(file.path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(8);
    const char bytes[4] = {(char)0xFF, (char)0xFF, 0, 0};
    f.write(bytes, 4);
    f.close();
    CHECK_THROWS_AS(load_checkpoint(file.path.string()), std::runtime_error);
  }
  SUBCASE("truncation") {
    const auto size = fs::file_size(file.path);
    fs::resize_file(file.path, size / 2);
    CHECK_THROWS_AS(load_checkpoint(file.path.string()), std::runtime_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/model.ckpt"), std::runtime_error);
  }
}
