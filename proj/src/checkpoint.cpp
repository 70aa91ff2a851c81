// SPDX-License-Identifier: Apache-2.0
#include "lncl/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lncl {

namespace {

constexpr char kMagic[8] = {'L', 'N', 'C', 'L', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void write_u32(std::ostream& out, std::uint32_t v) { write_bytes(out, &v, sizeof v); }
void write_u8(std::ostream& out, std::uint8_t v) { write_bytes(out, &v, sizeof v); }

void write_doubles(std::ostream& out, const std::vector<double>& v) {
  write_u32(out, static_cast<std::uint32_t>(v.size()));
  if (!v.empty()) write_bytes(out, v.data(), v.size() * sizeof(double));
}

void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  if (!s.empty()) write_bytes(out, s.data(), s.size());
}

void read_bytes(std::istream& in, void* data, std::size_t n) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  read_bytes(in, &v, sizeof v);
  return v;
}

std::uint8_t read_u8(std::istream& in) {
  std::uint8_t v = 0;
  read_bytes(in, &v, sizeof v);
  return v;
}

std::vector<double> read_doubles(std::istream& in) {
  const std::uint32_t n = read_u32(in);
  std::vector<double> v(n);
  if (n > 0) read_bytes(in, v.data(), static_cast<std::size_t>(n) * sizeof(double));
  return v;
}

std::string read_string(std::istream& in) {
  const std::uint32_t n = read_u32(in);
  std::string s(n, '\0');
  if (n > 0) read_bytes(in, s.data(), n);
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open '" + path + "' for writing");

  write_bytes(out, kMagic, sizeof kMagic);
  write_u32(out, kVersion);
  write_u8(out, checkpoint.task_kind == TaskKind::classification ? 0 : 1);

  const ClassifierConfig& c = checkpoint.params.config;
  write_u8(out, c.activation == Activation::tanh_fn ? 0 : 1);
  write_u32(out, static_cast<std::uint32_t>(c.num_classes));
  write_u32(out, c.feature_dim);
  write_u32(out, static_cast<std::uint32_t>(c.hidden_width));
  write_doubles(out, {c.init_scale});

  write_u32(out, static_cast<std::uint32_t>(checkpoint.label_names.size()));
  for (const std::string& name : checkpoint.label_names) write_string(out, name);

  write_doubles(out, checkpoint.params.w1);
  write_doubles(out, checkpoint.params.b1);
  write_doubles(out, checkpoint.params.w2);
  write_doubles(out, checkpoint.params.b2);

  write_u32(out, static_cast<std::uint32_t>(checkpoint.confusions.size()));
  for (const ConfusionMatrix& pi : checkpoint.confusions) {
    write_u32(out, static_cast<std::uint32_t>(pi.size()));
    write_doubles(out, pi.entries());
  }
  if (!out) throw std::runtime_error("checkpoint: write to '" + path + "' failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open '" + path + "'");

  char magic[8] = {};
  read_bytes(in, magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("checkpoint: bad magic in '" + path + "'");
  if (const auto version = read_u32(in); version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));

  Checkpoint ck;
  ck.task_kind = read_u8(in) == 0 ? TaskKind::classification : TaskKind::sequence;

  ClassifierConfig config;
  config.activation = read_u8(in) == 0 ? Activation::tanh_fn : Activation::relu;
  config.num_classes = static_cast<int>(read_u32(in));
  config.feature_dim = read_u32(in);
  config.hidden_width = static_cast<int>(read_u32(in));
  const std::vector<double> init_scale = read_doubles(in);
  if (init_scale.size() != 1) throw std::runtime_error("checkpoint: malformed header");
  config.init_scale = init_scale[0];

  const std::uint32_t num_labels = read_u32(in);
  for (std::uint32_t i = 0; i < num_labels; ++i)
    ck.label_names.push_back(read_string(in));

  ck.params.config = config;
  ck.params.w1 = read_doubles(in);
  ck.params.b1 = read_doubles(in);
  ck.params.w2 = read_doubles(in);
  ck.params.b2 = read_doubles(in);

  const std::uint32_t num_annotators = read_u32(in);
  for (std::uint32_t j = 0; j < num_annotators; ++j) {
    const std::uint32_t k = read_u32(in);
    ck.confusions.push_back(ConfusionMatrix(k, read_doubles(in)));
  }
  return ck;
}

}  // namespace lncl
