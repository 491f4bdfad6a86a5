#ifndef RKIT_CHECKPOINT_H
#define RKIT_CHECKPOINT_H

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace rkit {

struct NamedTensor {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<double> data;  // row-major

  std::size_t element_count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= static_cast<std::size_t>(d);
    return n;
  }
};

// Container layout: magic "RKT1"; u32 version=1; u64 vocabulary hash
// (FNV-1a over the index-ordered vocabulary tokens joined by newlines);
// u32 tensor count; per tensor u16 name length + name, u8 rank, u64 per
// dim, row-major IEEE-754 little-endian float64 payload; u32 config
// length + UTF-8 JSON config block at the end.
struct Checkpoint {
  std::uint64_t vocab_hash = 0;
  std::vector<NamedTensor> tensors;
  nlohmann::json config;

  const NamedTensor& tensor(const std::string& name) const;
  bool has_tensor(const std::string& name) const;
};

void write_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace rkit

#endif  // RKIT_CHECKPOINT_H
