#include "rkit/checkpoint.h"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rkit {

namespace {

constexpr char kMagic[4] = {'R', 'K', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(out, bits);
}

class Reader {
 public:
  Reader(const std::string& buf, const std::string& path)
      : buf_(buf), path_(path) {}

  void need(std::size_t n) {
    if (pos_ + n > buf_.size())
      throw std::runtime_error("truncated checkpoint: " + path_);
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint8_t>(buf_[pos_]) |
                      (static_cast<std::uint16_t>(static_cast<std::uint8_t>(buf_[pos_ + 1])) << 8);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(buf_[pos_ + static_cast<std::size_t>(i)])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf_[pos_ + static_cast<std::size_t>(i)])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() {
    std::uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  std::size_t size() const { return buf_.size(); }

 private:
  const std::string& buf_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

const NamedTensor& Checkpoint::tensor(const std::string& name) const {
  for (const NamedTensor& t : tensors)
    if (t.name == name) return t;
  throw std::runtime_error("checkpoint has no tensor named " + name);
}

bool Checkpoint::has_tensor(const std::string& name) const {
  for (const NamedTensor& t : tensors)
    if (t.name == name) return true;
  return false;
}

void write_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u64(out, ckpt.vocab_hash);
  put_u32(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const NamedTensor& t : ckpt.tensors) {
    if (t.name.size() > 0xFFFF)
      throw std::runtime_error("tensor name too long: " + t.name);
    if (t.dims.size() > 0xFF)
      throw std::runtime_error("tensor rank too large: " + t.name);
    if (t.element_count() != t.data.size())
      throw std::runtime_error("tensor dims/data mismatch: " + t.name);
    put_u16(out, static_cast<std::uint16_t>(t.name.size()));
    out += t.name;
    out.push_back(static_cast<char>(t.dims.size()));
    for (std::uint64_t d : t.dims) put_u64(out, d);
    for (double v : t.data) put_f64(out, v);
  }
  std::string cfg = ckpt.config.dump();
  put_u32(out, static_cast<std::uint32_t>(cfg.size()));
  out += cfg;

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  Reader r(buf, path);

  std::string magic = r.bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    throw std::runtime_error("bad checkpoint magic in " + path);
  std::uint32_t version = r.u32();
  if (version != kVersion)
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version) + " in " + path);

  Checkpoint ckpt;
  ckpt.vocab_hash = r.u64();
  std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    std::uint16_t name_len = r.u16();
    t.name = r.bytes(name_len);
    std::uint8_t rank = static_cast<std::uint8_t>(r.bytes(1)[0]);
    std::size_t n = 1;
    for (int d = 0; d < rank; ++d) {
      std::uint64_t dim = r.u64();
      t.dims.push_back(dim);
      if (dim == 0 || n > (1ULL << 32) / std::max<std::uint64_t>(dim, 1))
        throw std::runtime_error("implausible tensor shape in " + path);
      n *= static_cast<std::size_t>(dim);
    }
    t.data.resize(n);
    for (std::size_t k = 0; k < n; ++k) t.data[k] = r.f64();
    ckpt.tensors.push_back(std::move(t));
  }
  std::uint32_t cfg_len = r.u32();
  std::string cfg = r.bytes(cfg_len);
  if (r.pos() != r.size())
    throw std::runtime_error("trailing bytes in checkpoint " + path);
  try {
    ckpt.config = nlohmann::json::parse(cfg);
  } catch (const std::exception& e) {
    throw std::runtime_error("bad config block in " + path + ": " + e.what());
  }
  return ckpt;
}

}  // namespace rkit
