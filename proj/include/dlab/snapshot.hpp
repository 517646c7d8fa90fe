#pragma once

// Binary field snapshots. Fixed little-endian layout, byte-for-byte
// reproducible and language-neutral:
//
//   magic   "DDL1"            4 bytes
//   version u32               currently 1
//   ndim    u32               1 or 2
//   dims    u64 x ndim        grid points per axis (x first)
//   lengths f64 x ndim        periods per axis
//   t       f64               simulation time of the sample
//   model   u32               family tag (enum order of models::Family)
//   payload f64 x prod(dims)  field values, x-major row order
//
// Reads are strict: wrong magic, unsupported version, short files and
// trailing bytes are all distinct errors.

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlab/models.hpp"
#include "dlab/spectral.hpp"

namespace dlab::snapshot {

struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

struct Snapshot {
  std::uint32_t version = 1;
  std::uint32_t ndim = 1;
  std::vector<std::uint64_t> dims;
  std::vector<double> lengths;
  double t = 0.0;
  std::uint32_t model_tag = 0;
  std::vector<double> payload;
};

namespace detail {

constexpr char kMagic[4] = {'D', 'D', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

inline void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xff);
}

inline void put_u64(std::vector<unsigned char>& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back((v >> (8 * i)) & 0xff);
}

inline void put_f64(std::vector<unsigned char>& b, double v) {
  put_u64(b, std::bit_cast<std::uint64_t>(v));
}

struct Cursor {
  const std::vector<unsigned char>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size())
      throw FormatError("snapshot file is truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace detail

inline std::vector<unsigned char> encode(const Snapshot& s) {
  if (s.ndim != 1 && s.ndim != 2)
    throw std::invalid_argument("snapshot ndim must be 1 or 2");
  if (s.dims.size() != s.ndim || s.lengths.size() != s.ndim)
    throw std::invalid_argument("snapshot dims/lengths must match ndim");
  std::uint64_t total = 1;
  for (auto d : s.dims) total *= d;
  if (s.payload.size() != total)
    throw std::invalid_argument("snapshot payload length must equal prod(dims)");

  std::vector<unsigned char> b;
  b.reserve(4 + 4 + 4 + 8 * s.ndim * 2 + 8 + 4 + 8 * s.payload.size());
  for (char c : detail::kMagic) b.push_back(static_cast<unsigned char>(c));
  detail::put_u32(b, s.version);
  detail::put_u32(b, s.ndim);
  for (auto d : s.dims) detail::put_u64(b, d);
  for (auto l : s.lengths) detail::put_f64(b, l);
  detail::put_f64(b, s.t);
  detail::put_u32(b, s.model_tag);
  for (double v : s.payload) detail::put_f64(b, v);
  return b;
}

inline Snapshot decode(const std::vector<unsigned char>& bytes) {
  detail::Cursor c{bytes};
  c.need(4);
  for (int i = 0; i < 4; ++i)
    if (bytes[i] != static_cast<unsigned char>(detail::kMagic[i]))
      throw FormatError("bad magic: not a snapshot file");
  c.pos = 4;

  Snapshot s;
  s.version = c.u32();
  if (s.version != detail::kVersion)
    throw FormatError("unsupported snapshot version " + std::to_string(s.version));
  s.ndim = c.u32();
  if (s.ndim != 1 && s.ndim != 2)
    throw FormatError("invalid snapshot ndim " + std::to_string(s.ndim));
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < s.ndim; ++i) {
    s.dims.push_back(c.u64());
    if (s.dims.back() == 0 || s.dims.back() > (1u << 24))
      throw FormatError("invalid snapshot dimension");
    total *= s.dims.back();
  }
  for (std::uint32_t i = 0; i < s.ndim; ++i) s.lengths.push_back(c.f64());
  s.t = c.f64();
  s.model_tag = c.u32();
  if (s.model_tag > 4)
    throw FormatError("invalid model tag " + std::to_string(s.model_tag));
  s.payload.resize(total);
  for (std::uint64_t i = 0; i < total; ++i) s.payload[i] = c.f64();
  if (c.pos != bytes.size())
    throw FormatError("trailing bytes after snapshot payload");
  return s;
}

inline void write_snapshot(const Snapshot& s, const std::string& path) {
  const std::vector<unsigned char> bytes = encode(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<unsigned char> bytes(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode(bytes);
}

// conversions to and from simulation state
inline Snapshot snapshot_of(const models::State& st) {
  const spectral::Grid& g = st.field.grid;
  Snapshot s;
  s.ndim = static_cast<std::uint32_t>(g.ndim);
  s.dims.push_back(static_cast<std::uint64_t>(g.nx));
  s.lengths.push_back(g.lx);
  if (g.ndim == 2) {
    s.dims.push_back(static_cast<std::uint64_t>(g.ny));
    s.lengths.push_back(g.ly);
  }
  s.t = st.t;
  s.model_tag = static_cast<std::uint32_t>(st.model.family);
  s.payload = st.field.values;
  return s;
}

// rebuild the field; throws std::invalid_argument for grids the solver
// cannot represent (non power-of-two dims)
inline spectral::Field field_of(const Snapshot& s) {
  const spectral::Grid g =
      s.ndim == 1 ? spectral::make_grid_1d(static_cast<int>(s.dims[0]),
                                           s.lengths[0])
                  : spectral::make_grid_2d(static_cast<int>(s.dims[0]),
                                           static_cast<int>(s.dims[1]),
                                           s.lengths[0], s.lengths[1]);
  spectral::Field f(g);
  f.values = s.payload;
  return f;
}

}  // namespace dlab::snapshot
