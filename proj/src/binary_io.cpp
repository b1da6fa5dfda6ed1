// Copyright 2026 The mdlsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "mdlsynth/binary_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mdlsynth/error.hpp"

namespace mdlsynth::binary {

static_assert(std::endian::native == std::endian::little,
              "file formats assume a little-endian host");

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t off = 0;
  while (off < bytes.size()) {
    std::size_t chunk = std::min<std::size_t>(bytes.size() - off, 1u << 30);
    crc = ::crc32(crc, bytes.data() + off, static_cast<uInt>(chunk));
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

namespace {

template <typename T>
void put(std::vector<std::uint8_t>& buf, T v) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.insert(buf.end(), raw, raw + sizeof(T));
}

}  // namespace

void Writer::u8(std::uint8_t v) { buf_.push_back(v); }
void Writer::u16(std::uint16_t v) { put(buf_, v); }
void Writer::u32(std::uint32_t v) { put(buf_, v); }
void Writer::u64(std::uint64_t v) { put(buf_, v); }
void Writer::f32(float v) { put(buf_, v); }
void Writer::bytes(std::string_view raw) {
  buf_.insert(buf_.end(), raw.begin(), raw.end());
}

void Writer::seal() { u32(crc32(buf_)); }

void Writer::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  }
  out.write(reinterpret_cast<const char*>(buf_.data()),
            static_cast<std::streamsize>(buf_.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

Reader::Reader(std::vector<std::uint8_t> data, std::string what)
    : data_(std::move(data)), what_(std::move(what)) {
  if (data_.size() < 4) {
    throw Error(ErrorCode::kParse, what_ + ": truncated (no checksum)");
  }
  payload_end_ = data_.size() - 4;
}

Reader Reader::load(const std::filesystem::path& path, std::string what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return Reader(std::move(data), std::move(what));
}

void Reader::need(std::size_t n) const {
  if (payload_end_ - pos_ < n) {
    throw Error(ErrorCode::kParse, what_ + ": unexpected end of data");
  }
}

namespace {

template <typename T>
T get(const std::vector<std::uint8_t>& data, std::size_t& pos) {
  T v;
  std::memcpy(&v, data.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::uint8_t Reader::u8() { need(1); return get<std::uint8_t>(data_, pos_); }
std::uint16_t Reader::u16() { need(2); return get<std::uint16_t>(data_, pos_); }
std::uint32_t Reader::u32() { need(4); return get<std::uint32_t>(data_, pos_); }
std::uint64_t Reader::u64() { need(8); return get<std::uint64_t>(data_, pos_); }
float Reader::f32() { need(4); return get<float>(data_, pos_); }

std::string Reader::bytes(std::size_t n) {
  need(n);
  std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
  pos_ += n;
  return s;
}

void Reader::finish() const {
  if (pos_ != payload_end_) {
    throw Error(ErrorCode::kParse, what_ + ": trailing bytes after payload");
  }
  std::uint32_t stored;
  std::memcpy(&stored, data_.data() + payload_end_, 4);
  if (stored != crc32({data_.data(), payload_end_})) {
    throw Error(ErrorCode::kChecksum, what_ + ": CRC32 mismatch");
  }
}

}  // namespace mdlsynth::binary
