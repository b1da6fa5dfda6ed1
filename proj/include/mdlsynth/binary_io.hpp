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
#pragma once

// Little-endian framing shared by the dataset and model file formats.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mdlsynth::binary {

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

class Writer {
 public:
  void u8(std::uint8_t v);
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void bytes(std::string_view raw);

  /// Appends the CRC32 of everything written so far.
  void seal();

  const std::vector<std::uint8_t>& buffer() const { return buf_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::uint8_t> buf_;
};

/// Reads a sealed buffer. Accessors throw a parse error instead of reading
/// past the payload; finish() then checks that the payload was consumed
/// exactly and that the trailing CRC32 matches.
class Reader {
 public:
  Reader(std::vector<std::uint8_t> data, std::string what);
  static Reader load(const std::filesystem::path& path, std::string what);

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  std::string bytes(std::size_t n);

  std::size_t remaining() const { return payload_end_ - pos_; }
  void finish() const;

 private:
  void need(std::size_t n) const;

  std::vector<std::uint8_t> data_;
  std::string what_;
  std::size_t pos_ = 0;
  std::size_t payload_end_ = 0;
};

}  // namespace mdlsynth::binary
