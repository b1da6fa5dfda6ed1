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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mdlsynth/binary_io.hpp"
#include "mdlsynth/circuit_io.hpp"
#include "mdlsynth/error.hpp"
#include "test_util.hpp"

namespace mdlsynth {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mdlsynth_tests";
  fs::create_directories(dir);
  return dir / name;
}

TEST(CircuitText, ParsesCommentsAndRoundTrips) {
  const Circuit c = parse_circuit("# bell pair\nQUBITS 2\nH 0   # first\n\nCX 0 1\nT 1\n");
  EXPECT_EQ(c, Circuit(2, {Gate::h(0), Gate::cx(0, 1), Gate::t(1)}));
  EXPECT_EQ(format_circuit(c), "QUBITS 2\nH 0\nCX 0 1\nT 1\n");
  EXPECT_EQ(parse_circuit(format_circuit(c)), c);
}

TEST(CircuitText, ErrorsNameTheLine) {
  auto message = [](const char* text) {
    try {
      parse_circuit(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("QUBITS 2\nH 0\nX 1\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("QUBITS 2\nCX 0 0\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("QUBITS 2\nH 2\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("H 0\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("QUBITS 9\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("").find("QUBITS"), std::string::npos);
}

TEST(UnitaryText, RoundTripIsExact) {
  Rng rng(4);
  const Unitary u = testing::random_unitary(2, rng);
  const Unitary back = parse_unitary(format_unitary(u));
  EXPECT_EQ(back.matrix(), u.matrix());
  EXPECT_THROW(parse_unitary("UNITARY 1\n1 0\n0 0\n0 0\n"), Error);
}

TEST(TargetFile, DispatchesOnExtension) {
  const Circuit c(2, {Gate::h(0), Gate::cx(0, 1)});
  write_circuit_file(c, temp_path("t.circ"));
  write_unitary_file(circuit_unitary(c), temp_path("t.mat"));
  EXPECT_LT(testing::max_abs_diff(read_target_file(temp_path("t.circ")), circuit_unitary(c)), 1e-15);
  EXPECT_LT(testing::max_abs_diff(read_target_file(temp_path("t.mat")), circuit_unitary(c)), 1e-15);
  try {
    read_target_file(temp_path("missing.circ"));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(BinaryIo, Crc32KnownValue) {
  const std::string s = "123456789";
  const std::vector<std::uint8_t> bytes(s.begin(), s.end());
  EXPECT_EQ(binary::crc32(bytes), 0xCBF43926u);
}

TEST(BinaryIo, RoundTripTruncationAndCorruption) {
  binary::Writer w;
  w.u8(7);
  w.u16(0xBEEF);
  w.u32(123456);
  w.u64(1ULL << 40);
  w.f32(1.5f);
  w.bytes("ab");
  w.seal();
  {
    binary::Reader r(w.buffer(), "test");
    EXPECT_EQ(r.u8(), 7);
    EXPECT_EQ(r.u16(), 0xBEEF);
    EXPECT_EQ(r.u32(), 123456u);
    EXPECT_EQ(r.u64(), 1ULL << 40);
    EXPECT_EQ(r.f32(), 1.5f);
    EXPECT_EQ(r.bytes(2), "ab");
    EXPECT_NO_THROW(r.finish());
  }
  {
    auto bad = w.buffer();
    bad[3] ^= 0x40;
    binary::Reader r(bad, "test");
    r.u8();
    r.u16();
    r.u32();
    r.u64();
    r.f32();
    r.bytes(2);
    try {
      r.finish();
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kChecksum);
    }
  }
  {
    auto cut = w.buffer();
    cut.resize(cut.size() - 6);
    try {
      binary::Reader r(cut, "test");
      r.u8();
      r.u16();
      r.u32();
      r.u64();
      r.f32();
      r.bytes(2);
      r.finish();
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse);
    }
  }
}

}  // namespace
}  // namespace mdlsynth
