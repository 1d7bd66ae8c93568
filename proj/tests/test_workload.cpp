#include <gtest/gtest.h>
#include <zlib.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "pswl/errors.hpp"
#include "pswl/workload.hpp"

using namespace pswl;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "pswl_workload_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST(TraceLine, ParsesFields) {
  TraceRecord r;
  ASSERT_TRUE(parse_trace_line("7,W,8192,4096,1500", r));
  EXPECT_EQ(r.device_id, "7");
  EXPECT_EQ(r.opcode, OpCode::Write);
  EXPECT_EQ(r.offset, 8192u);
  EXPECT_EQ(r.length, 4096u);
  EXPECT_EQ(r.timestamp, 1500u);
  for (const char* bad : {"", "1,W,0,4096", "1,X,0,4096,1", "1,W,-5,4096,1", "1,W,0,0,1", "a,b,c,d,e"})
    EXPECT_FALSE(parse_trace_line(bad, r)) << bad;
}

TEST(Trace, WriteSpanningTwoPages) {
  const auto p = temp_file("two.csv", "0,W,0,8192,1000\n");
  const auto t = parse_trace(p.string(), 4096, 100);
  ASSERT_EQ(t.accesses.size(), 2u);
  EXPECT_EQ(t.accesses[0].page, 0u);
  EXPECT_EQ(t.accesses[1].page, 1u);
  EXPECT_EQ(t.accesses[0].op, OpCode::Write);
}

TEST(Trace, SingleRead) {
  const auto p = temp_file("read.csv", "0,R,4096,4096,2000\n");
  const auto t = parse_trace(p.string(), 4096, 100);
  ASSERT_EQ(t.accesses.size(), 1u);
  EXPECT_EQ(t.accesses[0].page, 1u);
  EXPECT_EQ(t.accesses[0].op, OpCode::Read);
}

TEST(Trace, EmptyFile) {
  const auto p = temp_file("empty.csv", "");
  const auto t = parse_trace(p.string(), 4096, 100);
  EXPECT_TRUE(t.accesses.empty());
  EXPECT_EQ(t.report.records, 0u);
  EXPECT_EQ(t.report.page_accesses, 0u);
}

TEST(Trace, OffsetsWrapAndArrivalsAreRelative) {
  const auto p = temp_file("wrap.csv", "0,W,409600,4096,5000\n0,W,0,4096,7000\n");
  const auto t = parse_trace(p.string(), 4096, 64);
  ASSERT_EQ(t.accesses.size(), 2u);
  EXPECT_EQ(t.accesses[0].page, 100u % 64);
  EXPECT_EQ(t.accesses[0].arrival_us, 0.0);
  EXPECT_EQ(t.accesses[1].arrival_us, 2000.0);
}

TEST(Trace, MissingFileIsIoError) {
  EXPECT_THROW(parse_trace("/nonexistent/trace.csv", 4096, 10), IoError);
}

TEST(Trace, TooManyMalformedLinesIsFormatError) {
  const auto p = temp_file("bad.csv", "0,W,0,4096,1\ngarbage\n0,W,0,4096,2\n");
  EXPECT_THROW(parse_trace(p.string(), 4096, 10), FormatError);
}

TEST(Trace, ExpansionConservationAndGzip) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<uint64_t> off_d(0, 1 << 20), len_d(1, 40000);
  std::string body;
  uint64_t expected = 0;
  for (int i = 0; i < 500; ++i) {
    const uint64_t len = len_d(rng);
    expected += (len + 4095) / 4096;
    body += std::to_string(i % 3) + (i % 2 ? ",R," : ",W,") + std::to_string(off_d(rng)) + "," +
            std::to_string(len) + "," + std::to_string(1000 + i) + "\n";
  }
  const auto plain = temp_file("many.csv", body);
  const auto a = parse_trace(plain.string(), 4096, 1000);
  EXPECT_EQ(a.accesses.size(), expected);
  EXPECT_EQ(a.report.records, 500u);

  const fs::path gz = plain.parent_path() / "many.csv.gz";
  gzFile f = gzopen(gz.string().c_str(), "wb");
  ASSERT_NE(f, nullptr);
  gzwrite(f, body.data(), static_cast<unsigned>(body.size()));
  gzclose(f);
  const auto b = parse_trace(gz.string(), 4096, 1000);
  EXPECT_EQ(a.accesses, b.accesses);
  EXPECT_EQ(parse_trace(plain.string(), 4096, 1000).accesses, a.accesses);
}

TEST(Synthetic, SameSeedSameStream) {
  SyntheticSpec s;
  s.op_count = 5000;
  EXPECT_EQ(generate_synthetic(s), generate_synthetic(s));
  SyntheticSpec t = s;
  t.seed = 2;
  EXPECT_NE(generate_synthetic(s), generate_synthetic(t));
}

TEST(Synthetic, AllWritesWhenFractionIsOne) {
  SyntheticSpec s;
  s.op_count = 5000;
  s.write_fraction = 1.0;
  for (const auto& a : generate_synthetic(s)) ASSERT_EQ(a.op, OpCode::Write);
}

TEST(Synthetic, ZeroSkewIsUniform) {
  SyntheticSpec s;
  s.op_count = 1000000;
  s.skew = 0.0;
  s.address_space = 100;
  std::vector<uint64_t> hits(s.address_space, 0);
  for (const auto& a : generate_synthetic(s)) ++hits[a.page];
  const double p = 1.0 / double(s.address_space);
  const double mean = double(s.op_count) * p;
  const double sd = std::sqrt(double(s.op_count) * p * (1 - p));
  // Per-page 3 sigma, with a Bonferroni-style margin so 100 pages pass together.
  for (uint64_t h : hits) EXPECT_LE(std::fabs(double(h) - mean), 4.0 * sd);
  uint64_t outside3 = 0;
  for (uint64_t h : hits)
    if (std::fabs(double(h) - mean) > 3.0 * sd) ++outside3;
  EXPECT_LE(outside3, 2u);
}

TEST(Synthetic, SkewConcentratesOnTopRank) {
  SyntheticSpec s;
  s.op_count = 100000;
  s.skew = 1.0;
  s.address_space = 1000;
  SyntheticGenerator g(s);
  const uint64_t top = g.page_of_rank(0), tail = g.page_of_rank(999);
  uint64_t top_hits = 0, tail_hits = 0;
  for (const auto& a : generate_synthetic(s)) {
    top_hits += a.page == top;
    tail_hits += a.page == tail;
  }
  EXPECT_GT(top_hits, 50 * (tail_hits + 1));
}

TEST(Synthetic, RejectsBadSpec) {
  SyntheticSpec s;
  s.write_fraction = 1.5;
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.skew = -1;
  EXPECT_THROW(s.validate(), ConfigError);
}
