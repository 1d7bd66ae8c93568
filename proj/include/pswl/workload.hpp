#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pswl {

enum class OpCode : uint8_t { Read, Write };

struct TraceRecord {
  std::string device_id;
  OpCode opcode = OpCode::Read;
  uint64_t offset = 0;     // bytes
  uint64_t length = 0;     // bytes, > 0
  uint64_t timestamp = 0;  // microseconds
};

// One page-sized host access against the array's logical address space.
struct Access {
  uint64_t page = 0;
  OpCode op = OpCode::Write;
  double arrival_us = 0.0;
  bool operator==(const Access&) const = default;
};

struct TraceParseReport {
  uint64_t lines = 0;
  uint64_t records = 0;
  uint64_t malformed = 0;
  uint64_t page_accesses = 0;
};

struct ParsedTrace {
  std::vector<Access> accesses;
  TraceParseReport report;
};

// Parses "device_id,opcode,offset,length,timestamp" lines (plain or gzip).
// Offsets wrap modulo logical_pages. Throws IoError / FormatError (>1% bad lines).
ParsedTrace parse_trace(const std::string& path, uint32_t page_size, uint64_t logical_pages);

// Parses a single line; returns false when malformed.
bool parse_trace_line(const std::string& line, TraceRecord& out);

struct SyntheticSpec {
  uint64_t op_count = 100000;
  double write_fraction = 0.9;
  double skew = 1.0;  // Zipf exponent, >= 0
  uint64_t address_space = 1024;
  uint64_t seed = 1;
  double inter_arrival_us = 10.0;
  void validate() const;
};

// Zipf-popular page stream; popularity ranks are scattered over the address
// space by a seeded permutation.
class SyntheticGenerator {
 public:
  explicit SyntheticGenerator(const SyntheticSpec& spec);
  Access next();
  // Page holding popularity rank r (0 = hottest).
  uint64_t page_of_rank(uint64_t r) const { return rank_to_page_[r]; }

 private:
  double uniform();

  SyntheticSpec spec_;
  std::mt19937_64 rng_;
  std::vector<double> cdf_;
  std::vector<uint64_t> rank_to_page_;
  uint64_t issued_ = 0;
};

std::vector<Access> generate_synthetic(const SyntheticSpec& spec);

}  // namespace pswl
