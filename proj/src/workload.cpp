#include "pswl/workload.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "pswl/errors.hpp"

namespace pswl {

namespace {

template <class T>
bool parse_num(std::string_view s, T& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

bool parse_trace_line(const std::string& line, TraceRecord& out) {
  std::string_view v(line);
  std::string_view f[5];
  for (int i = 0; i < 5; ++i) {
    auto pos = v.find(',');
    if (i < 4) {
      if (pos == std::string_view::npos) return false;
      f[i] = v.substr(0, pos);
      v.remove_prefix(pos + 1);
    } else {
      if (pos != std::string_view::npos) return false;
      f[i] = v;
    }
  }
  out.device_id = std::string(f[0]);
  if (f[1] == "W" || f[1] == "w")
    out.opcode = OpCode::Write;
  else if (f[1] == "R" || f[1] == "r")
    out.opcode = OpCode::Read;
  else
    return false;
  if (!parse_num(f[2], out.offset) || !parse_num(f[3], out.length) ||
      !parse_num(f[4], out.timestamp))
    return false;
  return out.length > 0;
}

ParsedTrace parse_trace(const std::string& path, uint32_t page_size, uint64_t logical_pages) {
  if (page_size == 0 || logical_pages == 0) throw ConfigError("trace: page_size and capacity must be > 0");
  gzFile fh = gzopen(path.c_str(), "rb");
  if (!fh) throw IoError("cannot open trace '" + path + "'");

  ParsedTrace pt;
  std::vector<TraceRecord> records;
  std::string line;
  char buf[4096];
  bool eof = false;
  while (!eof) {
    line.clear();
    // Reassemble lines longer than the buffer.
    while (true) {
      if (!gzgets(fh, buf, sizeof buf)) {
        eof = true;
        break;
      }
      line += buf;
      if (!line.empty() && line.back() == '\n') break;
    }
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    if (line.empty()) continue;
    ++pt.report.lines;
    TraceRecord rec;
    if (parse_trace_line(line, rec))
      records.push_back(std::move(rec));
    else
      ++pt.report.malformed;
  }
  int errnum = 0;
  gzerror(fh, &errnum);
  gzclose(fh);
  if (errnum < 0) throw IoError("error reading trace '" + path + "'");

  if (pt.report.lines > 0 && pt.report.malformed * 100 > pt.report.lines)
    throw FormatError("trace '" + path + "': " + std::to_string(pt.report.malformed) + " of " +
                      std::to_string(pt.report.lines) + " lines malformed");

  std::stable_sort(records.begin(), records.end(),
                   [](const TraceRecord& a, const TraceRecord& b) { return a.timestamp < b.timestamp; });
  pt.report.records = records.size();
  const uint64_t t_first = records.empty() ? 0 : records.front().timestamp;
  for (const auto& r : records) {
    const uint64_t first = r.offset / page_size;
    const uint64_t n = (r.length + page_size - 1) / page_size;
    for (uint64_t i = 0; i < n; ++i)
      pt.accesses.push_back({(first + i) % logical_pages, r.opcode, double(r.timestamp - t_first)});
  }
  pt.report.page_accesses = pt.accesses.size();
  return pt;
}

void SyntheticSpec::validate() const {
  if (write_fraction < 0.0 || write_fraction > 1.0) throw ConfigError("write_fraction must be in [0,1]");
  if (skew < 0.0) throw ConfigError("skew must be >= 0");
  if (address_space < 1) throw ConfigError("address_space must be >= 1");
  if (inter_arrival_us < 0.0) throw ConfigError("inter_arrival_us must be >= 0");
}

SyntheticGenerator::SyntheticGenerator(const SyntheticSpec& spec) : spec_(spec), rng_(spec.seed) {
  spec_.validate();
  const uint64_t n = spec_.address_space;
  cdf_.resize(n);
  double acc = 0.0;
  for (uint64_t r = 0; r < n; ++r) {
    acc += std::pow(double(r + 1), -spec_.skew);
    cdf_[r] = acc;
  }
  for (auto& c : cdf_) c /= acc;
  cdf_.back() = 1.0;

  rank_to_page_.resize(n);
  std::iota(rank_to_page_.begin(), rank_to_page_.end(), uint64_t{0});
  // Fisher-Yates with our own draws so the permutation does not depend on
  // the standard library's shuffle.
  for (uint64_t i = n; i > 1; --i) {
    uint64_t j = rng_() % i;
    std::swap(rank_to_page_[i - 1], rank_to_page_[j]);
  }
}

double SyntheticGenerator::uniform() { return double(rng_() >> 11) * 0x1.0p-53; }

Access SyntheticGenerator::next() {
  const double x = uniform();
  const auto rank = static_cast<uint64_t>(std::upper_bound(cdf_.begin(), cdf_.end(), x) - cdf_.begin());
  Access a;
  a.page = rank_to_page_[std::min<uint64_t>(rank, cdf_.size() - 1)];
  a.op = uniform() < spec_.write_fraction ? OpCode::Write : OpCode::Read;
  a.arrival_us = double(issued_) * spec_.inter_arrival_us;
  ++issued_;
  return a;
}

std::vector<Access> generate_synthetic(const SyntheticSpec& spec) {
  SyntheticGenerator g(spec);
  std::vector<Access> out;
  out.reserve(spec.op_count);
  for (uint64_t i = 0; i < spec.op_count; ++i) out.push_back(g.next());
  return out;
}

}  // namespace pswl
