#include "pswl/flash_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pswl/errors.hpp"

namespace pswl {

void DeviceGeometry::validate() const {
  if (blocks_per_disk < 1 || pages_per_block < 1 || max_pe_cycles < 1 || page_size < 1)
    throw ConfigError("geometry: all counts must be >= 1");
}

Device::Device(DeviceGeometry geo, FlashOptions opts) : geo_(geo) {
  geo_.validate();
  if (opts.overprovision < 0.0 || opts.overprovision >= 1.0)
    throw ConfigError("overprovision must be in [0, 1)");
  if (opts.gc_threshold < 0.0 || opts.gc_threshold >= 1.0)
    throw ConfigError("gc_threshold must be in [0, 1)");

  const uint64_t pages = geo_.total_pages();
  blocks_.resize(geo_.blocks_per_disk);
  page_state_.assign(pages, PageState::Free);
  p2l_.assign(pages, kUnmapped);
  auto logical = static_cast<uint64_t>(std::floor(double(pages) * (1.0 - opts.overprovision)));
  l2p_.assign(std::max<uint64_t>(logical, 1), kUnmapped);

  gc_threshold_blocks_ = std::max<uint32_t>(
      1, static_cast<uint32_t>(std::lround(opts.gc_threshold * geo_.blocks_per_disk)));
  // Block 0 starts as the active block.
  active_ = 0;
  free_blocks_ = geo_.blocks_per_disk - 1;
}

bool Device::is_free(uint32_t b) const {
  return b != active_ && blocks_[b].write_ptr == 0 && !is_worn(b);
}

uint64_t Device::free_pages() const {
  return geo_.total_pages() - valid_pages_ - invalid_pages_;
}

void Device::open_next_block() {
  const uint32_t n = geo_.blocks_per_disk;
  for (uint32_t step = 1; step <= n; ++step) {
    uint32_t b = (active_ + step) % n;
    if (is_free(b)) {
      active_ = b;
      --free_blocks_;
      return;
    }
  }
  throw DeviceWornOut("no free block left to program");
}

uint32_t Device::program(uint32_t lpn) {
  if (blocks_[active_].write_ptr >= geo_.pages_per_block) open_next_block();
  Block& blk = blocks_[active_];
  uint32_t ppn = active_ * geo_.pages_per_block + blk.write_ptr;
  ++blk.write_ptr;
  ++blk.valid;
  page_state_[ppn] = PageState::Valid;
  p2l_[ppn] = lpn;
  l2p_[lpn] = ppn;
  ++valid_pages_;
  return ppn;
}

void Device::invalidate(uint32_t ppn) {
  page_state_[ppn] = PageState::Invalid;
  p2l_[ppn] = kUnmapped;
  --blocks_[ppn / geo_.pages_per_block].valid;
  --valid_pages_;
  ++invalid_pages_;
}

WriteOutcome Device::host_write(uint64_t lpn) {
  if (lpn >= l2p_.size())
    throw CapacityExceeded("lpn " + std::to_string(lpn) + " beyond logical capacity " +
                           std::to_string(l2p_.size()));
  WriteOutcome out;
  auto l = static_cast<uint32_t>(lpn);
  if (l2p_[l] != kUnmapped)
    invalidate(l2p_[l]);
  else
    ++mapped_;
  program(l);
  out.pages_programmed = 1;
  collect_garbage(out);
  return out;
}

void Device::trim(uint64_t lpn) {
  if (lpn >= l2p_.size() || l2p_[lpn] == kUnmapped) return;
  invalidate(l2p_[lpn]);
  l2p_[lpn] = kUnmapped;
  --mapped_;
}

void Device::collect_garbage(WriteOutcome& out) {
  const uint32_t ppb = geo_.pages_per_block;
  while (free_blocks_ < gc_threshold_blocks_) {
    uint32_t victim = UINT32_MAX;
    uint32_t best_valid = ppb;  // a block with no invalid page frees nothing
    bool worn_candidate = false;
    for (uint32_t b = 0; b < geo_.blocks_per_disk; ++b) {
      const Block& blk = blocks_[b];
      if (b == active_ || blk.write_ptr == 0) continue;
      if (blk.valid == blk.write_ptr) continue;  // nothing invalid to reclaim
      if (is_worn(b)) {
        worn_candidate = true;
        continue;
      }
      if (blk.valid < best_valid) {
        best_valid = blk.valid;
        victim = b;
      }
    }
    if (victim == UINT32_MAX) {
      if (worn_candidate) throw DeviceWornOut("every reclaimable block reached max P/E cycles");
      return;
    }

    const uint32_t first = victim * ppb;
    for (uint32_t p = first; p < first + blocks_[victim].write_ptr; ++p) {
      if (page_state_[p] != PageState::Valid) continue;
      uint32_t lpn = p2l_[p];
      invalidate(p);
      program(lpn);
      ++out.pages_programmed;
      ++out.gc_relocations;
    }

    // Erase.
    Block& blk = blocks_[victim];
    invalid_pages_ -= blk.write_ptr;
    for (uint32_t p = first; p < first + ppb; ++p) page_state_[p] = PageState::Free;
    blk.write_ptr = 0;
    blk.valid = 0;
    ++blk.erase_count;
    ++total_erases_;
    ++out.gc_erases;
    if (!is_worn(victim)) ++free_blocks_;
  }
}

void Device::set_uniform_wear(double avg) {
  if (avg < 0.0) throw DomainError("initial wear must be >= 0");
  const uint32_t n = geo_.blocks_per_disk;
  auto total = static_cast<uint64_t>(std::llround(avg * n));
  uint64_t base = total / n;
  uint64_t extra = total % n;
  if (base + (extra ? 1 : 0) > geo_.max_pe_cycles)
    throw DomainError("initial wear exceeds max_pe_cycles");
  total_erases_ = 0;
  free_blocks_ = 0;
  for (uint32_t b = 0; b < n; ++b) {
    blocks_[b].erase_count = static_cast<uint32_t>(base + (b < extra ? 1 : 0));
    total_erases_ += blocks_[b].erase_count;
  }
  for (uint32_t b = 0; b < n; ++b)
    if (is_free(b)) ++free_blocks_;
}

double erase_count_stddev(std::span<const double> pe_counts) {
  if (pe_counts.empty()) return 0.0;
  double mean = 0.0;
  for (double v : pe_counts) mean += v;
  mean /= double(pe_counts.size());
  double acc = 0.0;
  for (double v : pe_counts) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / double(pe_counts.size()));
}

double erase_count_stddev(std::span<const Device> devs) {
  std::vector<double> v;
  v.reserve(devs.size());
  for (const auto& d : devs) v.push_back(d.pe_count());
  return erase_count_stddev(v);
}

}  // namespace pswl
