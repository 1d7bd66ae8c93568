#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pswl {

struct DeviceGeometry {
  uint32_t blocks_per_disk = 64;
  uint32_t pages_per_block = 8;
  uint32_t max_pe_cycles = 3000;
  uint32_t page_size = 4096;

  uint64_t total_pages() const {
    return uint64_t(blocks_per_disk) * pages_per_block;
  }
  // Throws ConfigError when any count is zero.
  void validate() const;
};

struct FlashOptions {
  double overprovision = 0.10;  // fraction of physical pages hidden from the host
  double gc_threshold = 0.05;   // fraction of blocks that must stay free
};

enum class PageState : uint8_t { Free, Valid, Invalid };

struct WriteOutcome {
  uint32_t pages_programmed = 0;  // host page + GC relocations
  uint32_t gc_erases = 0;
  uint32_t gc_relocations = 0;
};

// One SSD at page granularity with a page-level FTL and greedy GC.
class Device {
 public:
  static constexpr uint32_t kUnmapped = UINT32_MAX;

  explicit Device(DeviceGeometry geo, FlashOptions opts = {});

  // Out-of-place write of one logical page; may run GC.
  WriteOutcome host_write(uint64_t lpn);
  // Drops the mapping of lpn (its physical page turns Invalid).
  void trim(uint64_t lpn);

  bool is_mapped(uint64_t lpn) const { return lpn < l2p_.size() && l2p_[lpn] != kUnmapped; }
  uint64_t logical_capacity() const { return l2p_.size(); }

  // Sets every block's erase count so the per-block average equals avg.
  void set_uniform_wear(double avg);

  // Average erase count per block (the t_i wear figure).
  double pe_count() const { return double(total_erases_) / geo_.blocks_per_disk; }
  uint64_t total_erases() const { return total_erases_; }
  uint32_t block_erase_count(uint32_t b) const { return blocks_[b].erase_count; }
  uint32_t block_valid_count(uint32_t b) const { return blocks_[b].valid; }

  uint32_t free_blocks() const { return free_blocks_; }
  uint32_t gc_threshold_blocks() const { return gc_threshold_blocks_; }
  uint64_t valid_pages() const { return valid_pages_; }
  uint64_t invalid_pages() const { return invalid_pages_; }
  uint64_t free_pages() const;
  uint64_t mapped_lpns() const { return mapped_; }
  PageState page_state(uint64_t ppn) const { return page_state_[ppn]; }

  const DeviceGeometry& geometry() const { return geo_; }

 private:
  struct Block {
    uint32_t erase_count = 0;
    uint32_t valid = 0;
    uint32_t write_ptr = 0;  // next page to program
  };

  bool is_free(uint32_t b) const;
  bool is_worn(uint32_t b) const { return blocks_[b].erase_count >= geo_.max_pe_cycles; }
  void open_next_block();
  uint32_t program(uint32_t lpn);  // returns ppn
  void invalidate(uint32_t ppn);
  void collect_garbage(WriteOutcome& out);

  DeviceGeometry geo_;
  std::vector<Block> blocks_;
  std::vector<PageState> page_state_;
  std::vector<uint32_t> l2p_;
  std::vector<uint32_t> p2l_;
  uint32_t active_ = 0;
  uint32_t free_blocks_ = 0;
  uint32_t gc_threshold_blocks_ = 1;
  uint64_t valid_pages_ = 0;
  uint64_t invalid_pages_ = 0;
  uint64_t mapped_ = 0;
  uint64_t total_erases_ = 0;
};

// Population standard deviation of per-device pe_count.
double erase_count_stddev(std::span<const double> pe_counts);
double erase_count_stddev(std::span<const Device> devs);

}  // namespace pswl
