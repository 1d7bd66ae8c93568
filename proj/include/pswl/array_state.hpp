#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "pswl/flash_model.hpp"
#include "pswl/hotness.hpp"
#include "pswl/scaling.hpp"

namespace pswl {

struct LatencyModel {
  double read_page = 50.0;       // us
  double program_page = 500.0;   // us
  double erase_block = 3000.0;   // us
  void validate() const;
  // Non-fatal ordering warnings (erase >= program >= read expected).
  std::vector<std::string> lint() const;
};

struct DiskQueue {
  double busy_until = 0.0;
  uint64_t served_ops = 0;
  double summed_response = 0.0;
};

// FCFS service on one disk; returns completion - arrival and advances the queue.
double response_time(double arrival, DiskQueue& q, double service);

struct IoCounters {
  uint64_t host_reads = 0;
  uint64_t host_writes = 0;
  uint64_t parity_writes = 0;
  uint64_t scaling_migration_ios = 0;  // reads + programs (incl. parity rebuild) during redistribution
  uint64_t wl_migration_ios = 0;       // reads + programs issued by wear leveling
  uint64_t gc_relocation_ios = 0;      // reads + programs of valid pages moved by GC

  uint64_t host_ios() const { return host_reads + host_writes; }
  uint64_t migration_ios() const { return scaling_migration_ios + wl_migration_ios; }
  uint64_t total() const {
    return host_ios() + parity_writes + migration_ios() + gc_relocation_ios;
  }
};

// J = wear-leveling page I/Os / total page I/Os. Throws DivisionByZero when total is 0.
double wl_io_ratio(const IoCounters& c);

struct ArraySetup {
  DeviceGeometry geometry;
  FlashOptions flash;
  LatencyModel latency;
  uint32_t k_o = 3;
  uint32_t k_s = 1;
};

// The SSD array after scaling: devices, unit placement, per-disk queues and
// I/O accounting. Unit placement starts from the scaled layout and changes as
// wear leveling migrates units.
class ArrayState {
 public:
  ArrayState(const ArraySetup& setup, const ArrayLayout& old_layout);

  void set_initial_wear(uint32_t disk, double pe);
  // Executes a redistribution plan at time `now` (I/O charged to the queues).
  void apply_scaling(const ArrayLayout& target, const MigrationPlan& plan, double now);

  // Host I/O; returns the request response time (max over the disks touched).
  double host_write(PageId unit, double arrival);
  double host_read(PageId unit, double arrival);
  // Wear-leveling move of one unit to dst (lowest free slot). Returns false if
  // dst is full or already holds a member of the unit's parity stripe.
  bool migrate(PageId unit, uint32_t dst, double now);
  // True when moving unit onto dst keeps its stripe on distinct disks (always
  // true without parity).
  bool can_host(PageId unit, uint32_t dst) const;

  uint32_t disk_count() const { return static_cast<uint32_t>(devices_.size()); }
  uint32_t k_o() const { return k_o_; }
  uint32_t k_s() const { return k_s_; }
  bool is_extended(uint32_t disk) const { return disk >= k_o_; }
  uint64_t unit_count() const { return placement_.size(); }
  uint32_t disk_of(PageId unit) const { return placement_[unit].disk; }
  Position position_of(PageId unit) const { return placement_[unit]; }
  std::vector<double> pe_counts() const;
  const std::vector<Device>& devices() const { return devices_; }
  const std::vector<DiskQueue>& queues() const { return queues_; }
  const IoCounters& counters() const { return io_; }
  // Host page writes landed on each disk (data + parity) since construction.
  const std::vector<uint64_t>& disk_writes() const { return disk_writes_; }
  uint64_t free_slots(uint32_t disk) const { return free_lpns_[disk].size(); }
  bool scaling_done() const { return scaling_done_; }

  // Cross-checks placement against device mappings; throws std::logic_error.
  void check_consistency() const;

 private:
  double write_page(uint32_t disk, uint32_t lpn, double arrival);
  double read_page(uint32_t disk, double arrival);

  LatencyModel lat_;
  uint32_t k_o_;
  uint32_t k_s_;
  std::vector<Device> devices_;
  std::vector<DiskQueue> queues_;
  std::vector<Position> placement_;
  std::vector<uint32_t> unit_stripe_;
  std::vector<std::vector<Position>> parity_pos_;
  std::vector<std::vector<PageId>> stripe_units_;
  std::vector<std::set<uint32_t>> free_lpns_;
  std::vector<uint64_t> disk_writes_;
  IoCounters io_;
  bool scaling_done_ = false;
};

}  // namespace pswl
