#include "pswl/array_state.hpp"

#include <algorithm>
#include <stdexcept>

#include "pswl/errors.hpp"

namespace pswl {

void LatencyModel::validate() const {
  if (read_page < 0 || program_page < 0 || erase_block < 0)
    throw ConfigError("latency values must be >= 0");
}

std::vector<std::string> LatencyModel::lint() const {
  std::vector<std::string> w;
  if (program_page < read_page) w.emplace_back("latency: program_page < read_page");
  if (erase_block < program_page) w.emplace_back("latency: erase_block < program_page");
  return w;
}

double response_time(double arrival, DiskQueue& q, double service) {
  const double start = std::max(arrival, q.busy_until);
  const double done = start + service;
  q.busy_until = done;
  ++q.served_ops;
  q.summed_response += done - arrival;
  return done - arrival;
}

double wl_io_ratio(const IoCounters& c) {
  const uint64_t total = c.total();
  if (total == 0) throw DivisionByZero("wl_io_ratio: no I/O recorded");
  return double(c.wl_migration_ios) / double(total);
}

ArrayState::ArrayState(const ArraySetup& setup, const ArrayLayout& old_layout)
    : lat_(setup.latency), k_o_(setup.k_o), k_s_(setup.k_s) {
  if (old_layout.disk_count != k_o_) throw ConfigError("old layout must span the original disks");
  const uint32_t n = k_o_ + k_s_;
  devices_.reserve(n);
  for (uint32_t d = 0; d < n; ++d) devices_.emplace_back(setup.geometry, setup.flash);
  queues_.resize(n);
  disk_writes_.assign(n, 0);
  free_lpns_.resize(n);

  const uint64_t cap = devices_[0].logical_capacity();
  for (uint32_t e : old_layout.disk_extent())
    if (e > cap)
      throw ConfigError("data set does not fit: layout needs " + std::to_string(e) +
                        " pages per disk, logical capacity is " + std::to_string(cap));

  placement_ = old_layout.unit_pos;
  unit_stripe_ = old_layout.unit_stripe;
  parity_pos_ = old_layout.parity_pos;
  // Pre-existing data is written without charging I/O or latency.
  for (const auto& p : placement_) devices_[p.disk].host_write(p.offset);
  for (const auto& ps : parity_pos_)
    for (const auto& p : ps) devices_[p.disk].host_write(p.offset);
}

void ArrayState::set_initial_wear(uint32_t disk, double pe) { devices_.at(disk).set_uniform_wear(pe); }

std::vector<double> ArrayState::pe_counts() const {
  std::vector<double> v;
  v.reserve(devices_.size());
  for (const auto& d : devices_) v.push_back(d.pe_count());
  return v;
}

double ArrayState::write_page(uint32_t disk, uint32_t lpn, double arrival) {
  const WriteOutcome w = devices_[disk].host_write(lpn);
  io_.gc_relocation_ios += 2ull * w.gc_relocations;
  const double service = lat_.program_page * w.pages_programmed +
                         lat_.read_page * w.gc_relocations + lat_.erase_block * w.gc_erases;
  return response_time(arrival, queues_[disk], service);
}

double ArrayState::read_page(uint32_t disk, double arrival) {
  return response_time(arrival, queues_[disk], lat_.read_page);
}

void ArrayState::apply_scaling(const ArrayLayout& target, const MigrationPlan& plan, double now) {
  if (target.disk_count != disk_count()) throw ConfigError("target layout disk count mismatch");
  const uint64_t cap = devices_[0].logical_capacity();
  for (uint32_t e : target.disk_extent())
    if (e > cap) throw ConfigError("scaled layout exceeds device logical capacity");

  ArrayLayout old;
  old.raid_level = target.raid_level;
  old.disk_count = k_o_;
  old.unit_pos = placement_;
  old.unit_stripe = unit_stripe_;
  old.parity_pos = parity_pos_;
  const auto rebuild = parity_rebuild_positions(old, target);

  std::set<Position> keep(target.unit_pos.begin(), target.unit_pos.end());
  for (const auto& ps : target.parity_pos) keep.insert(ps.begin(), ps.end());

  // Read every moving unit first, then drop stale copies, then program.
  for (const auto& m : plan.moves) {
    read_page(m.src.disk, now);
    ++io_.scaling_migration_ios;
  }
  for (const auto& m : plan.moves)
    if (!keep.count(m.src)) devices_[m.src.disk].trim(m.src.offset);
  for (const auto& ps : parity_pos_)
    for (const auto& p : ps)
      if (!keep.count(p)) devices_[p.disk].trim(p.offset);
  for (const auto& m : plan.moves) {
    write_page(m.dst.disk, m.dst.offset, now);
    ++io_.scaling_migration_ios;
  }
  for (const auto& p : rebuild) {
    write_page(p.disk, p.offset, now);
    ++io_.scaling_migration_ios;
  }

  placement_ = target.unit_pos;
  unit_stripe_ = target.unit_stripe;
  parity_pos_ = target.parity_pos;
  stripe_units_.assign(parity_pos_.size(), {});
  for (PageId u = 0; u < unit_stripe_.size(); ++u) stripe_units_[unit_stripe_[u]].push_back(u);

  std::vector<std::vector<uint8_t>> used(disk_count(), std::vector<uint8_t>(cap, 0));
  for (const auto& p : keep) used[p.disk][p.offset] = 1;
  for (uint32_t d = 0; d < disk_count(); ++d) {
    free_lpns_[d].clear();
    for (uint32_t l = 0; l < cap; ++l)
      if (!used[d][l]) free_lpns_[d].insert(free_lpns_[d].end(), l);
  }
  scaling_done_ = true;
}

double ArrayState::host_write(PageId unit, double arrival) {
  const Position p = placement_[unit];
  double r = write_page(p.disk, p.offset, arrival);
  ++io_.host_writes;
  ++disk_writes_[p.disk];
  for (const auto& pp : parity_pos_[unit_stripe_[unit]]) {
    r = std::max(r, write_page(pp.disk, pp.offset, arrival));
    ++io_.parity_writes;
    ++disk_writes_[pp.disk];
  }
  return r;
}

double ArrayState::host_read(PageId unit, double arrival) {
  ++io_.host_reads;
  return read_page(placement_[unit].disk, arrival);
}

bool ArrayState::can_host(PageId unit, uint32_t dst) const {
  const uint32_t s = unit_stripe_[unit];
  if (parity_pos_[s].empty()) return true;
  for (const auto& p : parity_pos_[s])
    if (p.disk == dst) return false;
  for (PageId u : stripe_units_[s])
    if (u != unit && placement_[u].disk == dst) return false;
  return true;
}

bool ArrayState::migrate(PageId unit, uint32_t dst, double now) {
  const Position src = placement_[unit];
  if (dst == src.disk || dst >= disk_count() || free_lpns_[dst].empty()) return false;
  if (!can_host(unit, dst)) return false;
  const uint32_t lpn = *free_lpns_[dst].begin();
  free_lpns_[dst].erase(free_lpns_[dst].begin());
  const double r = read_page(src.disk, now);
  write_page(dst, lpn, now + r);
  devices_[src.disk].trim(src.offset);
  free_lpns_[src.disk].insert(src.offset);
  placement_[unit] = {dst, lpn};
  io_.wl_migration_ios += 2;
  return true;
}

void ArrayState::check_consistency() const {
  std::vector<uint64_t> expect(disk_count(), 0);
  for (const auto& p : placement_) {
    if (!devices_[p.disk].is_mapped(p.offset)) throw std::logic_error("unit position not mapped");
    ++expect[p.disk];
  }
  for (const auto& ps : parity_pos_)
    for (const auto& p : ps) ++expect[p.disk];
  for (uint32_t d = 0; d < disk_count(); ++d) {
    if (devices_[d].mapped_lpns() != expect[d])
      throw std::logic_error("disk " + std::to_string(d) + " maps unexpected pages");
    if (devices_[d].valid_pages() != devices_[d].mapped_lpns())
      throw std::logic_error("valid pages differ from mapped pages");
  }
}

}  // namespace pswl
