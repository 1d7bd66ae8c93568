#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pswl {

enum class RaidLevel : uint8_t { Raid0, Raid5, Raid6 };
enum class ScalingScheme : uint8_t { RR, FastScale, GSR, SDM };

std::string_view to_string(RaidLevel r);
std::string_view to_string(ScalingScheme s);
RaidLevel parse_raid_level(std::string_view s);
ScalingScheme parse_scaling_scheme(std::string_view s);
uint32_t parity_count(RaidLevel r);

struct Position {
  uint32_t disk = 0;
  uint32_t offset = 0;
  auto operator<=>(const Position&) const = default;
};

// Placement of logical stripe units (and parity) over the array's disks.
struct ArrayLayout {
  RaidLevel raid_level = RaidLevel::Raid0;
  uint32_t disk_count = 0;
  std::vector<Position> unit_pos;                 // logical unit -> position
  std::vector<uint32_t> unit_stripe;              // logical unit -> stripe id
  std::vector<std::vector<Position>> parity_pos;  // stripe -> parity positions

  uint64_t unit_count() const { return unit_pos.size(); }
  uint32_t stripe_count() const { return static_cast<uint32_t>(parity_pos.size()); }
  // Data units per disk.
  std::vector<uint64_t> disk_unit_counts() const;
  // Highest used offset + 1 on each disk (data or parity).
  std::vector<uint32_t> disk_extent() const;

  // Throws std::logic_error describing the first broken invariant.
  void check_invariants() const;
};

// Conventional rotated-parity layout of `units` data units over `disks` disks.
ArrayLayout make_layout(RaidLevel level, uint32_t disks, uint64_t units);

struct Move {
  uint32_t unit = 0;
  Position src;
  Position dst;
  bool operator==(const Move&) const = default;
};

struct MigrationPlan {
  std::vector<Move> moves;
  uint64_t parity_updates = 0;  // parity units that must be recomputed
};

struct ScalingResult {
  ArrayLayout target;
  MigrationPlan plan;
};

ScalingResult plan_rr(const ArrayLayout& old, uint32_t k_s);
// RAID-0 only; throws UnsupportedRaidLevel otherwise.
ScalingResult plan_fastscale(const ArrayLayout& old, uint32_t k_s);
// GSR-style, RAID-5 only.
ScalingResult plan_gsr(const ArrayLayout& old, uint32_t k_s);
// SDM-style, RAID-6 only.
ScalingResult plan_sdm(const ArrayLayout& old, uint32_t k_s);
ScalingResult plan_scaling(ScalingScheme scheme, const ArrayLayout& old, uint32_t k_s);

// Parity units whose stripe changed membership or placement (recomputed on scaling).
std::vector<Position> parity_rebuild_positions(const ArrayLayout& old, const ArrayLayout& target);

// Unit positions after executing plan.moves on old (stripes/parity taken from old).
ArrayLayout apply_plan(const ArrayLayout& old, const MigrationPlan& plan);

// Line format: "# parity_updates N" then one "unit src_disk src_off dst_disk dst_off" per move.
std::string serialize_plan(const MigrationPlan& plan);
MigrationPlan parse_plan(std::string_view text);

}  // namespace pswl
