#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "pswl/array_state.hpp"
#include "pswl/hotness.hpp"
#include "pswl/reliability.hpp"
#include "pswl/wl_controller.hpp"

namespace pswl {

enum class PolicyKind : uint8_t { PsWl, PsWlAblation, Swans, LazyWl, Edm };
std::string_view to_string(PolicyKind k);
PolicyKind parse_policy_kind(std::string_view s);

struct PolicyDecision {
  enum class Kind : uint8_t { NoAction, Migrate };
  Kind kind = Kind::NoAction;
  PageId page = 0;
  uint32_t src = 0;
  uint32_t dst = 0;
  bool trigger_counted = false;

  static PolicyDecision migrate(PageId p, uint32_t src, uint32_t dst) {
    return {Kind::Migrate, p, src, dst, true};
  }
  bool is_migrate() const { return kind == Kind::Migrate; }
};

struct PolicyParams {
  HotnessParams hotness;
  ControllerParams controller;
  LifetimeParams lifetime;
  FailureModelParams failure;
  double swans_threshold = 0.02;  // relative P/E std-dev that triggers a SWANS scan
  double lazy_k_ban = 0.2;        // static conservative-zone fraction for Lazy-WL
  double edm_threshold = 0.05;    // relative max-min P/E gap that triggers EDM
  uint32_t edm_batch = 1;         // migrations per EDM scan
  bool ps_warm_fallback = true;   // PS-WL may move unprotected warm pages when no hot page is left
  uint32_t migrations_per_period = 1;  // cap for the PID-gated policies (PS-WL, Lazy-WL)
  void validate() const;
};

// Normalised hotness of every unit at one sampling instant plus per-disk
// aggregates. A disk's hotness component is n * (its share of that
// component's mass) - 1: zero for an even spread, negative when colder.
struct HotnessSnapshot {
  std::vector<HotnessVector> h;
  std::vector<HotnessClass> cls;
  std::vector<std::vector<PageId>> hot_by_disk;   // ExtremelyHot, descending hotness
  std::vector<std::vector<PageId>> warm_by_disk;  // Warm, descending hotness
  std::vector<PageId> warm_ranked;
  std::vector<PageId> nonhot_ranked;              // Warm + ExtremelyHot, descending
  std::vector<std::array<double, 3>> disk_mass;
  std::array<double, 3> total_mass{0, 0, 0};
  NormRanges ranges;

  HotnessVector disk_vector(uint32_t d) const;
  double disk_hotness(uint32_t d) const { return disk_vector(d).scalar(); }
  void move(PageId p, uint32_t src, uint32_t dst);
};

HotnessSnapshot take_snapshot(const AccessWindow& w, const ArrayState& a, const HotnessParams& hp);

struct ControllerTelemetry {
  double e = 0.0;        // error fed to the control law (policy specific)
  double rel_gap = 0.0;  // relative lifetime gap between groups
  double u = 0.0;
  PidGains gains{0.0, 0.0, 0.0};
  ControllerPhase phase = ControllerPhase::Idle;
};

// One inter-disk wear-leveling policy.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyKind kind() const = 0;

  // Called every sampling period; returned migrations run immediately.
  virtual std::vector<PolicyDecision> on_sample(const ArrayState& a, const AccessWindow& w) = 0;
  // Called after each host write.
  virtual PolicyDecision on_host_write(const ArrayState&, PageId) { return {}; }
  // Notification that a decision was executed.
  virtual void on_migrated(const PolicyDecision&) {}

  virtual ControllerTelemetry telemetry() const = 0;
  // True while the policy considers the array balanced.
  virtual bool converged() const = 0;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyParams& params);

// Group means of a per-disk metric (originals, extendeds) and |Lo-Ls|/Lo.
struct GroupGap {
  double lo = 0.0;
  double ls = 0.0;
  double error = 0.0;  // lo - ls
  double rel = 0.0;    // |lo - ls| / lo, 0 when lo <= 0
};
GroupGap group_gap(const std::vector<double>& per_disk, uint32_t k_o);

}  // namespace pswl
