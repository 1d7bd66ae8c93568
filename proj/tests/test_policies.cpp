#include <gtest/gtest.h>

#include <set>

#include "pswl/errors.hpp"
#include "pswl/policies.hpp"
#include "pswl/simkernel.hpp"
#include "toy.hpp"

using namespace pswl;

namespace {

// 2+1 RAID-0 array after round-robin scaling with per-disk initial wear.
struct ToyArray {
  ArrayLayout old;
  ArrayState array;
  AccessWindow window{64};

  ToyArray(double w0, double w1, double w2)
      : old(make_layout(RaidLevel::Raid0, 2, 24)), array(setup(), old) {
    array.set_initial_wear(0, w0);
    array.set_initial_wear(1, w1);
    array.set_initial_wear(2, w2);
    const auto r = plan_scaling(ScalingScheme::RR, old, 1);
    array.apply_scaling(r.target, r.plan, 0.0);
  }

  static ArraySetup setup() {
    ArraySetup s;
    s.geometry = {16, 8, 3000, 4096};
    s.k_o = 2;
    s.k_s = 1;
    return s;
  }

  // Page `hot` referenced repeatedly after one pass over a few others.
  void script(PageId hot) {
    for (PageId p = 0; p < 12; ++p)
      if (p != hot) window.record_access(p);
    for (int i = 0; i < 6; ++i) window.record_access(hot);
  }
};

PolicyParams params(double k_p = 1000.0) {
  PolicyParams p;
  p.failure.mu = std::log(300.0);
  p.lifetime.k_p = k_p;
  p.controller.t0 = 16;
  return p;
}

// Replays accesses through a policy the way the simulation kernel does and
// checks every migration it proposes.
struct Replay {
  uint64_t executed = 0;
  uint64_t cold_moves = 0;
  uint64_t zone_violations = 0;
  uint64_t stripe_conflicts = 0;  // stripes with two members on one disk at the end
  std::vector<PolicyDecision> log;
};

Replay replay(PolicyKind kind, const ExperimentConfig& cfg) {
  const auto accesses = build_workload(cfg);
  const ArrayLayout old = make_layout(cfg.raid_level, cfg.k_o, cfg.unit_count());
  ArrayState a(cfg.array_setup(), old);
  const double t = initial_wear_for_probability(cfg.initial_wear.probability, cfg.params.failure);
  for (uint32_t d = 0; d < cfg.k_o; ++d) a.set_initial_wear(d, t);
  const auto sr = plan_scaling(cfg.scheme, old, cfg.k_s);
  a.apply_scaling(sr.target, sr.plan, 0.0);
  AccessWindow w(cfg.params.hotness.window);
  auto policy = make_policy(kind, cfg.params);
  ConservativeZone zone(a.unit_count(), cfg.params.hotness.k_ban_base, cfg.params.hotness.k_ban_max,
                        cfg.params.controller.lambda_restart);
  HotnessSnapshot snap;
  double gap = 0.0;
  Replay out;
  auto execute = [&](const PolicyDecision& d) {
    if (!d.is_migrate()) return;
    if (snap.cls.size() > d.page && snap.cls[d.page] == HotnessClass::Cold) ++out.cold_moves;
    if (!migration_allowed(d.page, a.is_extended(d.dst), zone, gap)) ++out.zone_violations;
    if (!a.migrate(d.page, d.dst, 0.0)) return;
    ++out.executed;
    out.log.push_back(d);
    policy->on_migrated(d);
  };
  auto sample = [&] {
    snap = take_snapshot(w, a, cfg.params.hotness);
    for (const auto& d : policy->on_sample(a, w)) execute(d);
    gap = policy->telemetry().rel_gap;
    zone.update(snap.warm_ranked, gap);
  };
  sample();
  uint64_t events = 0;
  for (const Access& acc : accesses) {
    w.record_access(static_cast<PageId>(acc.page));
    if (acc.op == OpCode::Write) {
      a.host_write(static_cast<PageId>(acc.page), acc.arrival_us);
      execute(policy->on_host_write(a, static_cast<PageId>(acc.page)));
    } else {
      a.host_read(static_cast<PageId>(acc.page), acc.arrival_us);
    }
    if (++events % cfg.params.controller.t0 == 0) sample();
  }
  for (uint32_t st = 0; st < sr.target.stripe_count(); ++st) {
    if (sr.target.parity_pos[st].empty()) continue;
    std::set<uint32_t> disks;
    for (const auto& q : sr.target.parity_pos[st]) disks.insert(q.disk);
    for (PageId u = 0; u < a.unit_count(); ++u)
      if (sr.target.unit_stripe[u] == st && !disks.insert(a.disk_of(u)).second) {
        ++out.stripe_conflicts;
        break;
      }
  }
  return out;
}

}  // namespace

TEST(PolicyKind, NamesRoundTrip) {
  for (auto k : {PolicyKind::PsWl, PolicyKind::PsWlAblation, PolicyKind::Swans, PolicyKind::LazyWl,
                 PolicyKind::Edm})
    EXPECT_EQ(parse_policy_kind(to_string(k)), k);
  EXPECT_THROW(parse_policy_kind("nope"), ConfigError);
}

TEST(Policies, ZeroGapMeansNoAction) {
  for (auto k : {PolicyKind::PsWl, PolicyKind::PsWlAblation, PolicyKind::LazyWl}) {
    ToyArray t(500, 500, 500);
    t.script(0);
    auto p = make_policy(k, params());
    p->on_sample(t.array, t.window);
    EXPECT_EQ(p->telemetry().u, 0.0) << to_string(k);
    for (PageId page = 0; page < 12; ++page)
      EXPECT_FALSE(p->on_host_write(t.array, page).is_migrate()) << to_string(k);
  }
}

TEST(PsWl, LargeGapMovesHotPageToExtendedDisk) {
  ToyArray t(1000, 1000, 0);
  const PageId hot = 0;
  ASSERT_LT(t.array.disk_of(hot), 2u);
  t.script(hot);
  auto p = make_policy(PolicyKind::PsWl, params());
  p->on_sample(t.array, t.window);
  ASSERT_EQ(p->telemetry().phase, ControllerPhase::Chasing);
  const auto d = p->on_host_write(t.array, hot);
  ASSERT_TRUE(d.is_migrate());
  EXPECT_EQ(d.page, hot);
  EXPECT_EQ(d.src, t.array.disk_of(hot));
  EXPECT_EQ(d.dst, 2u);
}

TEST(PsWl, AblationPicksSameDestinationWithoutPenalty) {
  for (double w2 : {0.0, 300.0, 900.0}) {
    ToyArray a(1000, 800, w2), b(1000, 800, w2);
    a.script(0);
    b.script(0);
    auto ps = make_policy(PolicyKind::PsWl, params(0.0));
    auto ab = make_policy(PolicyKind::PsWlAblation, params(0.0));
    ps->on_sample(a.array, a.window);
    ab->on_sample(b.array, b.window);
    const auto x = ps->on_host_write(a.array, 0), y = ab->on_host_write(b.array, 0);
    EXPECT_EQ(x.is_migrate(), y.is_migrate());
    EXPECT_EQ(x.dst, y.dst);
    EXPECT_EQ(x.page, y.page);
  }
}

TEST(PsWl, AblationEquivalentDecisionSequenceWithoutPenalty) {
  auto cfg = toy::config();
  cfg.params.lifetime.k_p = 0.0;
  const Replay ps = replay(PolicyKind::PsWl, cfg);
  const Replay ab = replay(PolicyKind::PsWlAblation, cfg);
  ASSERT_GT(ps.executed, 0u);
  ASSERT_EQ(ps.log.size(), ab.log.size());
  for (size_t i = 0; i < ps.log.size(); ++i) {
    EXPECT_EQ(ps.log[i].page, ab.log[i].page);
    EXPECT_EQ(ps.log[i].src, ab.log[i].src);
    EXPECT_EQ(ps.log[i].dst, ab.log[i].dst);
  }
}

TEST(PsWl, NeverMovesColdPagesOrZoneMembers) {
  for (auto scheme : {ScalingScheme::RR, ScalingScheme::GSR}) {
    auto cfg = toy::config();
    cfg.scheme = scheme;
    if (scheme == ScalingScheme::GSR) cfg.raid_level = RaidLevel::Raid5;
    const Replay r = replay(PolicyKind::PsWl, cfg);
    EXPECT_GT(r.executed, 0u);
    EXPECT_EQ(r.cold_moves, 0u);
    EXPECT_EQ(r.zone_violations, 0u);
  }
}

TEST(Policies, SwansTriggersAtLeastAsOftenAsPsWl) {
  const auto cfg = toy::config();
  const uint64_t ps = replay(PolicyKind::PsWl, cfg).executed;
  const uint64_t sw = replay(PolicyKind::Swans, cfg).executed;
  EXPECT_GE(sw, ps);
}

TEST(Policies, MigrationsKeepParityStripesOnDistinctDisks) {
  for (auto kind : {PolicyKind::PsWl, PolicyKind::Swans, PolicyKind::LazyWl, PolicyKind::Edm}) {
    auto cfg = toy::config(kind);
    cfg.raid_level = RaidLevel::Raid6;
    cfg.scheme = ScalingScheme::SDM;
    cfg.k_o = 4;
    cfg.k_s = 2;
    const Replay r = replay(kind, cfg);
    EXPECT_GT(r.executed, 0u) << to_string(kind);
    EXPECT_EQ(r.stripe_conflicts, 0u) << to_string(kind);
  }
}

TEST(GroupGap, Arithmetic) {
  const auto g = group_gap({100, 300, 0, 100}, 2);
  EXPECT_EQ(g.lo, 200.0);
  EXPECT_EQ(g.ls, 50.0);
  EXPECT_EQ(g.error, 150.0);
  EXPECT_DOUBLE_EQ(g.rel, 0.75);
  EXPECT_EQ(group_gap({5, 5}, 2).rel, 0.0);
}

TEST(WlIoRatio, Examples) {
  IoCounters c;
  c.host_writes = 100;
  EXPECT_EQ(wl_io_ratio(c), 0.0);
  c.host_writes = 90;
  c.wl_migration_ios = 10;
  EXPECT_DOUBLE_EQ(wl_io_ratio(c), 0.1);
  EXPECT_THROW(wl_io_ratio(IoCounters{}), DivisionByZero);
  double last = wl_io_ratio(c);
  for (int i = 0; i < 10; ++i) {
    c.host_writes += 50;
    const double j = wl_io_ratio(c);
    EXPECT_LE(j, last);
    last = j;
  }
}
