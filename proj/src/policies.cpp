#include "pswl/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pswl/errors.hpp"
#include "pswl/flash_model.hpp"

namespace pswl {

std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::PsWl: return "pswl";
    case PolicyKind::PsWlAblation: return "pswl-ablation";
    case PolicyKind::Swans: return "swans";
    case PolicyKind::LazyWl: return "lazy-wl";
    case PolicyKind::Edm: return "edm";
  }
  return "?";
}

PolicyKind parse_policy_kind(std::string_view s) {
  for (auto k : {PolicyKind::PsWl, PolicyKind::PsWlAblation, PolicyKind::Swans,
                 PolicyKind::LazyWl, PolicyKind::Edm})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown policy '" + std::string(s) + "'");
}

void PolicyParams::validate() const {
  hotness.validate();
  controller.validate();
  lifetime.validate();
  failure.validate();
  if (!(swans_threshold >= 0)) throw ConfigError("swans_threshold must be >= 0");
  if (!(lazy_k_ban >= 0 && lazy_k_ban <= 1)) throw ConfigError("lazy_k_ban must be in [0,1]");
  if (!(edm_threshold >= 0)) throw ConfigError("edm_threshold must be >= 0");
  if (edm_batch == 0) throw ConfigError("edm_batch must be >= 1");
  if (migrations_per_period == 0) throw ConfigError("migrations_per_period must be >= 1");
}

GroupGap group_gap(const std::vector<double>& per_disk, uint32_t k_o) {
  if (k_o == 0 || k_o > per_disk.size()) throw EmptyGroup("group_gap: no original disks");
  GroupGap g;
  if (k_o == per_disk.size()) {
    // No extended disks: nothing to chase.
    g.lo = g.ls = std::accumulate(per_disk.begin(), per_disk.end(), 0.0) / k_o;
    return g;
  }
  g.lo = std::accumulate(per_disk.begin(), per_disk.begin() + k_o, 0.0) / k_o;
  g.ls = std::accumulate(per_disk.begin() + k_o, per_disk.end(), 0.0) /
         double(per_disk.size() - k_o);
  g.error = g.lo - g.ls;
  g.rel = g.lo > 0 ? std::abs(g.error) / g.lo : 0.0;
  return g;
}

HotnessVector HotnessSnapshot::disk_vector(uint32_t d) const {
  const double n = double(disk_mass.size());
  auto share = [&](int x) {
    return total_mass[x] > 0 ? n * disk_mass[d][x] / total_mass[x] - 1.0 : 0.0;
  };
  return {share(0), share(1), share(2)};
}

void HotnessSnapshot::move(PageId p, uint32_t src, uint32_t dst) {
  const HotnessVector& v = h[p];
  const double c[3] = {v.freq, v.rec, v.comp};
  for (int x = 0; x < 3; ++x) {
    disk_mass[src][x] -= c[x];
    disk_mass[dst][x] += c[x];
  }
}

HotnessSnapshot take_snapshot(const AccessWindow& w, const ArrayState& a, const HotnessParams& hp) {
  HotnessSnapshot s;
  const uint64_t n = a.unit_count();
  const uint32_t disks = a.disk_count();
  s.h.assign(n, HotnessVector{});
  s.cls.assign(n, HotnessClass::Cold);
  s.hot_by_disk.resize(disks);
  s.warm_by_disk.resize(disks);
  s.disk_mass.assign(disks, {0, 0, 0});

  std::vector<PageId> ids;
  std::vector<RawHotness> raws;
  ids.reserve(w.tracked_count());
  raws.reserve(w.tracked_count());
  w.for_each_tracked([&](PageId p, const RawHotness& r) {
    if (p < n) {
      ids.push_back(p);
      raws.push_back(r);
    }
  });
  s.ranges = NormRanges::of(raws);
  for (size_t i = 0; i < ids.size(); ++i) {
    const PageId p = ids[i];
    s.h[p] = s.ranges.apply(raws[i]);
    s.cls[p] = classify(s.h[p], hp.theta_hot, hp.theta_cold);
    auto& m = s.disk_mass[a.disk_of(p)];
    m[0] += s.h[p].freq;
    m[1] += s.h[p].rec;
    m[2] += s.h[p].comp;
    s.total_mass[0] += s.h[p].freq;
    s.total_mass[1] += s.h[p].rec;
    s.total_mass[2] += s.h[p].comp;
  }

  auto hotter = [&](PageId x, PageId y) {
    const double hx = s.h[x].scalar(), hy = s.h[y].scalar();
    return hx != hy ? hx > hy : x < y;
  };
  for (PageId p : ids) {
    if (s.cls[p] == HotnessClass::Cold) continue;
    s.nonhot_ranked.push_back(p);
    if (s.cls[p] == HotnessClass::ExtremelyHot) {
      s.hot_by_disk[a.disk_of(p)].push_back(p);
    } else {
      s.warm_by_disk[a.disk_of(p)].push_back(p);
      s.warm_ranked.push_back(p);
    }
  }
  for (auto& v : s.hot_by_disk) std::sort(v.begin(), v.end(), hotter);
  for (auto& v : s.warm_by_disk) std::sort(v.begin(), v.end(), hotter);
  std::sort(s.warm_ranked.begin(), s.warm_ranked.end(), hotter);
  std::sort(s.nonhot_ranked.begin(), s.nonhot_ranked.end(), hotter);
  return s;
}

namespace {

uint32_t argmax(const std::vector<double>& v) {
  return static_cast<uint32_t>(std::max_element(v.begin(), v.end()) - v.begin());
}
uint32_t argmin(const std::vector<double>& v) {
  return static_cast<uint32_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

// Next page of `list` (starting at cursor) still on src that dst can take.
std::optional<PageId> next_on(const std::vector<PageId>& list, size_t& cursor, const ArrayState& a,
                              uint32_t src, uint32_t dst) {
  while (cursor < list.size()) {
    const PageId p = list[cursor];
    if (a.disk_of(p) == src && a.can_host(p, dst)) return p;
    ++cursor;
  }
  return std::nullopt;
}

// PS-WL and its ablation: PID on the group lifetime gap; host writes may
// trigger a migration (at most migrations_per_period per sampling period)
// gated by the destination disk's hotness and the conservative zone.
class PsWlPolicy final : public Policy {
 public:
  PsWlPolicy(const PolicyParams& p, bool ablation)
      : p_(p), ablation_(ablation), ctl_(p.controller) {}

  PolicyKind kind() const override { return ablation_ ? PolicyKind::PsWlAblation : PolicyKind::PsWl; }

  std::vector<PolicyDecision> on_sample(const ArrayState& a, const AccessWindow& w) override {
    if (zone_.n_base() == 0)
      zone_ = ConservativeZone(a.unit_count(), p_.hotness.k_ban_base, p_.hotness.k_ban_max,
                               p_.controller.lambda_restart);
    lifetimes_ = a.pe_counts();
    if (!ablation_)
      for (double& t : lifetimes_) t = effective_lifetime(t, p_.lifetime, p_.failure);
    const GroupGap g = group_gap(lifetimes_, a.k_o());
    tel_.e = g.error;
    tel_.rel_gap = g.rel;
    const auto& io = a.counters();
    tel_.u = ctl_.on_sample(g.rel, a.scaling_done(), io.wl_migration_ios, io.total());
    tel_.gains = ctl_.pid().gains;
    tel_.phase = ctl_.phase();
    scaled_ = a.scaling_done();

    snap_ = take_snapshot(w, a, p_.hotness);
    zone_.update(snap_.warm_ranked, g.rel);
    src_ = argmax(lifetimes_);
    dst_ = argmin(lifetimes_);
    hot_cursor_ = warm_cursor_ = 0;
    budget_ = p_.migrations_per_period;
    return {};
  }

  PolicyDecision on_host_write(const ArrayState& a, PageId) override {
    if (budget_ == 0 || ctl_.phase() != ControllerPhase::Chasing || src_ == dst_) return {};
    if (!approve_migration(snap_.disk_hotness(dst_), tel_.u)) return {};
    if (auto p = next_on(snap_.hot_by_disk[src_], hot_cursor_, a, src_, dst_))
      return PolicyDecision::migrate(*p, src_, dst_);
    if (!p_.ps_warm_fallback) return {};
    if (auto p = next_on(snap_.warm_by_disk[src_], warm_cursor_, a, src_, dst_)) {
      if (!migration_allowed(*p, a.is_extended(dst_), zone_, tel_.rel_gap)) {
        ++warm_cursor_;
        return {};
      }
      return PolicyDecision::migrate(*p, src_, dst_);
    }
    return {};
  }

  void on_migrated(const PolicyDecision& d) override {
    snap_.move(d.page, d.src, d.dst);
    if (budget_) --budget_;
  }

  ControllerTelemetry telemetry() const override { return tel_; }
  bool converged() const override {
    if (ctl_.phase() == ControllerPhase::Converged) return true;
    // A balanced start never enters Chasing.
    return ctl_.phase() == ControllerPhase::Idle && scaled_ && tel_.rel_gap < p_.controller.lambda;
  }

 private:
  PolicyParams p_;
  bool ablation_;
  bool scaled_ = false;
  WlController ctl_;
  ConservativeZone zone_;
  HotnessSnapshot snap_;
  std::vector<double> lifetimes_;
  uint32_t src_ = 0, dst_ = 0;
  size_t hot_cursor_ = 0, warm_cursor_ = 0;
  uint32_t budget_ = 0;
  ControllerTelemetry tel_;
};

double relative_stddev(const std::vector<double>& pe) {
  const double mean = std::accumulate(pe.begin(), pe.end(), 0.0) / double(pe.size());
  return mean > 0 ? erase_count_stddev(pe) / mean : 0.0;
}

// Periodic ungated scan: hottest page from the most-written disk to the
// least-written disk whenever P/E spread exceeds the threshold.
class SwansPolicy final : public Policy {
 public:
  explicit SwansPolicy(const PolicyParams& p) : p_(p) {}
  PolicyKind kind() const override { return PolicyKind::Swans; }

  std::vector<PolicyDecision> on_sample(const ArrayState& a, const AccessWindow& w) override {
    const auto pe = a.pe_counts();
    const GroupGap g = group_gap(pe, a.k_o());
    tel_.rel_gap = g.rel;
    tel_.e = relative_stddev(pe);
    const auto& writes = a.disk_writes();
    if (last_writes_.empty()) last_writes_.assign(writes.size(), 0);
    std::vector<double> period(writes.size());
    for (size_t d = 0; d < writes.size(); ++d) period[d] = double(writes[d] - last_writes_[d]);
    last_writes_ = writes;
    balanced_ = tel_.e <= p_.swans_threshold;
    if (balanced_ || !a.scaling_done()) return {};

    const uint32_t src = argmax(period), dst = argmin(period);
    if (src == dst) return {};
    const auto snap = take_snapshot(w, a, p_.hotness);
    std::optional<PageId> best;
    double best_h = -1;
    w.for_each_tracked([&](PageId p, const RawHotness&) {
      if (p >= a.unit_count() || a.disk_of(p) != src || !a.can_host(p, dst)) return;
      const double h = snap.h[p].scalar();
      if (h > best_h) best_h = h, best = p;
    });
    if (!best) return {};
    return {PolicyDecision::migrate(*best, src, dst)};
  }

  ControllerTelemetry telemetry() const override { return tel_; }
  bool converged() const override { return balanced_; }

 private:
  PolicyParams p_;
  std::vector<uint64_t> last_writes_;
  bool balanced_ = false;
  ControllerTelemetry tel_;
};

// PID on the relative P/E std-dev with a fixed-size zone of hot pages that
// may not move to the new disks.
class LazyWlPolicy final : public Policy {
 public:
  explicit LazyWlPolicy(const PolicyParams& p) : p_(p) {
    pid_.gains = p.controller.gains;
    pid_.t0 = p.controller.t0;
    pid_.u_max = p.controller.u_max;
  }
  PolicyKind kind() const override { return PolicyKind::LazyWl; }

  std::vector<PolicyDecision> on_sample(const ArrayState& a, const AccessWindow& w) override {
    const auto pe = a.pe_counts();
    tel_.rel_gap = group_gap(pe, a.k_o()).rel;
    const double sd = relative_stddev(pe);
    tel_.e = sd;
    active_ = a.scaling_done() && sd >= p_.controller.lambda;
    if (active_) {
      tel_.u = std::clamp(pid_step(pid_, sd), 0.0, pid_.u_max);
      tel_.phase = ControllerPhase::Chasing;
    } else {
      pid_.reset();
      tel_.u = 0;
      tel_.phase = a.scaling_done() ? ControllerPhase::Converged : ControllerPhase::Idle;
    }
    tel_.gains = pid_.gains;
    snap_ = take_snapshot(w, a, p_.hotness);
    if (zone_.n_base() == 0) zone_ = ConservativeZone(a.unit_count(), 0, 1, 1);
    zone_.update_static(snap_.nonhot_ranked, p_.lazy_k_ban);
    src_ = argmax(pe);
    dst_ = argmin(pe);
    hot_cursor_ = warm_cursor_ = 0;
    budget_ = p_.migrations_per_period;
    return {};
  }

  PolicyDecision on_host_write(const ArrayState& a, PageId) override {
    if (budget_ == 0 || !active_ || src_ == dst_) return {};
    if (!approve_migration(snap_.disk_hotness(dst_), tel_.u)) return {};
    const bool to_ext = a.is_extended(dst_);
    while (auto p = next_on(snap_.hot_by_disk[src_], hot_cursor_, a, src_, dst_)) {
      if (!(to_ext && zone_.contains(*p))) return PolicyDecision::migrate(*p, src_, dst_);
      ++hot_cursor_;
    }
    while (auto p = next_on(snap_.warm_by_disk[src_], warm_cursor_, a, src_, dst_)) {
      if (!(to_ext && zone_.contains(*p))) return PolicyDecision::migrate(*p, src_, dst_);
      ++warm_cursor_;
    }
    return {};
  }

  void on_migrated(const PolicyDecision& d) override {
    snap_.move(d.page, d.src, d.dst);
    if (budget_) --budget_;
  }
  ControllerTelemetry telemetry() const override { return tel_; }
  bool converged() const override { return tel_.phase == ControllerPhase::Converged; }

 private:
  PolicyParams p_;
  PidState pid_;
  ConservativeZone zone_;
  HotnessSnapshot snap_;
  bool active_ = false;
  uint32_t src_ = 0, dst_ = 0;
  size_t hot_cursor_ = 0, warm_cursor_ = 0;
  uint32_t budget_ = 0;
  ControllerTelemetry tel_;
};

// Hot-data-first from the most worn to the least worn disk; when no hot page
// is left, cold data moves the other way.
class EdmPolicy final : public Policy {
 public:
  explicit EdmPolicy(const PolicyParams& p) : p_(p) {}
  PolicyKind kind() const override { return PolicyKind::Edm; }

  std::vector<PolicyDecision> on_sample(const ArrayState& a, const AccessWindow& w) override {
    const auto pe = a.pe_counts();
    tel_.rel_gap = group_gap(pe, a.k_o()).rel;
    const double mx = *std::max_element(pe.begin(), pe.end());
    const double mn = *std::min_element(pe.begin(), pe.end());
    tel_.e = mx > 0 ? (mx - mn) / mx : 0.0;
    balanced_ = tel_.e <= p_.edm_threshold;
    if (balanced_ || !a.scaling_done()) return {};
    const uint32_t worn = argmax(pe), fresh = argmin(pe);
    if (worn == fresh) return {};

    const auto snap = take_snapshot(w, a, p_.hotness);
    std::vector<PolicyDecision> out;
    size_t cursor = 0;
    const auto& hot = snap.hot_by_disk[worn];
    while (out.size() < p_.edm_batch && cursor < hot.size()) {
      const PageId p = hot[cursor++];
      if (a.can_host(p, fresh)) out.push_back(PolicyDecision::migrate(p, worn, fresh));
    }
    if (!out.empty()) return out;

    // Cold-data-first: the coldest units on the least worn disk.
    std::vector<PageId> cold;
    for (PageId u = 0; u < a.unit_count(); ++u)
      if (a.disk_of(u) == fresh && snap.cls[u] == HotnessClass::Cold && a.can_host(u, worn))
        cold.push_back(u);
    std::stable_sort(cold.begin(), cold.end(), [&](PageId x, PageId y) {
      return snap.h[x].scalar() < snap.h[y].scalar();
    });
    for (size_t i = 0; i < cold.size() && out.size() < p_.edm_batch; ++i)
      out.push_back(PolicyDecision::migrate(cold[i], fresh, worn));
    return out;
  }

  ControllerTelemetry telemetry() const override { return tel_; }
  bool converged() const override { return balanced_; }

 private:
  PolicyParams p_;
  bool balanced_ = false;
  ControllerTelemetry tel_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyParams& params) {
  params.validate();
  switch (kind) {
    case PolicyKind::PsWl: return std::make_unique<PsWlPolicy>(params, false);
    case PolicyKind::PsWlAblation: return std::make_unique<PsWlPolicy>(params, true);
    case PolicyKind::Swans: return std::make_unique<SwansPolicy>(params);
    case PolicyKind::LazyWl: return std::make_unique<LazyWlPolicy>(params);
    case PolicyKind::Edm: return std::make_unique<EdmPolicy>(params);
  }
  throw ConfigError("unknown policy kind");
}

}  // namespace pswl
