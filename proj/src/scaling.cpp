#include "pswl/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pswl/errors.hpp"

namespace pswl {

std::string_view to_string(RaidLevel r) {
  switch (r) {
    case RaidLevel::Raid0: return "RAID0";
    case RaidLevel::Raid5: return "RAID5";
    case RaidLevel::Raid6: return "RAID6";
  }
  return "?";
}

std::string_view to_string(ScalingScheme s) {
  switch (s) {
    case ScalingScheme::RR: return "RR";
    case ScalingScheme::FastScale: return "FastScale";
    case ScalingScheme::GSR: return "GSR";
    case ScalingScheme::SDM: return "SDM";
  }
  return "?";
}

RaidLevel parse_raid_level(std::string_view s) {
  if (s == "RAID0" || s == "raid0" || s == "0") return RaidLevel::Raid0;
  if (s == "RAID5" || s == "raid5" || s == "5") return RaidLevel::Raid5;
  if (s == "RAID6" || s == "raid6" || s == "6") return RaidLevel::Raid6;
  throw ConfigError("unknown raid level '" + std::string(s) + "'");
}

ScalingScheme parse_scaling_scheme(std::string_view s) {
  if (s == "RR" || s == "rr") return ScalingScheme::RR;
  if (s == "FastScale" || s == "fastscale" || s == "FS") return ScalingScheme::FastScale;
  if (s == "GSR" || s == "gsr") return ScalingScheme::GSR;
  if (s == "SDM" || s == "sdm") return ScalingScheme::SDM;
  throw ConfigError("unknown scaling scheme '" + std::string(s) + "'");
}

uint32_t parity_count(RaidLevel r) {
  switch (r) {
    case RaidLevel::Raid0: return 0;
    case RaidLevel::Raid5: return 1;
    case RaidLevel::Raid6: return 2;
  }
  return 0;
}

std::vector<uint64_t> ArrayLayout::disk_unit_counts() const {
  std::vector<uint64_t> c(disk_count, 0);
  for (const auto& p : unit_pos) ++c[p.disk];
  return c;
}

std::vector<uint32_t> ArrayLayout::disk_extent() const {
  std::vector<uint32_t> e(disk_count, 0);
  for (const auto& p : unit_pos) e[p.disk] = std::max(e[p.disk], p.offset + 1);
  for (const auto& ps : parity_pos)
    for (const auto& p : ps) e[p.disk] = std::max(e[p.disk], p.offset + 1);
  return e;
}

void ArrayLayout::check_invariants() const {
  if (unit_pos.size() != unit_stripe.size()) throw std::logic_error("unit/stripe size mismatch");
  std::set<Position> used;
  std::vector<std::set<uint32_t>> stripe_disks(parity_pos.size());
  const uint32_t np = parity_count(raid_level);
  for (uint32_t s = 0; s < parity_pos.size(); ++s) {
    if (parity_pos[s].size() != np)
      throw std::logic_error("stripe " + std::to_string(s) + " has wrong parity count");
    for (const auto& p : parity_pos[s]) {
      if (p.disk >= disk_count) throw std::logic_error("parity on nonexistent disk");
      if (!used.insert(p).second) throw std::logic_error("position used twice (parity)");
      if (!stripe_disks[s].insert(p.disk).second)
        throw std::logic_error("stripe " + std::to_string(s) + " has two units on one disk");
    }
  }
  for (std::size_t u = 0; u < unit_pos.size(); ++u) {
    const auto& p = unit_pos[u];
    if (p.disk >= disk_count) throw std::logic_error("unit on nonexistent disk");
    if (!used.insert(p).second)
      throw std::logic_error("position used twice (unit " + std::to_string(u) + ")");
    uint32_t s = unit_stripe[u];
    if (s >= stripe_disks.size()) throw std::logic_error("unit references unknown stripe");
    if (!stripe_disks[s].insert(p.disk).second)
      throw std::logic_error("stripe " + std::to_string(s) + " has two units on one disk");
  }
}

namespace {

// Parity disks of stripe s in the rotated layout.
std::vector<uint32_t> parity_disks(RaidLevel level, uint32_t n, uint64_t s) {
  std::vector<uint32_t> out;
  if (level == RaidLevel::Raid0) return out;
  auto p = static_cast<uint32_t>(n - 1 - (s % n));
  out.push_back(p);
  if (level == RaidLevel::Raid6) out.push_back((p + 1) % n);
  return out;
}

MigrationPlan diff_plan(const ArrayLayout& old, const ArrayLayout& target) {
  MigrationPlan plan;
  for (uint32_t u = 0; u < old.unit_pos.size(); ++u)
    if (old.unit_pos[u] != target.unit_pos[u])
      plan.moves.push_back({u, old.unit_pos[u], target.unit_pos[u]});
  plan.parity_updates = parity_rebuild_positions(old, target).size();
  return plan;
}

ScalingResult noop(const ArrayLayout& old) { return {old, {}}; }

}  // namespace

ArrayLayout make_layout(RaidLevel level, uint32_t disks, uint64_t units) {
  const uint32_t np = parity_count(level);
  if (disks <= np) throw ConfigError("too few disks for " + std::string(to_string(level)));
  const uint32_t width = disks - np;
  const uint64_t stripes = (units + width - 1) / width;

  ArrayLayout l;
  l.raid_level = level;
  l.disk_count = disks;
  l.unit_pos.reserve(units);
  l.unit_stripe.reserve(units);
  l.parity_pos.resize(stripes);
  uint64_t u = 0;
  for (uint64_t s = 0; s < stripes; ++s) {
    auto pd = parity_disks(level, disks, s);
    for (uint32_t d : pd) l.parity_pos[s].push_back({d, static_cast<uint32_t>(s)});
    for (uint32_t d = 0; d < disks && u < units; ++d) {
      if (std::find(pd.begin(), pd.end(), d) != pd.end()) continue;
      l.unit_pos.push_back({d, static_cast<uint32_t>(s)});
      l.unit_stripe.push_back(static_cast<uint32_t>(s));
      ++u;
    }
  }
  return l;
}

ScalingResult plan_rr(const ArrayLayout& old, uint32_t k_s) {
  if (k_s == 0) return noop(old);
  ScalingResult r;
  r.target = make_layout(old.raid_level, old.disk_count + k_s, old.unit_count());
  r.plan = diff_plan(old, r.target);
  return r;
}

ScalingResult plan_fastscale(const ArrayLayout& old, uint32_t k_s) {
  if (old.raid_level != RaidLevel::Raid0)
    throw UnsupportedRaidLevel("FastScale supports RAID0 only");
  if (k_s == 0) return noop(old);

  const uint32_t k_o = old.disk_count;
  const uint32_t n = k_o + k_s;
  ArrayLayout t = old;
  t.disk_count = n;
  std::vector<uint32_t> next_off(n, 0);
  std::vector<uint64_t> count(n, 0);
  for (const auto& p : old.unit_pos) ++count[p.disk];

  // unit id by (row, disk) on the old array
  const uint64_t units = old.unit_count();
  const uint64_t full_rows = units / k_o;
  const uint64_t groups = full_rows / n;
  uint64_t moved = 0;
  for (uint64_t g = 0; g < groups; ++g) {
    for (uint32_t r = 0; r < n; ++r) {
      uint64_t row = g * n + r;
      for (uint32_t d = 0; d < k_o; ++d) {
        if ((r + d) % n < k_o) continue;
        auto u = static_cast<uint32_t>(row * k_o + d);
        uint32_t j = k_o + static_cast<uint32_t>(moved % k_s);
        t.unit_pos[u] = {j, next_off[j]++};
        --count[d];
        ++count[j];
        ++moved;
      }
    }
  }

  // Tail rows that do not fill a whole group: move greedily until balanced
  // and the new disks hold their proportional share.
  const uint64_t tail_begin = groups * n * k_o;
  const auto share = static_cast<uint64_t>(std::llround(double(k_s) * double(units) / double(n)));
  std::vector<std::set<uint32_t>> new_disk_stripes(n);
  while (true) {
    const auto [min_it, max_it] = std::minmax_element(count.begin(), count.end());
    const bool balanced = *max_it <= *min_it + 1;
    if (balanced && moved + 1 >= share) break;
    std::vector<uint32_t> donors(k_o);
    for (uint32_t d = 0; d < k_o; ++d) donors[d] = d;
    std::stable_sort(donors.begin(), donors.end(),
                     [&](uint32_t a, uint32_t b) { return count[a] > count[b]; });
    std::vector<uint32_t> receivers(k_s);
    for (uint32_t j = 0; j < k_s; ++j) receivers[j] = k_o + j;
    std::stable_sort(receivers.begin(), receivers.end(),
                     [&](uint32_t a, uint32_t b) { return count[a] < count[b]; });
    // A move must shrink the spread, or keep it once balanced.
    auto allowed = [&](uint32_t j, uint32_t d) {
      return count[j] + 1 < count[d] || (balanced && count[j] < count[d]);
    };
    bool done = false;
    for (uint32_t d : donors) {
      if (done) break;
      for (uint64_t u = units; u-- > tail_begin && !done;) {
        if (t.unit_pos[u].disk != d) continue;
        const uint32_t stripe = t.unit_stripe[u];
        for (uint32_t j : receivers) {
          if (!allowed(j, d)) break;
          if (new_disk_stripes[j].count(stripe)) continue;
          t.unit_pos[u] = {j, next_off[j]++};
          new_disk_stripes[j].insert(stripe);
          --count[d];
          ++count[j];
          ++moved;
          done = true;
          break;
        }
      }
    }
    if (!done) break;
  }

  ScalingResult r;
  r.target = std::move(t);
  r.plan = diff_plan(old, r.target);
  return r;
}

ScalingResult plan_gsr(const ArrayLayout& old, uint32_t k_s) {
  if (old.raid_level != RaidLevel::Raid5) throw UnsupportedRaidLevel("GSR supports RAID5 only");
  if (k_s == 0) return noop(old);

  const uint32_t k_o = old.disk_count;
  const uint32_t n = k_o + k_s;
  const uint32_t stripes = old.stripe_count();
  // Preserved segment keeps k_o/n of the stripes untouched.
  const auto preserved = static_cast<uint32_t>((uint64_t(stripes) * k_o) / n);

  uint32_t first_reorg = old.unit_count();
  for (uint32_t u = 0; u < old.unit_count(); ++u)
    if (old.unit_stripe[u] >= preserved) {
      first_reorg = u;
      break;
    }
  const uint64_t reorg_units = old.unit_count() - first_reorg;
  ArrayLayout sub = make_layout(RaidLevel::Raid5, n, reorg_units);

  ArrayLayout t;
  t.raid_level = RaidLevel::Raid5;
  t.disk_count = n;
  t.unit_pos.assign(old.unit_pos.begin(), old.unit_pos.begin() + first_reorg);
  t.unit_stripe.assign(old.unit_stripe.begin(), old.unit_stripe.begin() + first_reorg);
  t.parity_pos.assign(old.parity_pos.begin(), old.parity_pos.begin() + preserved);
  for (uint64_t i = 0; i < reorg_units; ++i) {
    Position p = sub.unit_pos[i];
    p.offset += preserved;
    t.unit_pos.push_back(p);
    t.unit_stripe.push_back(sub.unit_stripe[i] + preserved);
  }
  for (auto ps : sub.parity_pos) {
    for (auto& p : ps) p.offset += preserved;
    t.parity_pos.push_back(std::move(ps));
  }

  ScalingResult r;
  r.target = std::move(t);
  r.plan = diff_plan(old, r.target);
  return r;
}

ScalingResult plan_sdm(const ArrayLayout& old, uint32_t k_s) {
  if (old.raid_level != RaidLevel::Raid6) throw UnsupportedRaidLevel("SDM supports RAID6 only");
  if (k_s == 0) return noop(old);

  const uint32_t k_o = old.disk_count;
  const uint32_t n = k_o + k_s;
  const uint64_t units = old.unit_count();
  const uint64_t base = units / n;
  const uint64_t rem = units % n;
  // Leftover units stay on the old disks where possible (fewer moves).
  const uint64_t extra_new = rem > k_o ? rem - k_o : 0;

  ArrayLayout t = old;
  t.disk_count = n;
  std::vector<uint64_t> count(n, 0);
  for (const auto& p : old.unit_pos) ++count[p.disk];
  std::vector<uint64_t> quota(n, 0);
  for (uint32_t j = 0; j < k_s; ++j) quota[k_o + j] = base + (j < extra_new ? 1 : 0);

  std::vector<std::vector<uint32_t>> row_units(old.stripe_count());
  for (uint32_t u = 0; u < units; ++u) row_units[old.unit_stripe[u]].push_back(u);

  for (uint32_t s = 0; s < old.stripe_count(); ++s) {
    for (uint32_t j = k_o; j < n; ++j) {
      if (count[j] >= quota[j]) continue;
      // Donor: the stripe's data unit on the old disk holding the most units.
      int best = -1;
      for (std::size_t i = 0; i < row_units[s].size(); ++i) {
        uint32_t u = row_units[s][i];
        uint32_t d = t.unit_pos[u].disk;
        if (d >= k_o) continue;
        if (best < 0 || count[d] > count[t.unit_pos[row_units[s][best]].disk]) best = int(i);
      }
      if (best < 0) break;
      uint32_t u = row_units[s][best];
      --count[t.unit_pos[u].disk];
      t.unit_pos[u] = {j, s};
      ++count[j];
    }
  }

  ScalingResult r;
  r.target = std::move(t);
  r.plan = diff_plan(old, r.target);
  return r;
}

ScalingResult plan_scaling(ScalingScheme scheme, const ArrayLayout& old, uint32_t k_s) {
  switch (scheme) {
    case ScalingScheme::RR: return plan_rr(old, k_s);
    case ScalingScheme::FastScale: return plan_fastscale(old, k_s);
    case ScalingScheme::GSR: return plan_gsr(old, k_s);
    case ScalingScheme::SDM: return plan_sdm(old, k_s);
  }
  throw ConfigError("unknown scaling scheme");
}

std::vector<Position> parity_rebuild_positions(const ArrayLayout& old, const ArrayLayout& target) {
  std::vector<std::vector<uint32_t>> old_members(old.stripe_count());
  std::vector<std::vector<uint32_t>> new_members(target.stripe_count());
  std::vector<uint8_t> touched(target.stripe_count(), 0);
  for (uint32_t u = 0; u < old.unit_pos.size(); ++u) {
    old_members[old.unit_stripe[u]].push_back(u);
    new_members[target.unit_stripe[u]].push_back(u);
    if (old.unit_pos[u] != target.unit_pos[u]) touched[target.unit_stripe[u]] = 1;
  }
  std::vector<Position> out;
  for (uint32_t s = 0; s < target.stripe_count(); ++s) {
    if (target.parity_pos[s].empty()) continue;
    bool changed = touched[s] || s >= old.stripe_count() || old_members[s] != new_members[s] ||
                   old.parity_pos[s] != target.parity_pos[s];
    if (changed) out.insert(out.end(), target.parity_pos[s].begin(), target.parity_pos[s].end());
  }
  return out;
}

ArrayLayout apply_plan(const ArrayLayout& old, const MigrationPlan& plan) {
  ArrayLayout l = old;
  for (const auto& m : plan.moves) {
    if (m.unit >= l.unit_pos.size() || l.unit_pos[m.unit] != m.src)
      throw std::logic_error("plan move does not match the source layout");
    l.unit_pos[m.unit] = m.dst;
    l.disk_count = std::max(l.disk_count, m.dst.disk + 1);
  }
  return l;
}

std::string serialize_plan(const MigrationPlan& plan) {
  std::ostringstream os;
  os << "# parity_updates " << plan.parity_updates << "\n";
  for (const auto& m : plan.moves)
    os << m.unit << ' ' << m.src.disk << ' ' << m.src.offset << ' ' << m.dst.disk << ' '
       << m.dst.offset << '\n';
  return os.str();
}

MigrationPlan parse_plan(std::string_view text) {
  MigrationPlan plan;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      hs >> key;
      if (key == "parity_updates") hs >> plan.parity_updates;
      continue;
    }
    std::istringstream ls(line);
    Move m;
    if (!(ls >> m.unit >> m.src.disk >> m.src.offset >> m.dst.disk >> m.dst.offset))
      throw FormatError("plan line " + std::to_string(lineno) + ": expected 5 integers");
    plan.moves.push_back(m);
  }
  return plan;
}

}  // namespace pswl
