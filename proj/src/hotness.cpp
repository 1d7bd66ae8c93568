#include "pswl/hotness.hpp"

#include <algorithm>
#include <cmath>

#include "pswl/errors.hpp"

namespace pswl {

void HotnessParams::validate() const {
  if (window < 1) throw ConfigError("hotness.window must be >= 1");
  if (!(theta_cold < theta_hot)) throw ConfigError("hotness.theta_cold must be < theta_hot");
  if (k_ban_base < 0.0 || k_ban_base > 1.0) throw ConfigError("hotness.k_ban_base must be in [0,1]");
  if (k_ban_max < 0.0 || k_ban_max > 1.0) throw ConfigError("hotness.k_ban_max must be in [0,1]");
}

namespace {

double scale(double v, double lo, double hi) {
  if (hi <= lo) return 0.5;
  return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
}

}  // namespace

NormRanges NormRanges::of(std::span<const RawHotness> raws) {
  NormRanges r;
  bool first = true;
  for (const auto& x : raws) {
    auto f = double(x.freq), rc = double(x.recency);
    if (first) {
      r.freq_min = r.freq_max = f;
      r.rec_min = r.rec_max = rc;
      first = false;
    } else {
      r.freq_min = std::min(r.freq_min, f);
      r.freq_max = std::max(r.freq_max, f);
      r.rec_min = std::min(r.rec_min, rc);
      r.rec_max = std::max(r.rec_max, rc);
    }
    if (x.compactness) {
      auto c = double(*x.compactness);
      if (!r.has_comp) {
        r.comp_min = r.comp_max = c;
        r.has_comp = true;
      } else {
        r.comp_min = std::min(r.comp_min, c);
        r.comp_max = std::max(r.comp_max, c);
      }
    }
  }
  return r;
}

HotnessVector NormRanges::apply(const RawHotness& x) const {
  HotnessVector h;
  h.freq = scale(double(x.freq), freq_min, freq_max);
  h.rec = 1.0 - scale(double(x.recency), rec_min, rec_max);
  if (!x.compactness)
    h.comp = 0.0;
  else if (!has_comp)
    h.comp = 0.5;
  else
    h.comp = 1.0 - scale(double(*x.compactness), comp_min, comp_max);
  return h;
}

std::vector<HotnessVector> normalize(std::span<const RawHotness> raws) {
  const NormRanges r = NormRanges::of(raws);
  std::vector<HotnessVector> out;
  out.reserve(raws.size());
  for (const auto& x : raws) out.push_back(r.apply(x));
  return out;
}

HotnessClass classify(const HotnessVector& h, double theta_hot, double theta_cold) {
  if (!(theta_cold < theta_hot)) throw ConfigError("theta_cold must be < theta_hot");
  const double s = h.scalar();
  if (s >= theta_hot) return HotnessClass::ExtremelyHot;
  if (s <= theta_cold) return HotnessClass::Cold;
  return HotnessClass::Warm;
}

AccessWindow::AccessWindow(uint64_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw ConfigError("window capacity must be >= 1");
  ring_.resize(capacity_);
}

RawHotness AccessWindow::raw_of(const Stats& s) const {
  RawHotness r;
  r.freq = s.freq;
  r.recency = (next_index_ - 1) - s.last;
  if (s.prev != kNone) r.compactness = s.last - s.prev - 1;
  return r;
}

RawHotness AccessWindow::record_access(PageId page) {
  if (size_ == capacity_) {
    PageId old = ring_[head_];
    Stats& os = stats_[old];
    --os.freq;
    if (os.freq == 0) {
      os.last = os.prev = kNone;
      --tracked_;
    } else if (os.freq == 1) {
      os.prev = kNone;  // the evicted event was one of the two latest references
    }
    head_ = (head_ + 1) % capacity_;
    --size_;
  }
  ring_[(head_ + size_) % capacity_] = page;
  ++size_;

  if (page >= stats_.size()) stats_.resize(std::size_t(page) + 1);
  Stats& s = stats_[page];
  if (s.freq == 0) ++tracked_;
  ++s.freq;
  s.prev = s.last;
  s.last = next_index_;
  ++next_index_;
  return raw_of(s);
}

std::optional<RawHotness> AccessWindow::query(PageId page) const {
  if (!tracked(page)) return std::nullopt;
  return raw_of(stats_[page]);
}

ConservativeZone::ConservativeZone(uint64_t n_base, double k_ban_base, double k_ban_max,
                                   double gap_ref)
    : n_base_(n_base), k_ban_base_(k_ban_base), k_ban_max_(k_ban_max), gap_ref_(gap_ref) {
  if (!(gap_ref_ > 0.0)) throw ConfigError("conservative zone gap_ref must be > 0");
}

void ConservativeZone::update(std::span<const PageId> warm_ranked, double gap) {
  if (gap < 0.0) throw DomainError("lifetime gap must be >= 0");
  k_ban_ = std::clamp(k_ban_base_ * (1.0 - gap / gap_ref_), 0.0, k_ban_max_);
  capacity_ = static_cast<uint64_t>(std::llround(double(n_base_) * k_ban_));
  fill(warm_ranked);
}

void ConservativeZone::update_static(std::span<const PageId> ranked, double k_ban) {
  k_ban_ = std::clamp(k_ban, 0.0, 1.0);
  capacity_ = static_cast<uint64_t>(std::llround(double(n_base_) * k_ban_));
  fill(ranked);
}

void ConservativeZone::fill(std::span<const PageId> ranked) {
  for (PageId p : members_) member_[p] = 0;
  members_.clear();
  const auto take = std::min<uint64_t>(capacity_, ranked.size());
  for (uint64_t i = 0; i < take; ++i) {
    PageId p = ranked[i];
    if (p >= member_.size()) member_.resize(std::size_t(p) + 1, 0);
    member_[p] = 1;
    members_.push_back(p);
  }
}

bool migration_allowed(PageId page, bool dest_is_extended, const ConservativeZone& zone,
                       double gap) {
  return !(zone.contains(page) && dest_is_extended && gap < zone.gap_ref());
}

}  // namespace pswl
