#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pswl {

using PageId = uint32_t;

// Raw access dynamics of one page inside the sliding window.
struct RawHotness {
  uint64_t freq = 0;
  uint64_t recency = 0;                  // events since the last reference
  std::optional<uint64_t> compactness;  // accesses between the two latest references
};

struct HotnessVector {
  double freq = 0.0;
  double rec = 0.0;
  double comp = 0.0;
  double scalar() const { return (freq + rec + comp) / 3.0; }
};

enum class HotnessClass : uint8_t { Cold, Warm, ExtremelyHot };

struct HotnessParams {
  uint64_t window = 65536;
  double theta_hot = 0.8;
  double theta_cold = 0.1;
  double k_ban_base = 0.2;
  double k_ban_max = 0.5;
  void validate() const;
};

// Min/max of each raw metric across the tracked set; reused between samples.
struct NormRanges {
  double freq_min = 0, freq_max = 0;
  double rec_min = 0, rec_max = 0;
  double comp_min = 0, comp_max = 0;
  bool has_comp = false;

  static NormRanges of(std::span<const RawHotness> raws);
  HotnessVector apply(const RawHotness& r) const;
};

// Min-max normalisation of every metric; degenerate ranges give 0.5,
// undefined compactness gives 0.
std::vector<HotnessVector> normalize(std::span<const RawHotness> raws);

// Throws ConfigError if theta_cold >= theta_hot.
HotnessClass classify(const HotnessVector& h, double theta_hot, double theta_cold);

// Sliding window over the last `capacity` access events, with per-page
// statistics maintained incrementally.
class AccessWindow {
 public:
  explicit AccessWindow(uint64_t capacity);

  // Appends an event for page and returns the page's refreshed raw metrics.
  RawHotness record_access(PageId page);

  // Metrics as of the latest event; nullopt when the page is not in the window.
  std::optional<RawHotness> query(PageId page) const;
  bool tracked(PageId page) const { return page < stats_.size() && stats_[page].freq > 0; }

  uint64_t capacity() const { return capacity_; }
  uint64_t size() const { return size_; }
  uint64_t events() const { return next_index_; }
  uint64_t tracked_count() const { return tracked_; }

  // Calls fn(page, raw) for every tracked page in ascending page order.
  template <class Fn>
  void for_each_tracked(Fn&& fn) const {
    for (PageId p = 0; p < stats_.size(); ++p)
      if (stats_[p].freq > 0) fn(p, raw_of(stats_[p]));
  }

 private:
  static constexpr uint64_t kNone = UINT64_MAX;
  struct Stats {
    uint64_t freq = 0;
    uint64_t last = kNone;
    uint64_t prev = kNone;
  };
  RawHotness raw_of(const Stats& s) const;

  uint64_t capacity_;
  std::vector<PageId> ring_;
  uint64_t head_ = 0;  // position of the oldest event
  uint64_t size_ = 0;
  uint64_t next_index_ = 0;
  uint64_t tracked_ = 0;
  std::vector<Stats> stats_;
};

// Protected set of warm pages that may not move onto extended disks while
// the lifetime gap is small.
class ConservativeZone {
 public:
  ConservativeZone() = default;
  ConservativeZone(uint64_t n_base, double k_ban_base, double k_ban_max, double gap_ref);

  // warm_ranked: warm pages sorted by descending hotness (ties by page id).
  void update(std::span<const PageId> warm_ranked, double gap);

  bool contains(PageId p) const { return p < member_.size() && member_[p]; }
  uint64_t capacity() const { return capacity_; }
  uint64_t size() const { return members_.size(); }
  double k_ban() const { return k_ban_; }
  double gap_ref() const { return gap_ref_; }
  uint64_t n_base() const { return n_base_; }
  const std::vector<PageId>& members() const { return members_; }

  // Fixed-fraction variant (no gap dependence).
  void update_static(std::span<const PageId> ranked, double k_ban);

 private:
  void fill(std::span<const PageId> ranked);

  uint64_t n_base_ = 0;
  double k_ban_base_ = 0.0;
  double k_ban_max_ = 0.0;
  double gap_ref_ = 1.0;
  double k_ban_ = 0.0;
  uint64_t capacity_ = 0;
  std::vector<PageId> members_;
  std::vector<uint8_t> member_;
};

bool migration_allowed(PageId page, bool dest_is_extended, const ConservativeZone& zone,
                       double gap);

}  // namespace pswl
