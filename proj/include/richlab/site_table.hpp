#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace richlab {

/// Dense per-site storage over a domain's index space, allocated in pages on first write
/// so memory tracks the visited region rather than the domain volume.
template <typename Entry>
class SiteTable {
 public:
  static constexpr int kPageBits = 12;
  static constexpr std::int64_t kPageSize = std::int64_t{1} << kPageBits;

  SiteTable() = default;
  explicit SiteTable(std::int64_t volume) : pages_(static_cast<std::size_t>((volume + kPageSize - 1) >> kPageBits)) {}

  /// Read-only lookup; unvisited sites read as a value-initialized Entry.
  const Entry& get(std::int64_t index) const {
    const auto& page = pages_[static_cast<std::size_t>(index >> kPageBits)];
    return page ? (*page)[static_cast<std::size_t>(index & (kPageSize - 1))] : empty_;
  }

  Entry& at(std::int64_t index) {
    auto& page = pages_[static_cast<std::size_t>(index >> kPageBits)];
    if (!page) page = std::make_unique<Page>();
    return (*page)[static_cast<std::size_t>(index & (kPageSize - 1))];
  }

  std::size_t allocated_pages() const {
    std::size_t n = 0;
    for (const auto& p : pages_) n += p != nullptr;
    return n;
  }

 private:
  using Page = std::array<Entry, static_cast<std::size_t>(kPageSize)>;
  std::vector<std::unique_ptr<Page>> pages_;
  static inline const Entry empty_{};
};

}  // namespace richlab
