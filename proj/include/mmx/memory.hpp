#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmx {

/// Counts the auxiliary scalar slots held by the pipeline's tracked
/// structures (Prim's l/parent vectors, the edge list T, SubsetID, M_s,
/// the kernel, eigenvectors, embedding coordinates). This is a model of
/// the algorithmic working set, not process RSS: deterministic and
/// directly comparable against the O(N) budget.
///
/// Convention: an operation acquires the entries of every tracked
/// structure it allocates. Entries of structures it returns stay acquired;
/// the caller releases them when the structure is dropped (sizes via the
/// tracked_entries() helpers next to each type).
class MemoryMeter {
 public:
  /// A negative limit disables the budget check.
  void set_limit(std::int64_t limit) { limit_ = limit; }

  void acquire(std::int64_t entries, const char* what) {
    current_ += entries;
    if (current_ > peak_) peak_ = current_;
    if (limit_ >= 0 && current_ > limit_) {
      throw std::runtime_error("memory budget exceeded: " + std::string(what) +
                               " brings tracked entries to " + std::to_string(current_) +
                               " (limit " + std::to_string(limit_) + ")");
    }
  }

  void release(std::int64_t entries) { current_ -= entries; }

  std::int64_t current() const { return current_; }
  std::int64_t peak() const { return peak_; }

 private:
  std::int64_t current_ = 0;
  std::int64_t peak_ = 0;
  std::int64_t limit_ = -1;
};

/// RAII guard for meter entries scoped to one operation.
class MemoryLease {
 public:
  MemoryLease(MemoryMeter* meter, std::int64_t entries, const char* what)
      : meter_(meter), entries_(entries) {
    if (meter_) meter_->acquire(entries_, what);
  }
  ~MemoryLease() {
    if (meter_) meter_->release(entries_);
  }
  MemoryLease(const MemoryLease&) = delete;
  MemoryLease& operator=(const MemoryLease&) = delete;

 private:
  MemoryMeter* meter_;
  std::int64_t entries_;
};

}  // namespace mmx
