#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace netauction {

using TaskIndex = std::uint32_t;

// Fixed-universe bitset over task indices 0..size-1.
class TaskSet {
 public:
  TaskSet() = default;
  explicit TaskSet(std::size_t universe, bool full = false) : universe_(universe), words_((universe + 63) / 64, 0) {
    if (full) {
      for (std::size_t i = 0; i < universe; ++i) insert(static_cast<TaskIndex>(i));
    }
  }

  [[nodiscard]] std::size_t universe() const { return universe_; }
  [[nodiscard]] bool contains(TaskIndex t) const {
    return t < universe_ && ((words_[t / 64] >> (t % 64)) & 1u) != 0;
  }
  void insert(TaskIndex t) { words_[t / 64] |= std::uint64_t{1} << (t % 64); }
  void erase(TaskIndex t) { words_[t / 64] &= ~(std::uint64_t{1} << (t % 64)); }

  [[nodiscard]] std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  [[nodiscard]] bool empty() const {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        int bit = std::countr_zero(w);
        f(static_cast<TaskIndex>(wi * 64 + static_cast<std::size_t>(bit)));
        w &= w - 1;
      }
    }
  }

  [[nodiscard]] std::vector<TaskIndex> to_vector() const {
    std::vector<TaskIndex> out;
    for_each([&](TaskIndex t) { out.push_back(t); });
    return out;
  }

  friend bool operator==(const TaskSet&, const TaskSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace netauction
