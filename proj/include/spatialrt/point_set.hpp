// Copyright 2026 The spatialrt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace spatialrt {

using PointIndex = std::uint32_t;

/// Dense bitset over the points of one space. All binary operations require
/// both operands to have the same universe size.
class PointSet {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  PointSet() = default;
  explicit PointSet(std::size_t universe) : size_(universe), words_((universe + kWordBits - 1) / kWordBits, 0) {}
  PointSet(std::size_t universe, std::initializer_list<PointIndex> members) : PointSet(universe) {
    for (auto m : members) insert(m);
  }

  static PointSet full(std::size_t universe) {
    PointSet s(universe);
    for (auto& w : s.words_) w = ~word_type{0};
    s.trim();
    return s;
  }

  std::size_t universe() const noexcept { return size_; }

  bool contains(PointIndex i) const noexcept {
    return i < size_ && ((words_[i / kWordBits] >> (i % kWordBits)) & 1u) != 0;
  }

  void insert(PointIndex i) {
    check_index(i);
    words_[i / kWordBits] |= word_type{1} << (i % kWordBits);
  }

  void erase(PointIndex i) {
    check_index(i);
    words_[i / kWordBits] &= ~(word_type{1} << (i % kWordBits));
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool empty() const noexcept {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  bool is_subset_of(const PointSet& other) const {
    check_same(other);
    for (std::size_t k = 0; k < words_.size(); ++k)
      if ((words_[k] & ~other.words_[k]) != 0) return false;
    return true;
  }

  bool intersects(const PointSet& other) const {
    check_same(other);
    for (std::size_t k = 0; k < words_.size(); ++k)
      if ((words_[k] & other.words_[k]) != 0) return true;
    return false;
  }

  PointSet& operator|=(const PointSet& o) {
    check_same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  PointSet& operator&=(const PointSet& o) {
    check_same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  /// Set difference.
  PointSet& operator-=(const PointSet& o) {
    check_same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }

  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
  friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
  friend PointSet operator-(PointSet a, const PointSet& b) { return a -= b; }

  /// Complement with respect to the universe.
  PointSet operator~() const {
    PointSet r(*this);
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

  /// Calls fn(index) for every member, in increasing index order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      word_type w = words_[k];
      while (w != 0) {
        const int bit = std::countr_zero(w);
        fn(static_cast<PointIndex>(k * kWordBits + static_cast<std::size_t>(bit)));
        w &= w - 1;
      }
    }
  }

  std::vector<PointIndex> members() const {
    std::vector<PointIndex> out;
    out.reserve(count());
    for_each([&](PointIndex i) { out.push_back(i); });
    return out;
  }

  const std::vector<word_type>& words() const noexcept { return words_; }

 private:
  void trim() noexcept {
    const std::size_t tail = size_ % kWordBits;
    if (tail != 0 && !words_.empty()) words_.back() &= (word_type{1} << tail) - 1;
  }
  void check_index(PointIndex i) const {
    if (i >= size_) throw std::invalid_argument("point index outside the space");
  }
  void check_same(const PointSet& o) const {
    if (o.size_ != size_) throw std::invalid_argument("point sets belong to different spaces");
  }

  std::size_t size_ = 0;
  std::vector<word_type> words_;
};

}  // namespace spatialrt
