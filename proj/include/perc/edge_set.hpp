#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "perc/lattice.hpp"

namespace perc {

// Dense bitset of lattice edges of one box. Ids outside the box's edge set
// are never stored.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(Box region);

  static EdgeSet full(const Box& region);

  const Box& region() const { return region_; }

  bool contains(EdgeId id) const {
    return id < capacity_ && ((bits_[id >> 6] >> (id & 63)) & 1u);
  }
  void insert(EdgeId id);
  void erase(EdgeId id);
  void insert_between(const Point& a, const Point& b) { insert(region_.edge_between(a, b)); }
  bool contains_between(const Point& a, const Point& b) const;

  std::uint64_t size() const;
  bool empty() const { return size() == 0; }

  // Ascending ids.
  std::vector<EdgeId> to_vector() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        const int b = __builtin_ctzll(word);
        f(static_cast<EdgeId>(w * 64 + b));
        word &= word - 1;
      }
    }
  }

  EdgeSet& operator|=(const EdgeSet& other);
  EdgeSet& operator&=(const EdgeSet& other);
  bool is_subset_of(const EdgeSet& other) const;

  friend bool operator==(const EdgeSet& a, const EdgeSet& b) {
    return a.region_ == b.region_ && a.bits_ == b.bits_;
  }

 private:
  void check_same_region(const EdgeSet& other) const;

  Box region_;
  std::uint64_t capacity_ = 0;
  std::vector<std::uint64_t> bits_;
};

// The edges of `edges` lying inside `sub`, re-indexed to `sub`.
EdgeSet restrict_to_box(const EdgeSet& edges, const Box& sub);

// Text: one id per line, ascending. Binary: little-endian u64 count followed
// by that many u64 ids, ascending.
void write_text(std::ostream& os, const EdgeSet& s);
EdgeSet read_text(std::istream& is, const Box& region);
void write_binary(std::ostream& os, const EdgeSet& s);
EdgeSet read_binary(std::istream& is, const Box& region);

}  // namespace perc
