#include "perc/edge_set.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace perc {

EdgeSet::EdgeSet(Box region)
    : region_(std::move(region)),
      capacity_(region_.edge_capacity()),
      bits_((capacity_ + 63) / 64, 0) {}

EdgeSet EdgeSet::full(const Box& region) {
  EdgeSet s(region);
  for_each_box_edge(region, [&](EdgeId id, const Point&, int) { s.insert(id); });
  return s;
}

void EdgeSet::insert(EdgeId id) {
  if (!region_.is_edge(id)) throw std::out_of_range("edge id " + std::to_string(id) + " not in region");
  bits_[id >> 6] |= std::uint64_t{1} << (id & 63);
}

void EdgeSet::erase(EdgeId id) {
  if (id >= capacity_) return;
  bits_[id >> 6] &= ~(std::uint64_t{1} << (id & 63));
}

bool EdgeSet::contains_between(const Point& a, const Point& b) const {
  if (!region_.contains(a) || !region_.contains(b)) return false;
  return contains(region_.edge_between(a, b));
}

std::uint64_t EdgeSet::size() const {
  std::uint64_t n = 0;
  for (auto w : bits_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

std::vector<EdgeId> EdgeSet::to_vector() const {
  std::vector<EdgeId> out;
  out.reserve(size());
  for_each([&](EdgeId id) { out.push_back(id); });
  return out;
}

void EdgeSet::check_same_region(const EdgeSet& other) const {
  if (!(region_ == other.region_)) throw std::invalid_argument("edge sets live on different regions");
}

EdgeSet& EdgeSet::operator|=(const EdgeSet& other) {
  check_same_region(other);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

EdgeSet& EdgeSet::operator&=(const EdgeSet& other) {
  check_same_region(other);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
  return *this;
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  check_same_region(other);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~other.bits_[i]) return false;
  return true;
}

EdgeSet restrict_to_box(const EdgeSet& edges, const Box& sub) {
  const Box& outer = edges.region();
  if (!outer.contains(sub)) throw std::invalid_argument("sub-box not contained in edge-set region");
  EdgeSet out(sub);
  if (sub == outer) return edges;
  for_each_box_edge(sub, [&](EdgeId id, const Point& a, int axis) {
    if (edges.contains(outer.index(a) * outer.d + axis)) out.insert(id);
  });
  return out;
}

void write_text(std::ostream& os, const EdgeSet& s) {
  s.for_each([&](EdgeId id) { os << id << '\n'; });
}

EdgeSet read_text(std::istream& is, const Box& region) {
  EdgeSet s(region);
  EdgeId id = 0;
  while (is >> id) s.insert(id);
  if (!is.eof()) throw std::runtime_error("malformed edge-set text");
  return s;
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) throw std::runtime_error("truncated edge-set binary");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace

void write_binary(std::ostream& os, const EdgeSet& s) {
  put_u64(os, s.size());
  s.for_each([&](EdgeId id) { put_u64(os, id); });
}

EdgeSet read_binary(std::istream& is, const Box& region) {
  EdgeSet s(region);
  const std::uint64_t n = get_u64(is);
  for (std::uint64_t i = 0; i < n; ++i) s.insert(get_u64(is));
  return s;
}

}  // namespace perc
