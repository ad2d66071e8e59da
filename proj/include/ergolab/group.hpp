#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ergolab {

enum class GroupKind : std::uint8_t { kLattice, kHeisenberg };

inline constexpr int kMaxLatticeRank = 4;

// Canonical form of an element of Z^d or H_3(Z). Two elements are equal as
// group elements iff their canonical forms are equal.
struct GroupElement {
  GroupKind kind = GroupKind::kLattice;
  std::uint8_t rank = 0;
  std::array<std::int64_t, kMaxLatticeRank> coords{};

  std::int64_t operator[](std::size_t i) const { return coords[i]; }
  std::span<const std::int64_t> view() const { return {coords.data(), rank}; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

std::string to_string(const GroupElement& g);

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept;
};

// Sorted, duplicate-free list of elements (lexicographic on canonical form).
using ElementSet = std::vector<GroupElement>;

// Z^d with componentwise addition, or the discrete Heisenberg group with
// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b').
class Group {
 public:
  static Group integers() { return lattice(1); }
  static Group lattice(int rank);
  static Group heisenberg();
  // "Z", "Z^d" (1 <= d <= 4) or "H3".
  static Group from_name(std::string_view name);

  const std::string& name() const noexcept { return name_; }
  GroupKind kind() const noexcept { return kind_; }
  int rank() const noexcept { return rank_; }
  bool is_lattice() const noexcept { return kind_ == GroupKind::kLattice; }

  GroupElement identity() const;
  GroupElement element(std::span<const std::int64_t> coords) const;
  GroupElement element(std::initializer_list<std::int64_t> coords) const {
    return element(std::span<const std::int64_t>(coords.begin(), coords.size()));
  }

  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  bool contains(const GroupElement& a) const noexcept;

  // Standard generators: unit vectors e_1..e_d for Z^d; x=(1,0,0),
  // y=(0,1,0), z=(0,0,1) for H3, with z = x y x^-1 y^-1 central.
  std::vector<GroupElement> generators() const;
  std::vector<std::string> generator_names() const;

  // g_1, ..., g_count of the fixed enumeration. g_1 is the identity.
  // Z^d: shells of growing 1-norm; H3: shells of growing sup-norm. Within a
  // shell, coordinates are compared left to right by larger absolute value
  // first, then positive before negative.
  std::vector<GroupElement> enumerate_prefix(std::size_t count) const;

  // Z^d: [-r, r]^d. H3: |a|,|b| <= r, |c| <= r^2.
  ElementSet box(std::int64_t radius) const;
  // Cardinality of box(radius) without materializing it.
  std::int64_t box_size(std::int64_t radius) const;

  friend bool operator==(const Group& a, const Group& b) noexcept {
    return a.kind_ == b.kind_ && a.rank_ == b.rank_;
  }

 private:
  Group(GroupKind kind, int rank, std::string name);
  void require_member(const GroupElement& a, const char* op) const;

  GroupKind kind_;
  int rank_;
  std::string name_;
};

// Sorts and removes duplicates.
ElementSet make_set(std::vector<GroupElement> elements);
bool set_contains(const ElementSet& set, const GroupElement& g);
ElementSet set_union(const ElementSet& a, const ElementSet& b);
// { g h : h in set }. Left translation preserves the lexicographic order of
// canonical forms in both supported groups, so the result stays sorted.
ElementSet translate(const Group& group, const GroupElement& g, const ElementSet& set);
// |a \ b| + |b \ a| by a single merge pass.
std::int64_t symmetric_difference_size(const ElementSet& a, const ElementSet& b);

namespace checked {
std::int64_t add(std::int64_t a, std::int64_t b);
std::int64_t sub(std::int64_t a, std::int64_t b);
std::int64_t mul(std::int64_t a, std::int64_t b);
std::int64_t neg(std::int64_t a);
}  // namespace checked

}  // namespace ergolab
