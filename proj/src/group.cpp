#include "ergolab/group.hpp"

#include "ergolab/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace ergolab {

namespace checked {

std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in group arithmetic");
  return r;
}

std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in group arithmetic");
  return r;
}

std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in group arithmetic");
  return r;
}

std::int64_t neg(std::int64_t a) { return sub(0, a); }

}  // namespace checked

std::string to_string(const GroupElement& g) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < g.rank; ++i) {
    if (i) out << ',';
    out << g.coords[i];
  }
  out << ')';
  return out.str();
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
  std::size_t h = static_cast<std::size_t>(g.kind) * 0x9e3779b97f4a7c15ULL + g.rank;
  for (std::size_t i = 0; i < g.rank; ++i) {
    h ^= std::hash<std::int64_t>{}(g.coords[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Group::Group(GroupKind kind, int rank, std::string name)
    : kind_(kind), rank_(rank), name_(std::move(name)) {}

Group Group::lattice(int rank) {
  if (rank < 1 || rank > kMaxLatticeRank)
    throw StructuralError("lattice rank must be in [1, " + std::to_string(kMaxLatticeRank) + "]");
  return Group(GroupKind::kLattice, rank, rank == 1 ? "Z" : "Z^" + std::to_string(rank));
}

Group Group::heisenberg() { return Group(GroupKind::kHeisenberg, 3, "H3"); }

Group Group::from_name(std::string_view name) {
  if (name == "Z") return integers();
  if (name == "H3") return heisenberg();
  if (name.size() == 3 && name.substr(0, 2) == "Z^" && name[2] >= '1' && name[2] <= '9')
    return lattice(name[2] - '0');
  throw StructuralError("unknown group '" + std::string(name) + "' (expected Z, Z^d or H3)");
}

GroupElement Group::identity() const {
  GroupElement e;
  e.kind = kind_;
  e.rank = static_cast<std::uint8_t>(rank_);
  return e;
}

GroupElement Group::element(std::span<const std::int64_t> coords) const {
  if (static_cast<int>(coords.size()) != rank_)
    throw StructuralError("group " + name_ + " expects " + std::to_string(rank_) +
                          " coordinates, got " + std::to_string(coords.size()));
  GroupElement g = identity();
  std::copy(coords.begin(), coords.end(), g.coords.begin());
  return g;
}

bool Group::contains(const GroupElement& a) const noexcept {
  return a.kind == kind_ && a.rank == rank_;
}

void Group::require_member(const GroupElement& a, const char* op) const {
  if (!contains(a))
    throw StructuralError(std::string(op) + ": element " + to_string(a) + " is not in group " + name_);
}

GroupElement Group::multiply(const GroupElement& a, const GroupElement& b) const {
  require_member(a, "multiply");
  require_member(b, "multiply");
  GroupElement r = identity();
  for (int i = 0; i < rank_; ++i) r.coords[i] = checked::add(a.coords[i], b.coords[i]);
  if (kind_ == GroupKind::kHeisenberg) {
    r.coords[2] = checked::add(r.coords[2], checked::mul(a.coords[0], b.coords[1]));
  }
  return r;
}

GroupElement Group::inverse(const GroupElement& a) const {
  require_member(a, "inverse");
  GroupElement r = identity();
  for (int i = 0; i < rank_; ++i) r.coords[i] = checked::neg(a.coords[i]);
  if (kind_ == GroupKind::kHeisenberg) {
    // (a,b,c)^-1 = (-a, -b, ab - c)
    r.coords[2] = checked::sub(checked::mul(a.coords[0], a.coords[1]), a.coords[2]);
  }
  return r;
}

std::vector<GroupElement> Group::generators() const {
  std::vector<GroupElement> gens;
  for (int i = 0; i < rank_; ++i) {
    GroupElement g = identity();
    g.coords[i] = 1;
    gens.push_back(g);
  }
  return gens;
}

std::vector<std::string> Group::generator_names() const {
  if (kind_ == GroupKind::kHeisenberg) return {"x", "y", "z"};
  std::vector<std::string> names;
  for (int i = 1; i <= rank_; ++i) names.push_back("e" + std::to_string(i));
  return names;
}

namespace {

bool shell_order(const GroupElement& a, const GroupElement& b) {
  for (std::size_t i = 0; i < a.rank; ++i) {
    const std::int64_t x = a.coords[i], y = b.coords[i];
    if (x == y) continue;
    const std::int64_t ax = x < 0 ? -x : x, ay = y < 0 ? -y : y;
    if (ax != ay) return ax > ay;
    return x > 0;
  }
  return false;
}

// All vectors in Z^rank with 1-norm exactly r.
void l1_shell(const GroupElement& base, int pos, int rank, std::int64_t remaining,
              std::vector<GroupElement>& out) {
  if (pos == rank - 1) {
    GroupElement g = base;
    g.coords[pos] = remaining;
    out.push_back(g);
    if (remaining != 0) {
      g.coords[pos] = -remaining;
      out.push_back(g);
    }
    return;
  }
  for (std::int64_t v = 0; v <= remaining; ++v) {
    GroupElement g = base;
    g.coords[pos] = v;
    l1_shell(g, pos + 1, rank, remaining - v, out);
    if (v != 0) {
      g.coords[pos] = -v;
      l1_shell(g, pos + 1, rank, remaining - v, out);
    }
  }
}

}  // namespace

std::vector<GroupElement> Group::enumerate_prefix(std::size_t count) const {
  if (count == 0) throw DomainError("enumerate_prefix: count must be positive");
  std::vector<GroupElement> out;
  out.reserve(count);
  for (std::int64_t r = 0; out.size() < count; ++r) {
    std::vector<GroupElement> shell;
    if (kind_ == GroupKind::kLattice) {
      l1_shell(identity(), 0, rank_, r, shell);
    } else {
      for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t b = -r; b <= r; ++b)
          for (std::int64_t c = -r; c <= r; ++c) {
            if (std::max({std::llabs(a), std::llabs(b), std::llabs(c)}) != r) continue;
            shell.push_back(element({a, b, c}));
          }
    }
    std::sort(shell.begin(), shell.end(), shell_order);
    for (const auto& g : shell) {
      if (out.size() == count) break;
      out.push_back(g);
    }
  }
  return out;
}

std::int64_t Group::box_size(std::int64_t radius) const {
  if (radius < 0) throw DomainError("box radius must be nonnegative");
  const std::int64_t side = checked::add(checked::mul(2, radius), 1);
  if (kind_ == GroupKind::kHeisenberg) {
    const std::int64_t central = checked::add(checked::mul(2, checked::mul(radius, radius)), 1);
    return checked::mul(checked::mul(side, side), central);
  }
  std::int64_t n = 1;
  for (int i = 0; i < rank_; ++i) n = checked::mul(n, side);
  return n;
}

ElementSet Group::box(std::int64_t radius) const {
  const std::int64_t size = box_size(radius);
  ElementSet out;
  out.reserve(static_cast<std::size_t>(size));
  if (kind_ == GroupKind::kHeisenberg) {
    const std::int64_t cr = checked::mul(radius, radius);
    for (std::int64_t a = -radius; a <= radius; ++a)
      for (std::int64_t b = -radius; b <= radius; ++b)
        for (std::int64_t c = -cr; c <= cr; ++c) out.push_back(element({a, b, c}));
    return out;
  }
  // Odometer over [-r, r]^d in lexicographic order.
  GroupElement g = identity();
  for (int i = 0; i < rank_; ++i) g.coords[i] = -radius;
  for (;;) {
    out.push_back(g);
    int i = rank_ - 1;
    while (i >= 0 && g.coords[i] == radius) {
      g.coords[i] = -radius;
      --i;
    }
    if (i < 0) break;
    ++g.coords[i];
  }
  return out;
}

ElementSet make_set(std::vector<GroupElement> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return elements;
}

bool set_contains(const ElementSet& set, const GroupElement& g) {
  return std::binary_search(set.begin(), set.end(), g);
}

ElementSet set_union(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ElementSet translate(const Group& group, const GroupElement& g, const ElementSet& set) {
  if (!group.contains(g)) throw StructuralError("translate: element " + to_string(g) + " is not in group " + group.name());
  ElementSet out(set);
  const int rank = group.rank();
  const bool heisenberg = group.kind() == GroupKind::kHeisenberg;
  for (auto& h : out) {
    if (!group.contains(h)) throw StructuralError("translate: set element " + to_string(h) + " is not in group " + group.name());
    const std::int64_t b = h.coords[1];
    for (int i = 0; i < rank; ++i) h.coords[i] = checked::add(g.coords[i], h.coords[i]);
    if (heisenberg) h.coords[2] = checked::add(h.coords[2], checked::mul(g.coords[0], b));
  }
  return out;
}

std::int64_t symmetric_difference_size(const ElementSet& a, const ElementSet& b) {
  std::int64_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++count;
      ++i;
    } else if (*j < *i) {
      ++count;
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  count += static_cast<std::int64_t>(a.end() - i) + static_cast<std::int64_t>(b.end() - j);
  return count;
}

}  // namespace ergolab
