#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mgvar {

/// A subset of the finest cells of a filtration.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(std::size_t cells, bool filled = false)
      : bits_(cells, filled ? 1 : 0) {}

  std::size_t size() const { return bits_.size(); }
  bool contains(std::size_t cell) const { return bits_[cell] != 0; }
  void insert(std::size_t cell) { bits_[cell] = 1; }
  void erase(std::size_t cell) { bits_[cell] = 0; }
  void assign(std::size_t cell, bool member) { bits_[cell] = member ? 1 : 0; }

  std::size_t count() const;
  bool none() const { return count() == 0; }
  std::vector<std::size_t> members() const;

  CellSet complement() const;
  CellSet operator&(const CellSet& other) const;
  CellSet operator|(const CellSet& other) const;
  // Members of *this that are not in `other`.
  CellSet minus(const CellSet& other) const;
  bool subset_of(const CellSet& other) const;

  friend bool operator==(const CellSet&, const CellSet&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace mgvar
