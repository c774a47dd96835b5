#include "mgvar/cell_set.hpp"

#include <algorithm>
#include <cassert>

namespace mgvar {

std::size_t CellSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> CellSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < bits_.size(); ++c) {
    if (bits_[c]) out.push_back(c);
  }
  return out;
}

CellSet CellSet::complement() const {
  CellSet out(bits_.size());
  for (std::size_t c = 0; c < bits_.size(); ++c) out.bits_[c] = bits_[c] ? 0 : 1;
  return out;
}

CellSet CellSet::operator&(const CellSet& other) const {
  assert(other.size() == size());
  CellSet out(bits_.size());
  for (std::size_t c = 0; c < bits_.size(); ++c) out.bits_[c] = bits_[c] & other.bits_[c];
  return out;
}

CellSet CellSet::operator|(const CellSet& other) const {
  assert(other.size() == size());
  CellSet out(bits_.size());
  for (std::size_t c = 0; c < bits_.size(); ++c) out.bits_[c] = bits_[c] | other.bits_[c];
  return out;
}

CellSet CellSet::minus(const CellSet& other) const {
  assert(other.size() == size());
  CellSet out(bits_.size());
  for (std::size_t c = 0; c < bits_.size(); ++c) {
    out.bits_[c] = (bits_[c] && !other.bits_[c]) ? 1 : 0;
  }
  return out;
}

bool CellSet::subset_of(const CellSet& other) const {
  assert(other.size() == size());
  for (std::size_t c = 0; c < bits_.size(); ++c) {
    if (bits_[c] && !other.bits_[c]) return false;
  }
  return true;
}

}  // namespace mgvar
