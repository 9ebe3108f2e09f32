#include "torfact/multi_index.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include "torfact/error.hpp"

namespace torfact {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SpectrumViolation: return "SpectrumViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularSample: return "SingularSample";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NearSingular: return "NearSingular";
    case ErrorKind::AmbiguousWinding: return "AmbiguousWinding";
    case ErrorKind::NonzeroWinding: return "NonzeroWinding";
    case ErrorKind::PhaseJumpTooLarge: return "PhaseJumpTooLarge";
    case ErrorKind::IdenticallySingular: return "IdenticallySingular";
    case ErrorKind::UnstableSections: return "UnstableSections";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotNormalizedOnSubtorus: return "NotNormalizedOnSubtorus";
    case ErrorKind::NotOnSphere: return "NotOnSphere";
    case ErrorKind::ApproximationTooCoarse: return "ApproximationTooCoarse";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::IndexArityMismatch: return "IndexArityMismatch";
    case ErrorKind::DuplicateTerm: return "DuplicateTerm";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

MultiIndex::MultiIndex(std::size_t dim) {
  if (dim > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument, "torus dimension " + std::to_string(dim) + " exceeds " +
                                                std::to_string(kMaxDim));
  }
  dim_ = static_cast<std::uint8_t>(dim);
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(entries.size()) {
  std::copy(entries.begin(), entries.end(), entries_.begin());
}

MultiIndex::MultiIndex(std::span<const int> entries) : MultiIndex(entries.size()) {
  std::copy(entries.begin(), entries.end(), entries_.begin());
}

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t axis, int value) {
  MultiIndex j(dim);
  j.entries_.at(axis) = value;
  return j;
}

bool MultiIndex::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.begin() + dim_, [](int v) { return v == 0; });
}

int MultiIndex::lex_sign() const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (entries_[i] > 0) return 1;
    if (entries_[i] < 0) return -1;
  }
  return 0;
}

int MultiIndex::max_abs() const noexcept {
  int m = 0;
  for (std::size_t i = 0; i < dim_; ++i) m = std::max(m, std::abs(entries_[i]));
  return m;
}

MultiIndex MultiIndex::operator-() const {
  MultiIndex r = *this;
  for (std::size_t i = 0; i < dim_; ++i) r.entries_[i] = -r.entries_[i];
  return r;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& other) {
  if (other.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "multi-index dimensions differ");
  for (std::size_t i = 0; i < dim_; ++i) entries_[i] += other.entries_[i];
  return *this;
}

MultiIndex& MultiIndex::operator-=(const MultiIndex& other) {
  if (other.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "multi-index dimensions differ");
  for (std::size_t i = 0; i < dim_; ++i) entries_[i] -= other.entries_[i];
  return *this;
}

MultiIndex MultiIndex::scaled(int factor) const {
  MultiIndex r = *this;
  for (std::size_t i = 0; i < dim_; ++i) r.entries_[i] *= factor;
  return r;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += std::to_string(entries_[i]);
  }
  return s + ")";
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& j) { return os << j.to_string(); }

}  // namespace torfact
