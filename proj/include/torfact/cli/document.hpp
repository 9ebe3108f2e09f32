#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "torfact/sampling.hpp"
#include "torfact/series.hpp"

namespace torfact::cli {

/// Reads a coefficient document:
///   {"k": 1, "n": 2, "entries": [{"row": 0, "col": 0,
///     "terms": [{"index": [2], "re": 1.0, "im": 0.0}]}]}
/// Errors carry the JSON position (line/column for syntax, pointer path for
/// content). Throws MalformedDocument, IndexArityMismatch, DuplicateTerm.
MatrixSeries parse_document(std::string_view text);

/// Canonical text: entries ordered by (row, col), terms by index, zero
/// entries omitted, doubles printed in shortest round-trip form.
std::string serialize(const MatrixSeries& a);

MatrixSeries read_document(const std::string& path);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// Binary sample dump, little-endian: "TFSM", u32 k, u32 sizes[k], u32 n,
/// then per node (row-major, last axis fastest) the n x n matrix in row-major
/// order as (re, im) doubles.
void write_samples(const std::string& path, const SampledMap& samples);
SampledMap read_samples(const std::string& path);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string digest(std::string_view bytes);

}  // namespace torfact::cli
