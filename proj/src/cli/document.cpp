#include "torfact/cli/document.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "torfact/error.hpp"

namespace torfact::cli {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::MalformedDocument, "at " + where + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(where, std::string("missing field '") + key + "'");
  return *it;
}

void only_fields(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) malformed(where, "unknown field '" + k + "'");
  }
}

long long integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) malformed(where, "expected an integer");
  return v.get<long long>();
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) malformed(where, "expected a number");
  return v.get<double>();
}

static_assert(std::endian::native == std::endian::little, "sample dumps assume a little-endian host");

void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorKind::MalformedDocument, "truncated sample dump");
  return v;
}

}  // namespace

MatrixSeries parse_document(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::MalformedDocument, e.what());
  }
  if (!doc.is_object()) malformed("/", "expected an object");
  only_fields(doc, {"k", "n", "entries"}, "/");
  const long long k = integer(field(doc, "k", "/"), "/k");
  const long long n = integer(field(doc, "n", "/"), "/n");
  if (k < 1 || k > static_cast<long long>(MultiIndex::kMaxDim)) malformed("/k", "torus dimension out of range");
  if (n < 1 || n > 64) malformed("/n", "matrix size out of range");
  const Json& entries = field(doc, "entries", "/");
  if (!entries.is_array()) malformed("/entries", "expected an array");

  MatrixSeries out(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
  std::set<std::pair<long long, long long>> seen;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const std::string where = "/entries/" + std::to_string(e);
    const Json& entry = entries[e];
    if (!entry.is_object()) malformed(where, "expected an object");
    only_fields(entry, {"row", "col", "terms"}, where);
    const long long row = integer(field(entry, "row", where), where + "/row");
    const long long col = integer(field(entry, "col", where), where + "/col");
    if (row < 0 || row >= n) malformed(where + "/row", "row outside the matrix");
    if (col < 0 || col >= n) malformed(where + "/col", "col outside the matrix");
    if (!seen.insert({row, col}).second) {
      throw Error(ErrorKind::DuplicateTerm, "at " + where + ": entry (" + std::to_string(row) + ", " +
                                                std::to_string(col) + ") appears twice");
    }
    const Json& terms = field(entry, "terms", where);
    if (!terms.is_array()) malformed(where + "/terms", "expected an array");
    ScalarSeries& target = out(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
    std::set<MultiIndex> indices;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tw = where + "/terms/" + std::to_string(t);
      const Json& term = terms[t];
      if (!term.is_object()) malformed(tw, "expected an object");
      only_fields(term, {"index", "re", "im"}, tw);
      const Json& index = field(term, "index", tw);
      if (!index.is_array()) malformed(tw + "/index", "expected an array");
      if (index.size() != static_cast<std::size_t>(k)) {
        throw Error(ErrorKind::IndexArityMismatch, "at " + tw + "/index: " + std::to_string(index.size()) +
                                                       " components for k = " + std::to_string(k));
      }
      MultiIndex j(static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < index.size(); ++i) {
        const long long v = integer(index[i], tw + "/index/" + std::to_string(i));
        if (v < -(1LL << 30) || v > (1LL << 30)) malformed(tw + "/index", "index component too large");
        j[i] = static_cast<int>(v);
      }
      if (!indices.insert(j).second) {
        throw Error(ErrorKind::DuplicateTerm, "at " + tw + ": index " + j.to_string() + " appears twice");
      }
      const double re = number(field(term, "re", tw), tw + "/re");
      const double im = number(field(term, "im", tw), tw + "/im");
      target.add_term(j, Complex(re, im));
    }
  }
  return out;
}

std::string serialize(const MatrixSeries& a) {
  Json doc;
  doc["k"] = a.dim();
  doc["n"] = a.rows();
  Json entries = Json::array();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const ScalarSeries& s = a(r, c);
      if (s.is_zero()) continue;
      Json terms = Json::array();
      for (const auto& [j, v] : s.terms()) {
        Json index = Json::array();
        for (int x : j.entries()) index.push_back(x);
        Json term;
        term["index"] = std::move(index);
        term["re"] = v.real();
        term["im"] = v.imag();
        terms.push_back(std::move(term));
      }
      Json entry;
      entry["row"] = r;
      entry["col"] = c;
      entry["terms"] = std::move(terms);
      entries.push_back(std::move(entry));
    }
  }
  doc["entries"] = std::move(entries);
  return doc.dump(1) + "\n";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw Error(ErrorKind::Io, "cannot write " + path);
  }
}

MatrixSeries read_document(const std::string& path) { return parse_document(read_text(path)); }

void write_samples(const std::string& path, const SampledMap& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out.write("TFSM", 4);
  put_u32(out, static_cast<std::uint32_t>(samples.dim()));
  for (int s : samples.grid().sizes()) put_u32(out, static_cast<std::uint32_t>(s));
  put_u32(out, static_cast<std::uint32_t>(samples.n()));
  std::vector<double> row(2 * samples.n());
  for (std::size_t node = 0; node < samples.node_count(); ++node) {
    for (std::size_t r = 0; r < samples.n(); ++r) {
      for (std::size_t c = 0; c < samples.n(); ++c) {
        const Complex v = samples.entry(node, r, c);
        row[2 * c] = v.real();
        row[2 * c + 1] = v.imag();
      }
      out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
  }
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
}

SampledMap read_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "TFSM", 4) != 0) {
    throw Error(ErrorKind::MalformedDocument, "not a sample dump: " + path);
  }
  const std::uint32_t k = get_u32(in);
  if (k < 1 || k > MultiIndex::kMaxDim) throw Error(ErrorKind::MalformedDocument, "bad dimension in sample dump");
  std::vector<int> sizes(k);
  for (auto& s : sizes) s = static_cast<int>(get_u32(in));
  const std::uint32_t n = get_u32(in);
  SampledMap out(GridShape(sizes), n);
  std::vector<double> row(2 * n);
  for (std::size_t node = 0; node < out.node_count(); ++node) {
    for (std::size_t r = 0; r < n; ++r) {
      if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)))) {
        throw Error(ErrorKind::MalformedDocument, "truncated sample dump");
      }
      for (std::size_t c = 0; c < n; ++c) out.entry(node, r, c) = Complex(row[2 * c], row[2 * c + 1]);
    }
  }
  return out;
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace torfact::cli
