#include "psel/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>
#include <vector>

#include "psel/errors.hpp"

namespace psel {

namespace {

constexpr char kMagic[8] = {'P', 'S', 'E', 'L', 'M', 'A', 'T', '1'};
constexpr std::streamoff kHeaderBytes = 24;  // magic + rows + cols

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

constexpr bool kLittle = std::endian::native == std::endian::little;

std::uint64_t byteswap64(std::uint64_t v) {
  v = ((v & 0x00000000FFFFFFFFULL) << 32) | ((v & 0xFFFFFFFF00000000ULL) >> 32);
  v = ((v & 0x0000FFFF0000FFFFULL) << 16) | ((v & 0xFFFF0000FFFF0000ULL) >> 16);
  v = ((v & 0x00FF00FF00FF00FFULL) << 8) | ((v & 0xFF00FF00FF00FF00ULL) >> 8);
  return v;
}

void write_u64(std::ofstream& out, std::uint64_t v) {
  if (!kLittle) v = byteswap64(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::istream& in, const std::string& path) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw IoError(path + ": truncated header");
  if (!kLittle) v = byteswap64(v);
  return v;
}

void swap_doubles_in_place(double* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const auto bits = byteswap64(std::bit_cast<std::uint64_t>(data[i]));
    data[i] = std::bit_cast<double>(bits);
  }
}

[[noreturn]] void csv_fail(const std::string& path, std::size_t line, const std::string& msg) {
  std::ostringstream os;
  os << path << ": line " << line << ": " << msg;
  throw IoError(os.str());
}

// Splits a line into numeric fields.  Comma mode trims surrounding blanks
// per field; whitespace mode treats any blank run as one separator.
void parse_fields(const std::string& line, CsvDelimiter delim, const std::string& path,
                  std::size_t line_no, std::vector<double>& out) {
  out.clear();
  const auto parse_one = [&](const char* first, const char* last) {
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    if (first == last) csv_fail(path, line_no, "empty field");
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
      csv_fail(path, line_no, "non-numeric field '" + std::string(first, last) + "'");
    if (!std::isfinite(value)) csv_fail(path, line_no, "non-finite value");
    out.push_back(value);
  };

  const char* begin = line.data();
  const char* end = begin + line.size();
  if (delim == CsvDelimiter::Comma) {
    const char* field = begin;
    for (const char* p = begin;; ++p) {
      if (p == end || *p == ',') {
        parse_one(field, p);
        if (p == end) break;
        field = p + 1;
      }
    }
  } else {
    const char* p = begin;
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      const char* field = p;
      while (p < end && *p != ' ' && *p != '\t' && *p != '\r') ++p;
      parse_one(field, p);
    }
  }
}

bool blank_line(const std::string& line) {
  for (char c : line)
    if (c != ' ' && c != '\t' && c != '\r') return false;
  return true;
}

}  // namespace

ColMatrix load_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open file");

  std::vector<double> values;
  std::vector<double> fields;
  std::string line;
  std::size_t line_no = 0;
  Index cols = -1;
  Index rows = 0;
  bool header_pending = opts.has_header;

  while (std::getline(in, line)) {
    ++line_no;
    if (blank_line(line)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    parse_fields(line, opts.delimiter, path, line_no, fields);
    if (cols < 0) {
      cols = static_cast<Index>(fields.size());
    } else if (static_cast<Index>(fields.size()) != cols) {
      std::ostringstream os;
      os << "expected " << cols << " fields, found " << fields.size();
      csv_fail(path, line_no, os.str());
    }
    values.insert(values.end(), fields.begin(), fields.end());
    ++rows;
  }
  if (rows == 0) throw IoError(path + ": no data rows");

  ColMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i) * cols + j];
  return m;
}

void save_csv(const ColMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open file for writing");
  char buf[64];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out.put(',');
      out << buf;
    }
    out.put('\n');
  }
  if (!out) throw IoError(path + ": write failed");
}

void save_bin(const ColMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open file for writing");
  out.write(kMagic, sizeof kMagic);
  write_u64(out, static_cast<std::uint64_t>(m.rows()));
  write_u64(out, static_cast<std::uint64_t>(m.cols()));
  if (kLittle) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m.size())));
  } else {
    for (Index i = 0; i < m.size(); ++i) {
      const auto bits = byteswap64(std::bit_cast<std::uint64_t>(m.data()[i]));
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!out) throw IoError(path + ": write failed");
}

MatrixStreamWriter::MatrixStreamWriter(const std::string& path, Index rows, Index cols)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw IoError(path + ": cannot open file for writing");
  if (rows < 1 || cols < 1) throw ContractError(path + ": matrix dimensions must be >= 1");
  expected_ = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  out_.write(kMagic, sizeof kMagic);
  write_u64(out_, static_cast<std::uint64_t>(rows));
  write_u64(out_, static_cast<std::uint64_t>(cols));
}

MatrixStreamWriter::~MatrixStreamWriter() {
  if (!finished_ && out_.is_open()) out_.close();
}

void MatrixStreamWriter::append(const double* values, std::size_t count) {
  if (finished_) throw ContractError(path_ + ": writer already finished");
  if (written_ + count > expected_) throw ContractError(path_ + ": more values than advertised");
  if (kLittle) {
    out_.write(reinterpret_cast<const char*>(values),
               static_cast<std::streamsize>(sizeof(double) * count));
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto bits = byteswap64(std::bit_cast<std::uint64_t>(values[i]));
      out_.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!out_) throw IoError(path_ + ": write failed");
  written_ += count;
}

void MatrixStreamWriter::finish() {
  if (finished_) return;
  if (written_ != expected_) throw ContractError(path_ + ": fewer values than advertised");
  out_.close();
  if (!out_) throw IoError(path_ + ": write failed");
  finished_ = true;
}

namespace {

// Validates the header and returns (rows, cols).
std::pair<Index, Index> read_header(std::istream& in, const std::string& path) {
  char magic[8];
  if (!in.read(magic, sizeof magic)) throw IoError(path + ": truncated header");
  if (std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw IoError(path + ": bad magic (not a PSELMAT1 file)");
  const std::uint64_t rows = read_u64(in, path);
  const std::uint64_t cols = read_u64(in, path);
  if (rows == 0 || cols == 0) throw IoError(path + ": empty matrix dimensions");
  constexpr std::uint64_t kMaxValues =
      static_cast<std::uint64_t>(std::numeric_limits<Index>::max()) / sizeof(double);
  if (cols != 0 && rows > kMaxValues / cols)
    throw IoError(path + ": matrix dimensions overflow");
  return {static_cast<Index>(rows), static_cast<Index>(cols)};
}

}  // namespace

ColMatrix load_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open file");
  const auto [rows, cols] = read_header(in, path);
  ColMatrix m(rows, cols);
  const std::streamsize bytes =
      static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m.size()));
  if (!in.read(reinterpret_cast<char*>(m.data()), bytes))
    throw IoError(path + ": truncated payload");
  if (!kLittle) swap_doubles_in_place(m.data(), static_cast<std::size_t>(m.size()));
  if (!m.allFinite()) throw IoError(path + ": non-finite values in payload");
  return m;
}

MatrixChunkReader::MatrixChunkReader(const std::string& path)
    : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw IoError(path + ": cannot open file");
  const auto [rows, cols] = read_header(in_, path_);
  rows_ = rows;
  cols_ = cols;
  in_.seekg(0, std::ios::end);
  const std::streamoff expected =
      kHeaderBytes + static_cast<std::streamoff>(sizeof(double)) * rows_ * cols_;
  if (in_.tellg() < expected) throw IoError(path + ": truncated payload");
}

ColMatrix MatrixChunkReader::read_rows(Index begin, Index count) {
  if (begin < 0 || count < 1 || begin + count > rows_)
    throw ContractError(path_ + ": chunk range out of bounds");
  ColMatrix chunk(count, cols_);
  for (Index j = 0; j < cols_; ++j) {
    const std::streamoff off =
        kHeaderBytes + static_cast<std::streamoff>(sizeof(double)) * (j * rows_ + begin);
    in_.seekg(off);
    if (!in_.read(reinterpret_cast<char*>(chunk.col(j).data()),
                  static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(count))))
      throw IoError(path_ + ": truncated payload");
  }
  if (!kLittle) swap_doubles_in_place(chunk.data(), static_cast<std::size_t>(chunk.size()));
  if (!chunk.allFinite()) throw IoError(path_ + ": non-finite values in payload");
  return chunk;
}

}  // namespace psel
