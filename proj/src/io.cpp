#include "io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace ptycho {

namespace {

constexpr char kMagicC[4] = {'P', 'T', 'Y', 'C'};
constexpr char kMagicR[4] = {'P', 'T', 'Y', 'R'};

void put_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(buf, bits);
}

std::uint16_t get_u16(const std::string& buf, std::size_t& pos) {
  if (pos + 2 > buf.size()) fail(errc::io_failure, "truncated header");
  std::uint16_t v = static_cast<std::uint16_t>(static_cast<unsigned char>(buf[pos])) |
                    static_cast<std::uint16_t>(static_cast<unsigned char>(buf[pos + 1])) << 8;
  pos += 2;
  return v;
}

std::uint64_t get_u64(const std::string& buf, std::size_t& pos) {
  if (pos + 8 > buf.size()) fail(errc::io_failure, "truncated header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
  pos += 8;
  return v;
}

double get_f64(const std::string& buf, std::size_t& pos) {
  std::uint64_t bits = get_u64(buf, pos);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void atomic_write(const std::string& path, const std::string& data) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io_failure, "cannot open " + tmp + " for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) fail(errc::io_failure, "write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    fail(errc::io_failure, "cannot rename " + tmp + " to " + path);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_failure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt_f64(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_cplx(cplx z) {
  std::string s = fmt_f64(z.real());
  std::string im = fmt_f64(z.imag());
  if (!im.empty() && im[0] != '-') s += "+";
  return s + im + "j";
}

cplx parse_cplx(const std::string& tok) {
  if (tok.empty() || tok.back() != 'j') fail(errc::io_failure, "bad complex entry: " + tok);
  std::string body = tok.substr(0, tok.size() - 1);
  // split at the sign of the imaginary part (not a leading sign, not an
  // exponent sign)
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) fail(errc::io_failure, "bad complex entry: " + tok);
  return cplx(std::stod(body.substr(0, split)), std::stod(body.substr(split)));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct Header {
  bool is_complex = false;
  std::size_t rank = 1, d1 = 0, d2 = 1;
};

std::string bin_payload(const Header& h, const std::vector<double>& scalars) {
  std::string buf(h.is_complex ? kMagicC : kMagicR, 4);
  put_u16(buf, 1);
  put_u16(buf, static_cast<std::uint16_t>(h.rank));
  put_u64(buf, h.d1);
  if (h.rank == 2) put_u64(buf, h.d2);
  for (double v : scalars) put_f64(buf, v);
  return buf;
}

std::string csv_payload(const Header& h, const std::vector<std::string>& entries) {
  std::string buf = h.is_complex ? "PTYC" : "PTYR";
  buf += "," + std::to_string(h.rank) + "," + std::to_string(h.d1);
  if (h.rank == 2) buf += "," + std::to_string(h.d2);
  buf += "\n";
  std::size_t cols = h.rank == 2 ? h.d2 : h.d1;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    buf += entries[i];
    buf += ((i + 1) % cols == 0) ? "\n" : ",";
  }
  return buf;
}

Header check_dims(std::size_t rank, std::size_t d1, std::size_t d2, std::size_t count,
                  bool is_complex) {
  if (rank != 1 && rank != 2) fail(errc::io_failure, "unsupported array rank");
  Header h{is_complex, rank, d1, rank == 2 ? d2 : 1};
  if (h.d1 * h.d2 != count) fail(errc::io_failure, "array size does not match dims");
  return h;
}

} // namespace

void write_carray(const CArray& a, const std::string& path, FileFormat fmt) {
  Header h = check_dims(a.rank, a.d1, a.d2, a.v.size(), true);
  if (fmt == FileFormat::bin) {
    std::vector<double> scalars;
    scalars.reserve(a.v.size() * 2);
    for (const cplx& z : a.v) {
      scalars.push_back(z.real());
      scalars.push_back(z.imag());
    }
    atomic_write(path, bin_payload(h, scalars));
  } else {
    std::vector<std::string> entries;
    entries.reserve(a.v.size());
    for (const cplx& z : a.v) entries.push_back(fmt_cplx(z));
    atomic_write(path, csv_payload(h, entries));
  }
}

void write_rarray(const RArray& a, const std::string& path, FileFormat fmt) {
  Header h = check_dims(a.rank, a.d1, a.d2, a.v.size(), false);
  if (fmt == FileFormat::bin) {
    atomic_write(path, bin_payload(h, a.v));
  } else {
    std::vector<std::string> entries;
    entries.reserve(a.v.size());
    for (double v : a.v) entries.push_back(fmt_f64(v));
    atomic_write(path, csv_payload(h, entries));
  }
}

namespace {

Header read_header(const std::string& data, std::size_t& pos, std::vector<std::string>* csv_rows) {
  // Both formats start with the magic; the CSV header continues with a comma.
  if (data.size() >= 5 &&
      (std::memcmp(data.data(), kMagicC, 4) == 0 || std::memcmp(data.data(), kMagicR, 4) == 0) &&
      data[4] != ',') {
    Header h;
    h.is_complex = data[3] == 'C';
    pos = 4;
    std::uint16_t version = get_u16(data, pos);
    if (version != 1) fail(errc::io_failure, "unsupported format version");
    h.rank = get_u16(data, pos);
    if (h.rank != 1 && h.rank != 2) fail(errc::io_failure, "unsupported array rank");
    h.d1 = get_u64(data, pos);
    h.d2 = h.rank == 2 ? get_u64(data, pos) : 1;
    return h;
  }
  // CSV
  std::istringstream in(data);
  std::string line;
  if (!std::getline(in, line)) fail(errc::io_failure, "empty file");
  std::vector<std::string> head = split_csv(line);
  if (head.size() < 3 || (head[0] != "PTYC" && head[0] != "PTYR"))
    fail(errc::io_failure, "unrecognized file header");
  Header h;
  h.is_complex = head[0] == "PTYC";
  h.rank = static_cast<std::size_t>(std::stoull(head[1]));
  if (h.rank != 1 && h.rank != 2) fail(errc::io_failure, "unsupported array rank");
  h.d1 = static_cast<std::size_t>(std::stoull(head[2]));
  h.d2 = 1;
  if (h.rank == 2) {
    if (head.size() < 4) fail(errc::io_failure, "missing second dimension");
    h.d2 = static_cast<std::size_t>(std::stoull(head[3]));
  }
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    for (std::string& tok : split_csv(line)) csv_rows->push_back(std::move(tok));
  }
  pos = std::string::npos; // marks CSV
  return h;
}

} // namespace

CArray read_carray(const std::string& path) {
  std::string data = slurp(path);
  std::size_t pos = 0;
  std::vector<std::string> toks;
  Header h = read_header(data, pos, &toks);
  if (!h.is_complex) fail(errc::io_failure, path + ": expected a complex array");
  CArray a;
  a.rank = h.rank;
  a.d1 = h.d1;
  a.d2 = h.d2;
  std::size_t count = h.d1 * h.d2;
  a.v.resize(count);
  if (pos != std::string::npos) {
    for (std::size_t i = 0; i < count; ++i) {
      double re = get_f64(data, pos);
      double im = get_f64(data, pos);
      a.v[i] = cplx(re, im);
    }
  } else {
    if (toks.size() != count) fail(errc::io_failure, path + ": entry count mismatch");
    for (std::size_t i = 0; i < count; ++i) a.v[i] = parse_cplx(toks[i]);
  }
  return a;
}

RArray read_rarray(const std::string& path) {
  std::string data = slurp(path);
  std::size_t pos = 0;
  std::vector<std::string> toks;
  Header h = read_header(data, pos, &toks);
  if (h.is_complex) fail(errc::io_failure, path + ": expected a real array");
  RArray a;
  a.rank = h.rank;
  a.d1 = h.d1;
  a.d2 = h.d2;
  std::size_t count = h.d1 * h.d2;
  a.v.resize(count);
  if (pos != std::string::npos) {
    for (std::size_t i = 0; i < count; ++i) a.v[i] = get_f64(data, pos);
  } else {
    if (toks.size() != count) fail(errc::io_failure, path + ": entry count mismatch");
    for (std::size_t i = 0; i < count; ++i) a.v[i] = std::stod(toks[i]);
  }
  return a;
}

} // namespace ptycho
