#pragma once

#include <cstddef>
#include <string>

#include "signal.hpp"

namespace ptycho {

// Array containers shared by the file formats and the C API. rank 1 uses d1
// only; rank 2 is row-major d1 x d2.
struct CArray {
  std::size_t rank = 1;
  std::size_t d1 = 0, d2 = 1;
  CVec v;
};

struct RArray {
  std::size_t rank = 1;
  std::size_t d1 = 0, d2 = 1;
  RVec v;
};

enum class FileFormat { bin, csv };

// Binary: magic "PTYC"/"PTYR", u16 version = 1, u16 rank, dims as u64 LE,
// f64 LE payload (complex interleaved re/im), row-major. CSV: header line
// "PTYC,rank,dims..." then one matrix row per line, complex entries as
// "re+imj" with 17 significant digits. All writes are atomic (temp+rename).
void write_carray(const CArray& a, const std::string& path, FileFormat fmt);
void write_rarray(const RArray& a, const std::string& path, FileFormat fmt);

// Format is sniffed from the file contents.
CArray read_carray(const std::string& path);
RArray read_rarray(const std::string& path);

} // namespace ptycho
