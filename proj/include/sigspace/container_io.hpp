#pragma once

// Binary container for dictionaries, measurement matrices and vectors.
//
//   offset  size  field
//   0       4     magic "SGSP"
//   4       4     u32 format version (1)
//   8       4     u32 scalar tag: 0 = real, 1 = complex
//   12      4     u32 kind: DictionaryKind value (custom for plain matrices)
//   16      8     u64 redundancy
//   24      8     u64 rows
//   32      8     u64 cols
//   40      ...   column-major float64 payload, little-endian; complex entries
//                 are stored as interleaved (re, im) pairs
//
// Vectors are stored as rows x 1 matrices.

#include <cstdint>
#include <filesystem>

#include "sigspace/dictionary.hpp"

namespace sigspace {

struct ContainerHeader {
  std::uint32_t version = 1;
  bool complex = false;
  DictionaryKind kind = DictionaryKind::custom;
  std::uint64_t redundancy = 1;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
};

template <class S>
void save_matrix(const std::filesystem::path& path, const Mat<S>& matrix,
                 DictionaryKind kind = DictionaryKind::custom, std::uint64_t redundancy = 1);

template <class S>
void save_dictionary(const std::filesystem::path& path, const Dictionary<S>& D);

ContainerHeader read_container_header(const std::filesystem::path& path);

/// Loads a matrix; real payloads promote to complex, complex into real throws.
template <class S>
Mat<S> load_matrix(const std::filesystem::path& path);

template <class S>
Dictionary<S> load_dictionary(const std::filesystem::path& path);

}  // namespace sigspace
