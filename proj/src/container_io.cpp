#include "sigspace/container_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace sigspace {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'G', 'S', 'P'};

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error("container truncated");
  return value;
}

ContainerHeader read_header(std::ifstream& in, const std::filesystem::path& path) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kMagic) throw Error("not a sigspace container: " + path.string());
  ContainerHeader h;
  h.version = get<std::uint32_t>(in);
  if (h.version != 1) throw Error("unsupported container version " + std::to_string(h.version));
  const auto tag = get<std::uint32_t>(in);
  if (tag > 1) throw Error("bad scalar tag in " + path.string());
  h.complex = tag == 1;
  const auto kind = get<std::uint32_t>(in);
  if (kind > static_cast<std::uint32_t>(DictionaryKind::custom)) {
    throw Error("bad dictionary kind in " + path.string());
  }
  h.kind = static_cast<DictionaryKind>(kind);
  h.redundancy = get<std::uint64_t>(in);
  h.rows = get<std::uint64_t>(in);
  h.cols = get<std::uint64_t>(in);
  return h;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

template <class S>
void save_matrix(const std::filesystem::path& path, const Mat<S>& matrix, DictionaryKind kind,
                 std::uint64_t redundancy) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kMagic.data(), 4);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, is_complex_v<S> ? 1 : 0);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(kind));
  put<std::uint64_t>(out, redundancy);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.rows()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.cols()));
  for (Index j = 0; j < matrix.cols(); ++j) {
    for (Index i = 0; i < matrix.rows(); ++i) {
      if constexpr (is_complex_v<S>) {
        put<double>(out, matrix(i, j).real());
        put<double>(out, matrix(i, j).imag());
      } else {
        put<double>(out, matrix(i, j));
      }
    }
  }
  if (!out) throw Error("write failed: " + path.string());
}

template <class S>
void save_dictionary(const std::filesystem::path& path, const Dictionary<S>& D) {
  save_matrix<S>(path, D.matrix(), D.kind(), static_cast<std::uint64_t>(D.redundancy()));
}

ContainerHeader read_container_header(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_header(in, path);
}

namespace {

template <class S>
Mat<S> read_payload(std::ifstream& in, const ContainerHeader& h, const std::filesystem::path& path) {
  if constexpr (!is_complex_v<S>) {
    if (h.complex) throw DimensionError("complex container loaded into a real field: " + path.string());
  }
  const auto rows = static_cast<Index>(h.rows);
  const auto cols = static_cast<Index>(h.cols);
  Mat<S> m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = get<double>(in);
      if (h.complex) {
        const double im = get<double>(in);
        if constexpr (is_complex_v<S>) m(i, j) = S(re, im);
      } else {
        m(i, j) = S(re);
      }
    }
  }
  return m;
}

}  // namespace

template <class S>
Mat<S> load_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  const ContainerHeader h = read_header(in, path);
  return read_payload<S>(in, h, path);
}

template <class S>
Dictionary<S> load_dictionary(const std::filesystem::path& path) {
  auto in = open_in(path);
  const ContainerHeader h = read_header(in, path);
  return Dictionary<S>(read_payload<S>(in, h, path), h.kind, static_cast<Index>(h.redundancy));
}

#define SIGSPACE_INSTANTIATE(S)                                                                \
  template void save_matrix<S>(const std::filesystem::path&, const Mat<S>&, DictionaryKind,     \
                               std::uint64_t);                                                 \
  template void save_dictionary<S>(const std::filesystem::path&, const Dictionary<S>&);        \
  template Mat<S> load_matrix<S>(const std::filesystem::path&);                                \
  template Dictionary<S> load_dictionary<S>(const std::filesystem::path&);

SIGSPACE_INSTANTIATE(Real)
SIGSPACE_INSTANTIATE(Complex)
#undef SIGSPACE_INSTANTIATE

}  // namespace sigspace
