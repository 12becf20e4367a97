#include "punwrap/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace punwrap {

namespace {

constexpr char kMagic[4] = {'P', 'H', 'W', 'R'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint16_t kFlagTruth = 1;

template <typename T>
void put(std::ostream& os, T value) {
  // the toolchains we target are little-endian; fail loudly otherwise
  static_assert(std::endian::native == std::endian::little);
  os.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(value));
  if (!is) throw FieldIoError("truncated field stream");
  return value;
}

}  // namespace

void write_field(std::ostream& os, const WrappedField& f) {
  if (f.rows < 1 || f.cols < 1 ||
      f.psi.size() != static_cast<size_t>(f.rows) * f.cols)
    throw FieldIoError("field dimensions do not match the sample count");
  if (f.truth_n && f.truth_n->size() != f.psi.size())
    throw FieldIoError("truth layer size mismatch");

  os.write(kMagic, 4);
  put<std::uint16_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.rows));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.cols));
  put<std::uint16_t>(os, f.truth_n ? kFlagTruth : 0);
  for (double v : f.psi) put<float>(os, static_cast<float>(v));
  if (f.truth_n)
    for (int n : *f.truth_n) put<std::int32_t>(os, n);

  nlohmann::json meta;
  meta["shape"] = f.shape;
  meta["noise_variance"] = f.noise_variance;
  meta["seed"] = f.seed;
  os << meta.dump();
  if (!os) throw FieldIoError("write failed");
}

WrappedField read_field(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw FieldIoError("not a PHWR field stream");
  if (get<std::uint16_t>(is) != kVersion)
    throw FieldIoError("unsupported PHWR version");
  const auto rows = get<std::uint32_t>(is);
  const auto cols = get<std::uint32_t>(is);
  const auto flags = get<std::uint16_t>(is);
  if (rows < 1 || cols < 1 || rows > (1u << 20) || cols > (1u << 20))
    throw FieldIoError("implausible field dimensions");

  WrappedField f;
  f.rows = static_cast<int>(rows);
  f.cols = static_cast<int>(cols);
  const size_t count = static_cast<size_t>(rows) * cols;
  f.psi.resize(count);
  for (double& v : f.psi) v = static_cast<double>(get<float>(is));
  if (flags & kFlagTruth) {
    std::vector<int> truth(count);
    for (int& n : truth) n = get<std::int32_t>(is);
    f.truth_n = std::move(truth);
  }

  std::stringstream trailer;
  trailer << is.rdbuf();
  if (!trailer.str().empty()) {
    nlohmann::json meta = nlohmann::json::parse(trailer.str(), nullptr, false);
    if (meta.is_discarded()) throw FieldIoError("corrupt metadata trailer");
    f.shape = meta.value("shape", std::string());
    f.noise_variance = meta.value("noise_variance", 0.0);
    f.seed = meta.value("seed", std::uint64_t{0});
  }
  return f;
}

void write_field_file(const std::string& path, const WrappedField& f) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw FieldIoError("cannot open " + tmp + " for writing");
    write_field(os, f);
    os.flush();
    if (!os) throw FieldIoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FieldIoError("rename failed: " + path + ": " + ec.message());
  }
}

WrappedField read_field_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FieldIoError("cannot open " + path);
  return read_field(is);
}

}  // namespace punwrap
