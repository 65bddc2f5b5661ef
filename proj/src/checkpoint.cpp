#include "rotorcut/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace rotorcut {

namespace {

constexpr std::array<char, 4> kMagic{'R', 'B', 'M', 'P'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t k = 0; k < sizeof(T); ++k)
    bytes[k] = static_cast<char>((value >> (8 * k)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  T value = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) value |= static_cast<T>(bytes[k]) << (8 * k);
  return value;
}

}  // namespace

void write_checkpoint(const std::string& path, const RbmParams& params,
                      const nlohmann::json& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  const Eigen::VectorXd packed = params.pack();
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kPackingVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.num_visible()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.num_hidden()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(packed.size()));
  for (Eigen::Index k = 0; k < packed.size(); ++k)
    put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(packed[k]));
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);

  nlohmann::json sidecar = config;
  sidecar["packing_version"] = kPackingVersion;
  sidecar["n"] = params.num_visible();
  sidecar["m"] = params.num_hidden();
  std::ofstream side(path + ".json");
  if (!side) throw std::runtime_error("cannot write checkpoint sidecar: " + path + ".json");
  side << sidecar.dump(2) << '\n';
}

RbmParams read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::array<char, 4> magic;
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("checkpoint: bad magic in " + path);
  const auto version = get_le<std::uint32_t>(in);
  if (version != kPackingVersion)
    throw std::runtime_error("checkpoint: unsupported packing version " + std::to_string(version));
  const auto n = static_cast<int>(get_le<std::uint32_t>(in));
  const auto m = static_cast<int>(get_le<std::uint32_t>(in));
  const auto size = get_le<std::uint64_t>(in);
  if (n < 1 || m < 1 || size != static_cast<std::uint64_t>(RbmParams::packed_size(n, m)))
    throw std::runtime_error("checkpoint: inconsistent header in " + path);
  Eigen::VectorXd packed(static_cast<Eigen::Index>(size));
  for (Eigen::Index k = 0; k < packed.size(); ++k)
    packed[k] = std::bit_cast<double>(get_le<std::uint64_t>(in));
  return RbmParams::unpack(n, m, packed);
}

}  // namespace rotorcut
