#pragma once

#include <json.hpp>
#include <string>

#include "rotorcut/rbm.hpp"

namespace rotorcut {

/// Binary parameter checkpoint, all fields little-endian:
///   char[4]  magic "RBMP"
///   uint32   packing version (kPackingVersion)
///   uint32   n (visible units)
///   uint32   m (hidden units)
///   uint64   P = n*m + 2(n+m)
///   double[P] packed parameters (see RbmParams)
/// The config is written next to it as <path>.json.
void write_checkpoint(const std::string& path, const RbmParams& params,
                      const nlohmann::json& config);

RbmParams read_checkpoint(const std::string& path);

}  // namespace rotorcut
