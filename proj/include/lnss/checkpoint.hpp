#pragma once

#include <filesystem>

#include "lnss/td3.hpp"

namespace lnss {

// Text checkpoint: a versioned header, then each network as named tensors
// with explicit shapes. Doubles are written with round-trip precision, so
// save -> load -> save is byte-identical.
//
//   lnsslab-checkpoint v1
//   meta state_dim <d>
//   meta action_dim <d>
//   meta hidden <d>
//   mlp <name> <linear|tanh> <bound>
//   tensor <name>.w0 <rows> <cols>
//   <rows lines of cols doubles>
//   tensor <name>.b0 1 <n>
//   ...
void save_agent(const std::filesystem::path& path, const Td3Agent& agent);

// Rebuilds an agent from a checkpoint; optimizer state starts fresh.
Td3Agent load_agent(const std::filesystem::path& path, const Td3Options& opts);

}  // namespace lnss
