#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "taglm/model.hpp"
#include "taglm/tokenizer.hpp"
#include "taglm/trainer.hpp"

namespace taglm {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  ModelParams params;
  Vocabulary vocab;
  TrainConfig config;
};

/// JSON body followed by a `checksum fnv1a64 <hex>` trailer line covering
/// every byte before it. Doubles are written in shortest round-trip form.
std::string serialize_checkpoint(const Checkpoint& ckpt);
/// Throws ChecksumMismatch, FormatVersionMismatch, DimensionMismatch.
Checkpoint parse_checkpoint(std::string_view text);

/// Throws IoError.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace taglm
