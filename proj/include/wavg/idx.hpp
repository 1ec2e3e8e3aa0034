#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "wavg/problems.hpp"

namespace wavg {

// Raw IDX containers (big-endian 4-byte magic and dimension sizes followed
// by a uint8 payload); magic 0x00000803 for images, 0x00000801 for labels.

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803u;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801u;

struct IdxImageSet {
    std::uint32_t count = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> pixels;  // count * rows * cols bytes
};

struct IdxLabelSet {
    std::uint32_t count = 0;
    std::vector<std::uint8_t> labels;  // values 0..9
};

/// Parse an uncompressed IDX image file.  Throws std::runtime_error with a
/// distinct message for a wrong magic (including the label-for-image mixup),
/// a truncated payload, or dimension overflow.
IdxImageSet load_idx_images(const std::filesystem::path& path);

/// Parse an uncompressed IDX label file; labels above 9 are rejected.
IdxLabelSet load_idx_labels(const std::filesystem::path& path);

// Writers for the same format, used to build test fixtures and for
// byte-identical round-trips.
void write_idx_images(const std::filesystem::path& path, const IdxImageSet& images);
void write_idx_labels(const std::filesystem::path& path, const IdxLabelSet& labels);

/// Assemble the binary classification problem: features are pixels scaled by
/// 1/255 into [0,1]; the label is +1 where the digit equals target_digit and
/// -1 otherwise.  Throws on count mismatch.
LogisticProblem build_logistic_problem(const IdxImageSet& images, const IdxLabelSet& labels,
                                       int target_digit = 0);

}  // namespace wavg
