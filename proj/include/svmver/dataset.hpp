#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace svmver {

// Raw dataset label -> {+1, -1}.
struct ClassMap {
  int positive = 0;
  int negative = 1;
  // Drop samples whose label is neither class instead of failing.
  bool skip_unmapped = false;

  int Map(int raw) const;
};

struct Sample {
  std::size_t index;  // record position in the source file
  std::vector<double> features;
  int raw_label;
  int label;  // +1 / -1
};

inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

// IDX images (magic 0x00000803) + labels (0x00000801), big-endian dims.
// Pixel bytes are multiplied by `scale`.
std::vector<Sample> ParseIdx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                             double scale, const ClassMap& classes, std::size_t limit = kNoLimit);
std::vector<Sample> LoadIdx(const std::string& images_path, const std::string& labels_path,
                            double scale, const ClassMap& classes, std::size_t limit = kNoLimit);

// One sample per line: label,f1,...,fn (comma, semicolon, tab or space
// separated). Lines starting with '#' are skipped. Features are not scaled.
std::vector<Sample> ParseSamplesCsv(const std::string& text, const ClassMap& classes,
                                    std::size_t limit = kNoLimit);
std::vector<Sample> LoadSamplesCsv(const std::string& path, const ClassMap& classes,
                                   std::size_t limit = kNoLimit);

std::vector<std::uint8_t> ReadBinaryFile(const std::string& path);

}  // namespace svmver
