#include "svmver/dataset.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "svmver/error.hpp"

namespace svmver {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t ReadBe32(std::span<const std::uint8_t> bytes, std::size_t offset, const char* what) {
  if (bytes.size() < offset + 4) Fail(ErrorCode::kParse, std::string(what) + ": truncated header");
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

}  // namespace

int ClassMap::Map(int raw) const {
  if (raw == positive) return 1;
  if (raw == negative) return -1;
  return 0;
}

std::vector<Sample> ParseIdx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                             double scale, const ClassMap& classes, std::size_t limit) {
  if (ReadBe32(images, 0, "images") != kImageMagic) Fail(ErrorCode::kParse, "images: bad IDX magic");
  if (ReadBe32(labels, 0, "labels") != kLabelMagic) Fail(ErrorCode::kParse, "labels: bad IDX magic");
  const std::size_t count = ReadBe32(images, 4, "images");
  const std::size_t rows = ReadBe32(images, 8, "images");
  const std::size_t cols = ReadBe32(images, 12, "images");
  const std::size_t label_count = ReadBe32(labels, 4, "labels");
  if (label_count != count) {
    Fail(ErrorCode::kParse, "labels file holds " + std::to_string(label_count) + " labels for " +
                                std::to_string(count) + " images");
  }
  const std::size_t width = rows * cols;
  if (width == 0) Fail(ErrorCode::kParse, "images: zero-sized images");
  if (images.size() < 16 + count * width) Fail(ErrorCode::kParse, "images: truncated pixel data");
  if (labels.size() < 8 + count) Fail(ErrorCode::kParse, "labels: truncated label data");

  std::vector<Sample> out;
  for (std::size_t i = 0; i < count && out.size() < limit; ++i) {
    const int raw = labels[8 + i];
    const int mapped = classes.Map(raw);
    if (mapped == 0) {
      if (classes.skip_unmapped) continue;
      Fail(ErrorCode::kInvalidArgument, "label " + std::to_string(raw) + " of sample " +
                                            std::to_string(i) + " is not covered by the class mapping");
    }
    Sample s{i, std::vector<double>(width), raw, mapped};
    const std::uint8_t* px = images.data() + 16 + i * width;
    for (std::size_t k = 0; k < width; ++k) s.features[k] = px[k] * scale;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::uint8_t> ReadBinaryFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<Sample> LoadIdx(const std::string& images_path, const std::string& labels_path,
                            double scale, const ClassMap& classes, std::size_t limit) {
  const auto images = ReadBinaryFile(images_path);
  const auto labels = ReadBinaryFile(labels_path);
  return ParseIdx(images, labels, scale, classes, limit);
}

std::vector<Sample> ParseSamplesCsv(const std::string& text, const ClassMap& classes, std::size_t limit) {
  std::vector<Sample> out;
  std::istringstream in(text);
  std::string line;
  std::size_t record = 0;
  std::size_t width = 0;
  while (out.size() < limit && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> values;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ',' || *p == ';' || *p == '\t' || *p == ' ')) ++p;
      if (p == end) break;
      double v;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) Fail(ErrorCode::kParse, "samples line " + std::to_string(record + 1) + ": not a number");
      values.push_back(v);
      p = next;
    }
    if (values.size() < 2) Fail(ErrorCode::kParse, "samples line needs a label and at least one feature");
    if (width == 0) width = values.size() - 1;
    if (values.size() - 1 != width) Fail(ErrorCode::kDimension, "samples rows have inconsistent widths");
    const int raw = static_cast<int>(values[0]);
    const int mapped = classes.Map(raw);
    const std::size_t index = record++;
    if (mapped == 0) {
      if (classes.skip_unmapped) continue;
      Fail(ErrorCode::kInvalidArgument, "label " + std::to_string(raw) + " is not covered by the class mapping");
    }
    out.push_back({index, std::vector<double>(values.begin() + 1, values.end()), raw, mapped});
  }
  return out;
}

std::vector<Sample> LoadSamplesCsv(const std::string& path, const ClassMap& classes, std::size_t limit) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseSamplesCsv(buf.str(), classes, limit);
}

}  // namespace svmver
