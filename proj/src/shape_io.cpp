#include "sirl/shape_io.hpp"

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sirl {
namespace {

uint32_t read_be32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("truncated IDX header");
  return (static_cast<uint32_t>(b[0]) << 24) |
         (static_cast<uint32_t>(b[1]) << 16) |
         (static_cast<uint32_t>(b[2]) << 8) | static_cast<uint32_t>(b[3]);
}

}  // namespace

TargetShape load_text_bitmap(std::istream& is) {
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw std::runtime_error("bitmap has no rows");
  const size_t width = rows[0].size();
  std::vector<uint8_t> labeled;
  labeled.reserve(rows.size() * width);
  for (const std::string& row : rows) {
    if (row.size() != width) {
      throw std::runtime_error("bitmap rows have unequal lengths");
    }
    for (char c : row) {
      if (c != '0' && c != '1') {
        throw std::runtime_error("bitmap may only contain 0 and 1");
      }
      labeled.push_back(c == '1' ? 1 : 0);
    }
  }
  return TargetShape(static_cast<int>(width), static_cast<int>(rows.size()),
                     std::move(labeled));
}

void save_text_bitmap(const TargetShape& shape, std::ostream& os) {
  for (int y = 0; y < shape.height(); ++y) {
    for (int x = 0; x < shape.width(); ++x) {
      os << (shape.labeled({x, y}) ? '1' : '0');
    }
    os << '\n';
  }
}

TargetShape load_idx_image(std::istream& is, int threshold, int index) {
  const uint32_t magic = read_be32(is);
  if (magic != 0x00000803u) {
    std::ostringstream msg;
    msg << "bad IDX magic 0x" << std::hex << magic
        << " (expected 0x00000803 unsigned-byte images)";
    throw std::runtime_error(msg.str());
  }
  const uint32_t count = read_be32(is);
  const uint32_t rows = read_be32(is);
  const uint32_t cols = read_be32(is);
  if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096) {
    throw std::runtime_error("IDX image dimensions out of range");
  }
  if (index < 0 || static_cast<uint32_t>(index) >= count) {
    throw std::runtime_error("IDX image index out of range");
  }
  const std::streamoff image_size =
      static_cast<std::streamoff>(rows) * cols;
  is.seekg(image_size * index, std::ios::cur);
  std::vector<unsigned char> pixels(static_cast<size_t>(image_size));
  is.read(reinterpret_cast<char*>(pixels.data()), image_size);
  if (!is) throw std::runtime_error("truncated IDX image data");
  std::vector<uint8_t> labeled(pixels.size());
  for (size_t i = 0; i < pixels.size(); ++i) {
    labeled[i] = pixels[i] >= threshold ? 1 : 0;
  }
  return TargetShape(static_cast<int>(cols), static_cast<int>(rows),
                     std::move(labeled));
}

TargetShape load_shape(const std::string& path, int threshold, int index) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open shape file: " + path);
  try {
    const int first = is.peek();
    if (first == 0x00) return load_idx_image(is, threshold, index);
    return load_text_bitmap(is);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace sirl
