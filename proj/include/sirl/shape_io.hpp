#pragma once

#include <iosfwd>
#include <string>

#include "sirl/world.hpp"

namespace sirl {

// Rows of 0/1 characters, equal length; blank lines and '#' comments
// skipped.
TargetShape load_text_bitmap(std::istream& is);
void save_text_bitmap(const TargetShape& shape, std::ostream& os);

// One image from an IDX unsigned-byte image file (big-endian magic
// 0x00000803); pixels >= threshold become labeled cells.
TargetShape load_idx_image(std::istream& is, int threshold, int index);

// Sniffs the format (IDX magic vs text) and loads; index selects the image
// within an IDX file. Errors carry the path.
TargetShape load_shape(const std::string& path, int threshold = 128,
                       int index = 0);

}  // namespace sirl
