#pragma once

#include <filesystem>
#include <iosfwd>

#include "undither/image.hpp"

namespace undither {

// Decodes a P2 (ASCII) or P5 (binary) graymap with maxval 255.
// Header whitespace is arbitrary and '#' comments are skipped; anything
// else raises a CodecError with the matching Kind.
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm_file(const std::filesystem::path& path);

// Canonical form: "P5\n<w> <h>\n255\n" + raw payload, or P2 with one
// image row per text line. read_pgm(write_pgm(x)) == x pixel-for-pixel.
void write_pgm(std::ostream& out, const GrayImage& img, bool binary = true);
void write_pgm_file(const std::filesystem::path& path, const GrayImage& img,
                    bool binary = true);

}  // namespace undither
