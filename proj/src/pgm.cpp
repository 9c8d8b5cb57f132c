#include "undither/pgm.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace undither {

namespace {

constexpr std::int64_t kMaxPixels = std::numeric_limits<std::int32_t>::max();

// Skips whitespace and '#' comments (which run to end of line).
void skip_separators(std::istream& in) {
  int c = in.peek();
  while (c != EOF) {
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else {
      break;
    }
    c = in.peek();
  }
}

std::string next_token(std::istream& in) {
  skip_separators(in);
  std::string token;
  int c = in.peek();
  while (c != EOF && !std::isspace(c) && c != '#') {
    token.push_back(static_cast<char>(in.get()));
    c = in.peek();
  }
  return token;
}

std::int64_t parse_header_int(std::istream& in, const char* what,
                              CodecError::Kind kind) {
  const std::string token = next_token(in);
  if (token.empty())
    throw CodecError(CodecError::Kind::truncated,
                     std::string("pgm: unexpected end of header reading ") +
                         what);
  std::int64_t value = 0;
  for (char ch : token) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw CodecError(kind, std::string("pgm: invalid ") + what + " '" +
                                 token + "'");
    value = value * 10 + (ch - '0');
    if (value > kMaxPixels)
      throw CodecError(kind, std::string("pgm: ") + what + " out of range");
  }
  return value;
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  const std::string magic = next_token(in);
  const bool binary = magic == "P5";
  if (!binary && magic != "P2")
    throw CodecError(CodecError::Kind::bad_magic,
                     "pgm: bad magic '" + magic + "' (want P2 or P5)");

  const std::int64_t width =
      parse_header_int(in, "width", CodecError::Kind::bad_dimensions);
  const std::int64_t height =
      parse_header_int(in, "height", CodecError::Kind::bad_dimensions);
  if (width < 1 || height < 1 || width * height > kMaxPixels)
    throw CodecError(CodecError::Kind::bad_dimensions,
                     "pgm: unsupported dimensions " + std::to_string(width) +
                         "x" + std::to_string(height));

  const std::int64_t maxval =
      parse_header_int(in, "maxval", CodecError::Kind::bad_maxval);
  if (maxval != 255)
    throw CodecError(CodecError::Kind::bad_maxval,
                     "pgm: maxval " + std::to_string(maxval) +
                         " unsupported (must be 255)");

  GrayImage img(height, width);
  const std::int64_t count = width * height;

  if (binary) {
    // exactly one separator byte between maxval and the payload
    const int sep = in.get();
    if (sep == EOF)
      throw CodecError(CodecError::Kind::truncated,
                       "pgm: missing payload after header");
    if (!std::isspace(sep))
      throw CodecError(CodecError::Kind::bad_sample,
                       "pgm: header not terminated by whitespace");
    in.read(reinterpret_cast<char*>(img.data()), count);
    if (in.gcount() != count)
      throw CodecError(CodecError::Kind::truncated,
                       "pgm: payload truncated (" +
                           std::to_string(in.gcount()) + " of " +
                           std::to_string(count) + " bytes)");
  } else {
    for (std::int64_t i = 0; i < count; ++i) {
      const std::int64_t v =
          parse_header_int(in, "sample", CodecError::Kind::bad_sample);
      if (v > 255)
        throw CodecError(CodecError::Kind::bad_sample,
                         "pgm: sample " + std::to_string(v) + " > maxval");
      img.data()[i] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::ios_base::failure("cannot open '" + path.string() +
                                 "' for reading");
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& img, bool binary) {
  out << (binary ? "P5" : "P2") << "\n"
      << img.cols() << " " << img.rows() << "\n255\n";
  if (binary) {
    out.write(reinterpret_cast<const char*>(img.data()), img.size());
  } else {
    for (Eigen::Index i = 0; i < img.rows(); ++i) {
      for (Eigen::Index j = 0; j < img.cols(); ++j) {
        if (j) out << ' ';
        out << static_cast<int>(img(i, j));
      }
      out << '\n';
    }
  }
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& img,
                    bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::ios_base::failure("cannot open '" + path.string() +
                                 "' for writing");
  write_pgm(out, img, binary);
  out.flush();
  if (!out)
    throw std::ios_base::failure("write failed for '" + path.string() + "'");
}

}  // namespace undither
