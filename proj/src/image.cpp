#include "manip/image.hpp"

#include <cctype>
#include <fstream>

namespace manip {

namespace {

// Reads one PGM header token, skipping whitespace and # comments.
bool next_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
    } else if (!std::isspace(c)) {
      break;
    }
  }
  if (c == EOF) return false;
  do {
    tok.push_back(static_cast<char>(c));
  } while ((c = in.get()) != EOF && !std::isspace(c));
  return true;
}

struct PgmHeader {
  int width = 0;
  int height = 0;
  long maxval = 0;
};

Result<PgmHeader> read_header(std::istream& in, const std::string& path) {
  std::string tok;
  if (!next_token(in, tok) || tok != "P5") {
    return Result<PgmHeader>::failure(Status::Parse, path + ": not a binary PGM (P5)");
  }
  PgmHeader h;
  try {
    if (!next_token(in, tok)) throw std::invalid_argument("eof");
    h.width = std::stoi(tok);
    if (!next_token(in, tok)) throw std::invalid_argument("eof");
    h.height = std::stoi(tok);
    if (!next_token(in, tok)) throw std::invalid_argument("eof");
    h.maxval = std::stol(tok);
  } catch (const std::exception&) {
    return Result<PgmHeader>::failure(Status::Parse, path + ": malformed PGM header");
  }
  if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535) {
    return Result<PgmHeader>::failure(Status::Parse, path + ": bad PGM dimensions or maxval");
  }
  return Result<PgmHeader>::success(h);
}

}  // namespace

Result<GrayImage> load_pgm8(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Result<GrayImage>::failure(Status::Io, "cannot open " + path);
  auto header = read_header(in, path);
  if (!header) return Result<GrayImage>::failure(header.status, header.message);
  if (header->maxval > 255) {
    return Result<GrayImage>::failure(Status::Parse, path + ": expected 8-bit PGM");
  }
  GrayImage img;
  img.width = header->width;
  img.height = header->height;
  img.data.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size())) {
    return Result<GrayImage>::failure(Status::Parse, path + ": truncated PGM data");
  }
  return Result<GrayImage>::success(std::move(img));
}

Result<bool> write_pgm8(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return Result<bool>::failure(Status::Io, "cannot open " + path + " for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  out.flush();
  if (!out) return Result<bool>::failure(Status::Io, "write failed for " + path);
  return Result<bool>::success(true);
}

Result<DepthMap> load_pgm16(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Result<DepthMap>::failure(Status::Io, "cannot open " + path);
  auto header = read_header(in, path);
  if (!header) return Result<DepthMap>::failure(header.status, header.message);
  if (header->maxval <= 255) {
    return Result<DepthMap>::failure(Status::Parse, path + ": expected 16-bit PGM");
  }
  DepthMap depth;
  depth.width = header->width;
  depth.height = header->height;
  const std::size_t count = static_cast<std::size_t>(depth.width) * depth.height;
  std::vector<std::uint8_t> raw(count * 2);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    return Result<DepthMap>::failure(Status::Parse, path + ": truncated PGM data");
  }
  depth.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    depth.data[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
  }
  return Result<DepthMap>::success(std::move(depth));
}

Result<bool> write_pgm16(const DepthMap& depth, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return Result<bool>::failure(Status::Io, "cannot open " + path + " for writing");
  out << "P5\n" << depth.width << " " << depth.height << "\n65535\n";
  std::vector<std::uint8_t> raw(depth.data.size() * 2);
  for (std::size_t i = 0; i < depth.data.size(); ++i) {
    raw[2 * i] = static_cast<std::uint8_t>(depth.data[i] >> 8);
    raw[2 * i + 1] = static_cast<std::uint8_t>(depth.data[i] & 0xff);
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  out.flush();
  if (!out) return Result<bool>::failure(Status::Io, "write failed for " + path);
  return Result<bool>::success(true);
}

}  // namespace manip
