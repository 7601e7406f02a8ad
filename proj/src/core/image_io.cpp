#include "image_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "errors.hpp"

namespace natle {
namespace {

enum class Container { png, jpeg };

struct HeaderInfo {
  Container container;
  std::uint64_t width = 0;
  std::uint64_t height = 0;
};

std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

std::uint16_t be16(const unsigned char* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

std::optional<HeaderInfo> sniff_png(const std::vector<unsigned char>& buf) {
  static constexpr std::array<unsigned char, 8> sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (buf.size() < 8 || !std::equal(sig.begin(), sig.end(), buf.begin())) return std::nullopt;
  if (buf.size() < 24 || std::string(buf.begin() + 12, buf.begin() + 16) != "IHDR")
    throw Error(ErrorCode::io_format, "truncated PNG header");
  return HeaderInfo{Container::png, be32(&buf[16]), be32(&buf[20])};
}

std::optional<HeaderInfo> sniff_jpeg(const std::vector<unsigned char>& buf) {
  if (buf.size() < 3 || buf[0] != 0xFF || buf[1] != 0xD8 || buf[2] != 0xFF) return std::nullopt;
  std::size_t pos = 2;
  while (pos + 4 <= buf.size()) {
    if (buf[pos] != 0xFF) break;
    const unsigned char marker = buf[pos + 1];
    if (marker == 0xFF) {
      ++pos;
      continue;
    }
    if (marker == 0xD8 || marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) {
      pos += 2;
      continue;
    }
    const std::size_t len = be16(&buf[pos + 2]);
    const bool is_sof = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 &&
                        marker != 0xC8 && marker != 0xCC;
    if (is_sof) {
      if (pos + 9 > buf.size()) break;
      return HeaderInfo{Container::jpeg, be16(&buf[pos + 7]), be16(&buf[pos + 5])};
    }
    pos += 2 + len;
  }
  throw Error(ErrorCode::io_format, "JPEG stream has no frame header");
}

double channel_max(int depth) {
  switch (depth) {
    case CV_8U: return 255.0;
    case CV_16U: return 65535.0;
    default: throw Error(ErrorCode::io_format, "unsupported sample depth");
  }
}

}  // namespace

LoadedImage load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_unreadable, "cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::io_unreadable, "read failed for " + path);

  std::optional<HeaderInfo> header = sniff_png(buf);
  if (!header) header = sniff_jpeg(buf);
  if (!header) throw Error(ErrorCode::io_format, path + " is neither PNG nor JPEG");

  const std::uint64_t pixels = header->width * header->height;
  if (header->width == 0 || header->height == 0 || pixels > kMaxImagePixels)
    throw Error(ErrorCode::io_dimensions, path + ": unsupported dimensions " +
                                              std::to_string(header->width) + "x" +
                                              std::to_string(header->height));

  cv::Mat decoded;
  try {
    decoded = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::io_format, path + ": " + e.what());
  }
  if (decoded.empty()) throw Error(ErrorCode::io_format, path + ": corrupt image data");

  LoadedImage out;
  out.bit_depth = decoded.depth() == CV_16U ? 16 : 8;
  const double full_scale = channel_max(decoded.depth());
  const int channels = decoded.channels();
  if (channels != 1 && channels != 2 && channels != 3 && channels != 4)
    throw Error(ErrorCode::io_format, path + ": unsupported channel count");
  out.alpha_dropped = channels == 2 || channels == 4;

  const int w = decoded.cols, h = decoded.rows;
  out.image = RgbImage(w, h);
  std::vector<cv::Mat> planes;
  cv::split(decoded, planes);
  cv::Mat r, g, b;
  if (channels <= 2) {
    r = g = b = planes[0];
  } else {
    // OpenCV decodes to BGR order.
    b = planes[0];
    g = planes[1];
    r = planes[2];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto sample = [&](const cv::Mat& m) {
        return m.depth() == CV_16U ? m.at<std::uint16_t>(y, x) / full_scale
                                   : m.at<std::uint8_t>(y, x) / full_scale;
      };
      out.image.r.at(x, y) = sample(r);
      out.image.g.at(x, y) = sample(g);
      out.image.b.at(x, y) = sample(b);
    }
  }
  return out;
}

void save_image(const std::string& path, const RgbImage& img) {
  const int w = img.width(), h = img.height();
  if (w == 0 || h == 0) throw Error(ErrorCode::invalid_argument, "cannot save an empty image");
  cv::Mat bgr(h, w, CV_8UC3);
  auto quantize = [](double v) {
    if (std::isnan(v)) v = 0.0;
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  for (int y = 0; y < h; ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < w; ++x)
      row[x] = cv::Vec3b(quantize(img.b.at(x, y)), quantize(img.g.at(x, y)), quantize(img.r.at(x, y)));
  }
  std::vector<unsigned char> encoded;
  if (!cv::imencode(".png", bgr, encoded))
    throw Error(ErrorCode::io_write, "PNG encoding failed for " + path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_write, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(encoded.data()), static_cast<std::streamsize>(encoded.size()));
  if (!out) throw Error(ErrorCode::io_write, "write failed for " + path);
}

}  // namespace natle
