#include "gripkit/cloud_io.hpp"

#include <optional>
#include <vector>

#include "gripkit/format.hpp"

namespace gripkit {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool is_pcd_keyword(std::string_view word) {
  for (std::string_view k : {"VERSION", "FIELDS", "SIZE", "TYPE", "COUNT", "WIDTH", "HEIGHT", "VIEWPOINT",
                             "POINTS", "DATA"}) {
    if (word == k) return true;
  }
  return false;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const std::size_t end = text_.find('\n', pos_);
    const std::size_t stop = end == std::string_view::npos ? text_.size() : end;
    line = text_.substr(pos_, stop - pos_);
    pos_ = stop + 1;
    ++number_;
    return true;
  }

  std::size_t line_number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

void append_point(std::vector<double>& coords, const std::vector<Token>& tokens, std::size_t line_no,
                  std::size_t line_length) {
  if (tokens.size() != 3) {
    const std::size_t column = tokens.size() > 3 ? tokens[3].column : line_length + 1;
    throw ParseError("expected 3 coordinates, found " + std::to_string(tokens.size()), line_no, column);
  }
  for (const auto& t : tokens) {
    double v = 0.0;
    if (!parse_number(t.text, v)) {
      throw ParseError("malformed number '" + std::string(t.text) + "'", line_no, t.column);
    }
    coords.push_back(v);
  }
}

Cloud to_cloud(const std::vector<double>& coords, std::string frame_id) {
  Cloud cloud;
  cloud.frame_id = std::move(frame_id);
  cloud.points = Eigen::Map<const Eigen::Matrix3Xd>(coords.data(), 3, static_cast<Eigen::Index>(coords.size() / 3));
  return cloud;
}

std::size_t header_count(const std::vector<Token>& tokens, std::size_t line_no) {
  if (tokens.size() != 2) throw ParseError("expected a single count after " + std::string(tokens[0].text), line_no, 1);
  double v = 0.0;
  if (!parse_number(tokens[1].text, v) || v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ParseError("malformed count '" + std::string(tokens[1].text) + "'", line_no, tokens[1].column);
  }
  return static_cast<std::size_t>(v);
}

Cloud parse_pcd(LineReader& reader, std::string_view first_line, std::string frame_id) {
  std::optional<std::size_t> points, width, height;
  bool fields_seen = false;
  bool data_seen = false;
  std::string_view line = first_line;
  do {
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::size_t no = reader.line_number();
    const std::string_view key = tokens[0].text;
    if (!is_pcd_keyword(key)) throw ParseError("unexpected PCD header entry '" + std::string(key) + "'", no, 1);

    auto expect_triplet = [&](std::string_view what, auto&& ok) {
      if (tokens.size() != 4) throw ParseError("unsupported PCD " + std::string(what) + ": need exactly x y z", no, 1);
      for (std::size_t i = 1; i < 4; ++i) {
        if (!ok(tokens[i].text)) {
          throw ParseError("unsupported PCD " + std::string(what) + " '" + std::string(tokens[i].text) + "'", no,
                           tokens[i].column);
        }
      }
    };

    if (key == "VERSION") {
      if (tokens.size() != 2 || (tokens[1].text != "0.7" && tokens[1].text != ".7")) {
        throw ParseError("unsupported PCD version", no, tokens.size() > 1 ? tokens[1].column : 1);
      }
    } else if (key == "FIELDS") {
      if (tokens.size() != 4 || tokens[1].text != "x" || tokens[2].text != "y" || tokens[3].text != "z") {
        throw ParseError("unsupported PCD fields: only 'x y z' is accepted", no, tokens.size() > 1 ? tokens[1].column : 1);
      }
      fields_seen = true;
    } else if (key == "SIZE") {
      expect_triplet("size", [](std::string_view t) { return t == "4" || t == "8"; });
    } else if (key == "TYPE") {
      expect_triplet("type", [](std::string_view t) { return t == "F"; });
    } else if (key == "COUNT") {
      expect_triplet("count", [](std::string_view t) { return t == "1"; });
    } else if (key == "WIDTH") {
      width = header_count(tokens, no);
    } else if (key == "HEIGHT") {
      height = header_count(tokens, no);
    } else if (key == "POINTS") {
      points = header_count(tokens, no);
    } else if (key == "DATA") {
      if (tokens.size() != 2 || tokens[1].text != "ascii") {
        throw ParseError("unsupported PCD data mode", no, tokens.size() > 1 ? tokens[1].column : 1);
      }
      data_seen = true;
    }
  } while (!data_seen && reader.next(line));

  if (!data_seen) throw ParseError("PCD header has no DATA line", reader.line_number(), 1);
  if (!fields_seen) throw ParseError("PCD header has no FIELDS line", reader.line_number(), 1);

  std::optional<std::size_t> expected = points;
  if (!expected && width && height) expected = *width * *height;

  std::vector<double> coords;
  if (expected) coords.reserve(*expected * 3);
  while (reader.next(line)) {
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    append_point(coords, tokens, reader.line_number(), line.size());
  }
  if (expected && coords.size() / 3 != *expected) {
    throw ParseError("PCD declares " + std::to_string(*expected) + " points but contains " +
                         std::to_string(coords.size() / 3),
                     reader.line_number(), 1);
  }
  return to_cloud(coords, std::move(frame_id));
}

}  // namespace

Cloud parse_cloud(std::string_view text, std::string frame_id) {
  LineReader reader(text);
  std::string_view line;
  std::vector<double> coords;
  while (reader.next(line)) {
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (coords.empty() && is_pcd_keyword(tokens[0].text)) return parse_pcd(reader, line, std::move(frame_id));
    append_point(coords, tokens, reader.line_number(), line.size());
  }
  return to_cloud(coords, std::move(frame_id));
}

Cloud load_cloud(const std::filesystem::path& path, std::string frame_id) {
  return parse_cloud(read_file(path), std::move(frame_id));
}

std::string write_xyz(const Cloud& cloud) {
  std::string out;
  out.reserve(static_cast<std::size_t>(cloud.size()) * 48);
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    out += format_number(cloud.points(0, i));
    out += ' ';
    out += format_number(cloud.points(1, i));
    out += ' ';
    out += format_number(cloud.points(2, i));
    out += '\n';
  }
  return out;
}

std::string write_pcd(const Cloud& cloud) {
  const std::string n = std::to_string(cloud.size());
  std::string out =
      "# .PCD v0.7 - Point Cloud Data file format\n"
      "VERSION 0.7\n"
      "FIELDS x y z\n"
      "SIZE 8 8 8\n"
      "TYPE F F F\n"
      "COUNT 1 1 1\n"
      "WIDTH " + n + "\n"
      "HEIGHT 1\n"
      "VIEWPOINT 0 0 0 1 0 0 0\n"
      "POINTS " + n + "\n"
      "DATA ascii\n";
  return out + write_xyz(cloud);
}

}  // namespace gripkit
