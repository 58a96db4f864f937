// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/face_corpus.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "facegen/error.hpp"
#include "facegen/hashing.hpp"

namespace facegen {
namespace {

constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "anger", "disgust", "fear", "happiness", "sadness", "surprise", "neutral"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

}  // namespace

std::string_view to_string(Emotion emotion) { return kEmotionNames.at(static_cast<std::size_t>(emotion)); }

std::optional<Emotion> parse_emotion(std::string_view text) {
  text = trim(text);
  for (std::size_t i = 0; i < kEmotionNames.size(); ++i)
    if (kEmotionNames[i] == text) return static_cast<Emotion>(i);
  return std::nullopt;
}

ExpressionLabel ExpressionLabel::make(Emotion emotion, std::optional<int> level) {
  if (emotion == Emotion::neutral) {
    if (level) throw std::invalid_argument("neutral expression cannot carry a level");
  } else if (!level || *level < 1 || *level > 4) {
    throw std::invalid_argument("expression '" + std::string(to_string(emotion)) +
                                "' needs a level in 1..4");
  }
  return ExpressionLabel(emotion, level);
}

ExpressionLabel ExpressionLabel::parse(std::string_view name) {
  name = trim(name);
  const auto underscore = name.rfind('_');
  if (underscore == std::string_view::npos) {
    const auto emotion = parse_emotion(name);
    if (!emotion) throw std::invalid_argument("unknown expression '" + std::string(name) + "'");
    return make(*emotion, std::nullopt);
  }
  const auto emotion = parse_emotion(name.substr(0, underscore));
  const auto level = parse_number<int>(name.substr(underscore + 1));
  if (!emotion || !level) throw std::invalid_argument("unknown expression '" + std::string(name) + "'");
  return make(*emotion, level);
}

std::string ExpressionLabel::name() const {
  std::string out(to_string(emotion_));
  if (level_) out += "_" + std::to_string(*level_);
  return out;
}

std::vector<ExpressionLabel> standard_categories() {
  std::vector<ExpressionLabel> out;
  for (int e = 0; e < kEmotionCount; ++e) {
    const auto emotion = static_cast<Emotion>(e);
    if (emotion == Emotion::neutral) {
      out.push_back(ExpressionLabel::neutral());
    } else {
      out.push_back(ExpressionLabel::make(emotion, 2));
      out.push_back(ExpressionLabel::make(emotion, 3));
    }
  }
  return out;
}

void validate_face(const Face& face) {
  const auto where = [&] {
    return "face (identity " + std::to_string(face.identity) + ", " + face.expression.name() + ")";
  };
  if (face.vertices.size() < kMinVertexCount)
    throw CorpusError(where() + " has " + std::to_string(face.vertices.size()) +
                      " vertices; at least 8 are required");
  for (std::size_t p = 0; p < face.vertices.size(); ++p)
    if (!face.vertices[p].allFinite())
      throw CorpusError(where() + ": vertex " + std::to_string(p) + " has a non-finite coordinate");

  std::vector<std::size_t> order(face.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto key = [&](std::size_t i) {
    const auto& v = face.vertices[i];
    return std::array{v.x(), v.y(), v.z()};
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (key(order[i]) == key(order[i - 1]))
      throw CorpusError(where() + ": vertices " + std::to_string(std::min(order[i], order[i - 1])) +
                        " and " + std::to_string(std::max(order[i], order[i - 1])) + " coincide");
}

Corpus::Corpus(std::vector<Face> faces) : faces_(std::move(faces)) {
  if (!faces_.empty()) vertex_count_ = faces_.front().vertex_count();
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    const Face& face = faces_[i];
    validate_face(face);
    if (face.vertex_count() != vertex_count_)
      throw CorpusError("correspondence mismatch: face (identity " + std::to_string(face.identity) +
                        ", " + face.expression.name() + ") has " +
                        std::to_string(face.vertex_count()) + " vertices, expected " +
                        std::to_string(vertex_count_));
    auto [it, inserted] = index_[face.expression].emplace(face.identity, i);
    if (!inserted)
      throw CorpusError("duplicate entry for identity " + std::to_string(face.identity) + " in " +
                        face.expression.name());
  }
}

std::vector<ExpressionLabel> Corpus::categories() const {
  std::vector<ExpressionLabel> out;
  for (const auto& [label, members] : index_) out.push_back(label);
  return out;
}

std::vector<const Face*> Corpus::category(const ExpressionLabel& label) const {
  std::vector<const Face*> out;
  if (const auto it = index_.find(label); it != index_.end())
    for (const auto& [identity, i] : it->second) out.push_back(&faces_[i]);
  return out;
}

const Face* Corpus::find(const ExpressionLabel& label, std::int64_t identity) const {
  const auto it = index_.find(label);
  if (it == index_.end()) return nullptr;
  const auto member = it->second.find(identity);
  return member == it->second.end() ? nullptr : &faces_[member->second];
}

Vertices read_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open point cloud " + path.string());
  const auto fail = [&](const std::string& what) {
    return CorpusError(path.string() + ": " + what);
  };

  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> properties;
  };
  std::vector<Element> elements;
  std::string line;
  if (!std::getline(in, line) || trim(line) != "ply") throw fail("missing 'ply' magic");
  bool ascii = false;
  bool header_done = false;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.starts_with("comment") || t.starts_with("obj_info")) continue;
    if (t == "end_header") {
      header_done = true;
      break;
    }
    std::istringstream words{std::string(t)};
    std::string keyword;
    words >> keyword;
    if (keyword == "format") {
      std::string kind, version;
      words >> kind >> version;
      ascii = kind == "ascii";
    } else if (keyword == "element") {
      Element element;
      words >> element.name >> element.count;
      if (!words) throw fail("bad element line '" + std::string(t) + "'");
      elements.push_back(std::move(element));
    } else if (keyword == "property") {
      if (elements.empty()) throw fail("property before any element");
      std::string type, name;
      words >> type;
      if (type == "list") {
        std::string count_type, item_type;
        words >> count_type >> item_type;
      }
      words >> name;
      elements.back().properties.push_back(name);
    } else {
      throw fail("unexpected header line '" + std::string(t) + "'");
    }
  }
  if (!header_done) throw fail("missing end_header");
  if (!ascii) throw fail("only 'format ascii 1.0' is supported");

  Vertices vertices;
  bool found = false;
  for (const Element& element : elements) {
    if (element.name != "vertex") {
      for (std::size_t i = 0; i < element.count; ++i)
        if (!std::getline(in, line)) throw fail("truncated element '" + element.name + "'");
      continue;
    }
    found = true;
    std::array<std::ptrdiff_t, 3> column{-1, -1, -1};
    for (std::size_t i = 0; i < element.properties.size(); ++i) {
      const auto& p = element.properties[i];
      if (p == "x") column[0] = static_cast<std::ptrdiff_t>(i);
      if (p == "y") column[1] = static_cast<std::ptrdiff_t>(i);
      if (p == "z") column[2] = static_cast<std::ptrdiff_t>(i);
    }
    if (std::any_of(column.begin(), column.end(), [](auto c) { return c < 0; }))
      throw fail("vertex element lacks x/y/z properties");
    vertices.reserve(element.count);
    for (std::size_t i = 0; i < element.count; ++i) {
      if (!std::getline(in, line)) throw fail("expected " + std::to_string(element.count) +
                                              " vertices, got " + std::to_string(i));
      std::vector<std::string_view> fields;
      std::string_view rest = trim(line);
      while (!rest.empty()) {
        const auto gap = rest.find_first_of(" \t");
        fields.push_back(rest.substr(0, gap));
        if (gap == std::string_view::npos) break;
        rest = trim(rest.substr(gap));
      }
      if (fields.size() < element.properties.size())
        throw fail("vertex " + std::to_string(i) + " has too few fields");
      Eigen::Vector3d v;
      for (int d = 0; d < 3; ++d) {
        const auto value = parse_number<double>(fields[static_cast<std::size_t>(column[d])]);
        if (!value) throw fail("vertex " + std::to_string(i) + " has an unparsable coordinate");
        v[d] = *value;
      }
      vertices.push_back(v);
    }
  }
  if (!found) throw fail("no vertex element");
  return vertices;
}

void write_ply(const std::filesystem::path& path, std::span<const Eigen::Vector3d> vertices) {
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot write " + path.string());
  out << "ply\nformat ascii 1.0\nelement vertex " << vertices.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  for (const auto& v : vertices)
    out << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << '\n';
  if (!out) throw CorpusError("failed writing " + path.string());
}

Corpus load_corpus(const std::filesystem::path& index_path) {
  std::ifstream in(index_path);
  if (!in) throw CorpusError("cannot open corpus index " + index_path.string());
  const auto base = index_path.parent_path();
  std::string line;
  if (!std::getline(in, line)) throw CorpusError(index_path.string() + ": empty index");
  const auto header = split(line, ',');
  if (header != std::vector<std::string_view>{"path", "identity", "emotion", "level"})
    throw CorpusError(index_path.string() + ": header must be 'path,identity,emotion,level'");

  std::vector<Face> faces;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto where = index_path.string() + ":" + std::to_string(line_no);
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw CorpusError(where + ": expected 4 fields");
    const auto identity = parse_number<std::int64_t>(fields[1]);
    const auto emotion = parse_emotion(fields[2]);
    if (!identity) throw CorpusError(where + ": bad identity '" + std::string(fields[1]) + "'");
    if (!emotion) throw CorpusError(where + ": bad emotion '" + std::string(fields[2]) + "'");
    std::optional<int> level;
    if (!fields[3].empty()) {
      level = parse_number<int>(fields[3]);
      if (!level) throw CorpusError(where + ": bad level '" + std::string(fields[3]) + "'");
    }
    Face face;
    try {
      face.expression = ExpressionLabel::make(*emotion, level);
    } catch (const std::invalid_argument& e) {
      throw CorpusError(where + ": " + e.what());
    }
    face.identity = *identity;
    std::filesystem::path file{std::string(fields[0])};
    if (file.is_relative()) file = base / file;
    face.vertices = read_ply(file);
    faces.push_back(std::move(face));
  }
  return Corpus(std::move(faces));
}

std::filesystem::path write_corpus(const Corpus& corpus, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  const auto index_path = directory / "index.csv";
  std::ofstream index(index_path);
  if (!index) throw CorpusError("cannot write " + index_path.string());
  index << "path,identity,emotion,level\n";
  for (const auto& label : corpus.categories()) {
    std::filesystem::create_directories(directory / label.name());
    for (const Face* face : corpus.category(label)) {
      const auto relative = std::filesystem::path(label.name()) / (std::to_string(face->identity) + ".ply");
      write_ply(directory / relative, face->vertices);
      index << relative.generic_string() << ',' << face->identity << ',' << to_string(label.emotion())
            << ',' << (label.level() ? std::to_string(*label.level()) : std::string()) << '\n';
    }
  }
  return index_path;
}

std::string corpus_checksum(const Corpus& corpus) {
  Sha256 sha;
  const auto put_u64 = [&](std::uint64_t v) {
    std::array<std::uint8_t, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v >> (8 * i));
    sha.update(bytes);
  };
  put_u64(corpus.vertex_count());
  for (const auto& label : corpus.categories()) {
    sha.update(label.name());
    for (const Face* face : corpus.category(label)) {
      put_u64(static_cast<std::uint64_t>(face->identity));
      for (const auto& v : face->vertices)
        for (int d = 0; d < 3; ++d) put_u64(std::bit_cast<std::uint64_t>(v[d]));
    }
  }
  return sha.hex_digest();
}

}  // namespace facegen
