#include "beliefnet/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace beliefnet {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, end);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

namespace {

Frame frame_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("\"frame\" must be an array of labels");
  std::vector<std::string> labels;
  for (const auto& l : j) {
    if (!l.is_string()) throw FormatError("frame labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  try {
    return Frame(std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw FormatError(what + " must be a number");
  return j.get<double>();
}

std::string string_of(const json& j, const std::string& what) {
  if (!j.is_string()) throw FormatError(what + " must be a string");
  return j.get<std::string>();
}

}  // namespace

json masses_to_json(const MassFunction& m) {
  json masses = json::object();
  for (const auto& [set, value] : m.focal_elements()) masses[m.frame().format(set)] = value;
  return masses;
}

json mass_to_json(const MassFunction& m) {
  return json{{"frame", m.frame().labels()}, {"masses", masses_to_json(m)}};
}

MassFunction masses_from_json(const Frame& frame, const json& masses) {
  if (!masses.is_object()) throw FormatError("\"masses\" must be an object");
  std::vector<std::pair<FocalSet, double>> entries;
  for (const auto& [key, value] : masses.items()) {
    FocalSet set;
    try {
      set = frame.parse(key);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
    entries.emplace_back(set, number(value, "mass of '" + key + "'"));
  }
  return MassFunction(frame, entries);
}

MassFunction mass_from_json(const json& j) {
  return masses_from_json(frame_from_json(member(j, "frame")), member(j, "masses"));
}

AnnotationSet annotations_from_json(const json& j) {
  AnnotationSet set;
  set.frame = frame_from_json(member(j, "frame"));
  const json& tiles = member(j, "tiles");
  if (!tiles.is_array()) throw FormatError("\"tiles\" must be an array");
  for (const auto& t : tiles) {
    AnnotatedTile tile;
    tile.id = string_of(member(t, "id"), "tile id");
    const json& experts = member(t, "experts");
    if (!experts.is_array()) throw FormatError("\"experts\" of tile '" + tile.id + "' must be an array");
    for (const auto& e : experts) {
      TileAnnotation a;
      a.expert_id = string_of(member(e, "expert"), "expert id");
      for (const auto& entry : member(e, "entries")) {
        AnnotationEntry ae;
        ae.label = string_of(member(entry, "class"), "class");
        if (set.frame.find(ae.label) < 0) throw FormatError("tile '" + tile.id + "' uses unknown class '" + ae.label + "'");
        try {
          ae.certainty = parse_certainty(string_of(member(entry, "certainty"), "certainty"));
        } catch (const std::invalid_argument& ex) {
          throw FormatError(ex.what());
        }
        ae.proportion = number(member(entry, "p"), "proportion");
        a.entries.push_back(std::move(ae));
      }
      tile.experts.push_back(std::move(a));
    }
    set.tiles.push_back(std::move(tile));
  }
  return set;
}

json annotations_to_json(const AnnotationSet& set) {
  json tiles = json::array();
  for (const auto& tile : set.tiles) {
    json experts = json::array();
    for (const auto& a : tile.experts) {
      json entries = json::array();
      for (const auto& e : a.entries)
        entries.push_back(json{{"class", e.label}, {"certainty", std::string(to_string(e.certainty))}, {"p", e.proportion}});
      experts.push_back(json{{"expert", a.expert_id}, {"entries", std::move(entries)}});
    }
    tiles.push_back(json{{"id", tile.id}, {"experts", std::move(experts)}});
  }
  return json{{"frame", set.frame.labels()}, {"tiles", std::move(tiles)}};
}

std::string reference_csv(const ReferenceMap& map) {
  std::string out = "tile_id,decided_label,conflict\n";
  for (const auto& e : map.entries)
    out += e.tile_id + "," + map.frame.format(e.decision) + "," + format_double(e.conflict) + "\n";
  return out;
}

json reference_to_json(const ReferenceMap& map) {
  json tiles = json::array();
  for (const auto& e : map.entries) {
    json t{{"id", e.tile_id},
           {"decision", map.frame.format(e.decision)},
           {"conflict", e.conflict},
           {"masses", masses_to_json(e.fused)}};
    if (e.compared_decision) t["compared_decision"] = map.frame.format(*e.compared_decision);
    tiles.push_back(std::move(t));
  }
  json j{{"frame", map.frame.labels()},
         {"rule", std::string(to_string(map.rule))},
         {"criterion", std::string(to_string(map.criterion))},
         {"mean_conflict", map.mean_conflict},
         {"tiles", std::move(tiles)}};
  if (map.compared_rule) j["compared_rule"] = std::string(to_string(*map.compared_rule));
  if (map.disagreement_rate) j["disagreement_rate"] = *map.disagreement_rate;
  return j;
}

std::vector<FusedTile> fused_tiles_from_json(const json& j) {
  const Frame frame = frame_from_json(member(j, "frame"));
  std::vector<FusedTile> out;
  for (const auto& t : member(j, "tiles"))
    out.push_back({string_of(member(t, "id"), "tile id"), masses_from_json(frame, member(t, "masses"))});
  return out;
}

GrayImage parse_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  auto next_token = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  auto next_int = [&](const char* what) {
    const std::string tok = next_token();
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || v <= 0)
      throw FormatError(std::string("bad PGM ") + what + " '" + tok + "'");
    return v;
  };
  if (next_token() != "P5") throw FormatError("not a binary PGM (P5) file");
  const int width = next_int("width");
  const int height = next_int("height");
  const int maxval = next_int("maxval");
  if (maxval > 255) throw FormatError("only 8-bit PGM files are supported");
  ++pos;  // single whitespace byte before the raster
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < pos + count) throw FormatError("truncated PGM raster");
  GrayImage img(height, width);
  std::copy_n(reinterpret_cast<const std::uint8_t*>(bytes.data() + pos), count, img.data());
  return img;
}

GrayImage read_pgm(const fs::path& path) {
  try {
    return parse_pgm(read_text(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.data()), static_cast<std::size_t>(image.size()));
  return out;
}

void write_pgm(const fs::path& path, const GrayImage& image) { write_text(path, encode_pgm(image)); }

std::vector<GrayTile> read_tile_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<GrayTile> tiles;
  tiles.reserve(files.size());
  for (const auto& f : files) tiles.push_back({f.stem().string(), read_pgm(f)});
  return tiles;
}

std::string features_csv(const std::vector<FeatureVector>& features) {
  std::string out = "tile_id";
  for (const auto& name : feature_names()) out += "," + name;
  out += "\n";
  for (const auto& f : features) {
    out += f.tile_id;
    for (int i = 0; i < kFeatureCount; ++i) out += "," + format_double(f.values(i));
    out += "\n";
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::vector<FeatureVector> parse_features_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front().size() != kFeatureCount + 1 || rows.front().front() != "tile_id")
    throw FormatError("features CSV must start with the header tile_id,f1,...,f24");
  std::vector<FeatureVector> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != kFeatureCount + 1) throw FormatError("features CSV row " + std::to_string(r) + " has wrong width");
    FeatureVector f;
    f.tile_id = row[0];
    for (int i = 0; i < kFeatureCount; ++i) {
      const std::string& cell = row[static_cast<std::size_t>(i) + 1];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw FormatError("features CSV row " + std::to_string(r) + " has a non-numeric value '" + cell + "'");
      f.values(i) = v;
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace beliefnet
