#include "owal/io/jsonl.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "owal/error.hpp"
#include "owal/io/number_format.hpp"

namespace owal::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
  throw DataError(origin + ":" + std::to_string(line) + ": " + msg);
}

void require_keys(const json& obj, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const std::string& origin,
                  std::size_t line) {
  for (const char* key : required) {
    if (!obj.contains(key)) fail(origin, line, std::string("missing key \"") + key + "\"");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    const auto in = [&key](std::initializer_list<const char*> list) {
      for (const char* k : list) {
        if (key == k) return true;
      }
      return false;
    };
    if (!in(required) && !in(optional)) {
      fail(origin, line, "unknown key \"" + key + "\"");
    }
  }
}

double finite_number(const json& value, const char* what, const std::string& origin,
                     std::size_t line) {
  if (!value.is_number()) fail(origin, line, std::string(what) + " must be a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) fail(origin, line, std::string(what) + " must be finite");
  return v;
}

std::array<double, 3> triple(const json& value, const char* what, const std::string& origin,
                             std::size_t line) {
  if (!value.is_array() || value.size() != 3) {
    fail(origin, line, std::string(what) + " must be an array of 3 numbers");
  }
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = finite_number(value[i], what, origin, line);
  return out;
}

void check_geometry(const std::array<double, 3>& size, double heading, const std::string& origin,
                    std::size_t line) {
  for (double s : size) {
    if (!(s > 0.0)) fail(origin, line, "size components must be > 0");
  }
  if (heading < -M_PI || heading >= M_PI) {
    fail(origin, line, "heading out of range [-pi, pi)");
  }
}

PredictedBox parse_predicted_box(const json& obj, const std::string& origin, std::size_t line) {
  require_keys(obj, {"label", "confidence", "center", "size", "heading"}, {"scores"}, origin,
               line);
  PredictedBox box;
  if (!obj["label"].is_number_integer()) fail(origin, line, "label must be an integer");
  box.label = obj["label"].get<int>();
  box.confidence = finite_number(obj["confidence"], "confidence", origin, line);
  if (box.confidence < 0.0 || box.confidence > 1.0) {
    fail(origin, line, "confidence out of range [0, 1]");
  }
  box.center = triple(obj["center"], "center", origin, line);
  box.size = triple(obj["size"], "size", origin, line);
  box.heading = finite_number(obj["heading"], "heading", origin, line);
  check_geometry(box.size, box.heading, origin, line);
  if (obj.contains("scores")) {
    if (!obj["scores"].is_array()) fail(origin, line, "scores must be an array");
    std::vector<double> scores;
    scores.reserve(obj["scores"].size());
    for (const json& s : obj["scores"]) {
      scores.push_back(finite_number(s, "scores entry", origin, line));
    }
    box.scores = std::move(scores);
  }
  return box;
}

GroundTruthBox parse_truth_box(const json& obj, const std::string& origin, std::size_t line) {
  require_keys(obj, {"label", "center", "size", "heading"}, {}, origin, line);
  GroundTruthBox box;
  if (!obj["label"].is_number_integer()) fail(origin, line, "label must be an integer");
  box.label = obj["label"].get<int>();
  box.center = triple(obj["center"], "center", origin, line);
  box.size = triple(obj["size"], "size", origin, line);
  box.heading = finite_number(obj["heading"], "heading", origin, line);
  check_geometry(box.size, box.heading, origin, line);
  return box;
}

json parse_line(const std::string& line_text, const std::string& origin, std::size_t line) {
  json obj;
  try {
    obj = json::parse(line_text);
  } catch (const json::exception& e) {
    fail(origin, line, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) fail(origin, line, "each line must be a JSON object");
  return obj;
}

void append_array3(std::string& out, const std::array<double, 3>& v) {
  out += '[';
  for (std::size_t i = 0; i < 3; ++i) {
    if (i > 0) out += ',';
    out += format_double(v[i], /*full17=*/true);
  }
  out += ']';
}

std::string escape_json(const std::string& s) {
  return json(s).dump();
}

}  // namespace

std::vector<FrameRecord> parse_prediction_dump_text(const std::string& text,
                                                    const std::string& origin) {
  std::vector<FrameRecord> records;
  std::istringstream in(text);
  std::string line_text;
  std::size_t line = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line_text)) {
    ++line;
    if (line_text.empty()) continue;
    const json obj = parse_line(line_text, origin, line);
    require_keys(obj, {"frame_id", "boxes"}, {"embedding"}, origin, line);
    FrameRecord record;
    if (!obj["frame_id"].is_string()) fail(origin, line, "frame_id must be a string");
    record.frame_id = obj["frame_id"].get<std::string>();
    if (record.frame_id.empty()) fail(origin, line, "frame_id must be non-empty");
    if (!seen.emplace(record.frame_id, line).second) {
      fail(origin, line, "duplicate frame_id \"" + record.frame_id + "\"");
    }
    if (!obj["boxes"].is_array()) fail(origin, line, "boxes must be an array");
    for (const json& b : obj["boxes"]) {
      if (!b.is_object()) fail(origin, line, "boxes entries must be objects");
      record.boxes.push_back(parse_predicted_box(b, origin, line));
    }
    if (obj.contains("embedding")) {
      if (!obj["embedding"].is_array()) fail(origin, line, "embedding must be an array");
      std::vector<double> emb;
      emb.reserve(obj["embedding"].size());
      for (const json& v : obj["embedding"]) {
        emb.push_back(finite_number(v, "embedding entry", origin, line));
      }
      record.embedding = std::move(emb);
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<FrameRecord> parse_prediction_dump(const std::string& path) {
  return parse_prediction_dump_text(read_file(path), path);
}

std::string prediction_dump_to_jsonl(const std::vector<FrameRecord>& records) {
  std::string out;
  for (const FrameRecord& record : records) {
    out += "{\"frame_id\":" + escape_json(record.frame_id) + ",\"boxes\":[";
    for (std::size_t i = 0; i < record.boxes.size(); ++i) {
      const PredictedBox& box = record.boxes[i];
      if (i > 0) out += ',';
      out += "{\"label\":" + format_int(box.label);
      out += ",\"confidence\":" + format_double(box.confidence, true);
      out += ",\"center\":";
      append_array3(out, box.center);
      out += ",\"size\":";
      append_array3(out, box.size);
      out += ",\"heading\":" + format_double(box.heading, true);
      if (box.scores) {
        out += ",\"scores\":[";
        for (std::size_t j = 0; j < box.scores->size(); ++j) {
          if (j > 0) out += ',';
          out += format_double((*box.scores)[j], true);
        }
        out += ']';
      }
      out += '}';
    }
    out += ']';
    if (record.embedding) {
      out += ",\"embedding\":[";
      for (std::size_t j = 0; j < record.embedding->size(); ++j) {
        if (j > 0) out += ',';
        out += format_double((*record.embedding)[j], true);
      }
      out += ']';
    }
    out += "}\n";
  }
  return out;
}

std::map<std::string, std::vector<GroundTruthBox>> parse_truth_dump_text(
    const std::string& text, const std::string& origin) {
  std::map<std::string, std::vector<GroundTruthBox>> truth;
  std::istringstream in(text);
  std::string line_text;
  std::size_t line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    if (line_text.empty()) continue;
    const json obj = parse_line(line_text, origin, line);
    require_keys(obj, {"frame_id", "boxes"}, {}, origin, line);
    if (!obj["frame_id"].is_string()) fail(origin, line, "frame_id must be a string");
    const std::string frame_id = obj["frame_id"].get<std::string>();
    if (frame_id.empty()) fail(origin, line, "frame_id must be non-empty");
    if (truth.count(frame_id) > 0) {
      fail(origin, line, "duplicate frame_id \"" + frame_id + "\"");
    }
    if (!obj["boxes"].is_array()) fail(origin, line, "boxes must be an array");
    std::vector<GroundTruthBox> boxes;
    for (const json& b : obj["boxes"]) {
      if (!b.is_object()) fail(origin, line, "boxes entries must be objects");
      boxes.push_back(parse_truth_box(b, origin, line));
    }
    truth.emplace(frame_id, std::move(boxes));
  }
  return truth;
}

std::map<std::string, std::vector<GroundTruthBox>> parse_truth_dump(const std::string& path) {
  return parse_truth_dump_text(read_file(path), path);
}

std::string truth_dump_to_jsonl(const std::map<std::string, std::vector<GroundTruthBox>>& truth) {
  std::string out;
  for (const auto& [frame_id, boxes] : truth) {
    out += "{\"frame_id\":" + escape_json(frame_id) + ",\"boxes\":[";
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const GroundTruthBox& box = boxes[i];
      if (i > 0) out += ',';
      out += "{\"label\":" + format_int(box.label);
      out += ",\"center\":";
      append_array3(out, box.center);
      out += ",\"size\":";
      append_array3(out, box.size);
      out += ",\"heading\":" + format_double(box.heading, true) + "}";
    }
    out += "]}\n";
  }
  return out;
}

ClassCatalog parse_catalog_text(const std::string& text, const std::string& origin) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(origin + ": malformed JSON: " + e.what());
  }
  if (!obj.is_object()) throw DataError(origin + ": catalog must be a JSON object");
  require_keys(obj, {"known_ids", "unknown_ids"}, {"discovered"}, origin, 1);

  const auto int_list = [&](const char* key) {
    if (!obj[key].is_array()) throw DataError(origin + ": " + key + " must be an array");
    std::vector<int> out;
    for (const json& v : obj[key]) {
      if (!v.is_number_integer()) throw DataError(origin + ": " + key + " entries must be integers");
      out.push_back(v.get<int>());
    }
    return out;
  };

  std::set<int> discovered;
  if (obj.contains("discovered")) {
    for (int id : int_list("discovered")) discovered.insert(id);
  }
  try {
    return ClassCatalog(int_list("known_ids"), int_list("unknown_ids"), std::move(discovered));
  } catch (const std::invalid_argument& e) {
    throw DataError(origin + ": " + e.what());
  }
}

ClassCatalog parse_catalog(const std::string& path) {
  return parse_catalog_text(read_file(path), path);
}

std::string catalog_to_json(const ClassCatalog& catalog) {
  json obj;
  obj["known_ids"] = catalog.known_ids();
  obj["unknown_ids"] = catalog.unknown_ids();
  obj["discovered"] = std::vector<int>(catalog.discovered().begin(), catalog.discovered().end());
  return obj.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot write file: " + tmp.string());
    }
    out << content;
  }
  fs::rename(tmp, target);
}

}  // namespace owal::io
