#pragma once

#include <map>
#include <string>
#include <vector>

#include "owal/core/catalog.hpp"
#include "owal/core/frame.hpp"

namespace owal::io {

// Detector prediction dumps: JSON Lines, one frame per line.
//   {"frame_id": "f1", "boxes": [{"label": 1, "confidence": 0.9,
//    "center": [x,y,z], "size": [l,w,h], "heading": t, "scores": [...]}],
//    "embedding": [...]}
// scores and embedding are optional. Unknown keys, non-finite numbers,
// out-of-range confidences/headings and non-positive sizes are rejected with
// a line-precise error. Floats are written with 17 significant digits so
// write -> parse -> write is byte-identical.

std::vector<FrameRecord> parse_prediction_dump(const std::string& path);
std::vector<FrameRecord> parse_prediction_dump_text(const std::string& text,
                                                    const std::string& origin);

std::string prediction_dump_to_jsonl(const std::vector<FrameRecord>& records);

// Ground-truth dumps share the schema minus confidence/scores:
//   {"frame_id": "f1", "boxes": [{"label": 4, "center": [...], "size": [...],
//    "heading": t}]}
std::map<std::string, std::vector<GroundTruthBox>> parse_truth_dump(const std::string& path);
std::map<std::string, std::vector<GroundTruthBox>> parse_truth_dump_text(
    const std::string& text, const std::string& origin);

std::string truth_dump_to_jsonl(const std::map<std::string, std::vector<GroundTruthBox>>& truth);

// catalog.json: {"known_ids": [...], "unknown_ids": [...], "discovered": [...]}
// (discovered optional).
ClassCatalog parse_catalog(const std::string& path);
ClassCatalog parse_catalog_text(const std::string& text, const std::string& origin);
std::string catalog_to_json(const ClassCatalog& catalog);

// Whole-file helpers; writes are atomic (temp file then rename).
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace owal::io
