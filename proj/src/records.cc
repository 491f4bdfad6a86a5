#include "rkit/records.h"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rkit {

namespace {

template <typename Fn>
void for_each_jsonl(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad JSON: " + e.what());
    }
    if (j.contains("_meta")) continue;
    fn(j, lineno);
  }
}

}  // namespace

std::vector<DetectionRecord> load_detections(const std::string& path) {
  std::vector<DetectionRecord> out;
  for_each_jsonl(path, [&](const nlohmann::json& j, long) {
    DetectionRecord r;
    r.id = j.at("id").get<std::string>();
    r.prob = j.at("prob").get<double>();
    r.predicted_label = j.at("predicted_label").get<int>();
    out.push_back(std::move(r));
  });
  return out;
}

void write_detections(const std::vector<DetectionRecord>& records,
                      const std::string& path, const std::string& meta_json) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  if (!meta_json.empty()) out << meta_json << "\n";
  for (const DetectionRecord& r : records) {
    nlohmann::json j{{"id", r.id},
                     {"prob", r.prob},
                     {"predicted_label", r.predicted_label}};
    out << j.dump() << "\n";
  }
}

std::vector<ExplanationRecord> load_explanations(const std::string& path) {
  std::vector<ExplanationRecord> out;
  for_each_jsonl(path, [&](const nlohmann::json& j, long) {
    ExplanationRecord r;
    r.id = j.at("id").get<std::string>();
    r.label_prob = j.at("label_prob").get<double>();
    r.predicted_label = j.at("predicted_label").get<int>();
    if (j.contains("explanation_text") && !j.at("explanation_text").is_null()) {
      r.explanation_text = j.at("explanation_text").get<std::string>();
      r.token_start = j.at("token_start").get<int>();
      r.token_end = j.at("token_end").get<int>();
      r.sentence_index = j.at("sentence_index").get<int>();
    }
    r.mechanism = j.value("mechanism", "");
    r.fallback = j.value("fallback", false);
    out.push_back(std::move(r));
  });
  return out;
}

void write_explanations(const std::vector<ExplanationRecord>& records,
                        const std::string& path, const std::string& meta_json) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  if (!meta_json.empty()) out << meta_json << "\n";
  for (const ExplanationRecord& r : records) {
    nlohmann::json j;
    j["id"] = r.id;
    j["label_prob"] = r.label_prob;
    j["predicted_label"] = r.predicted_label;
    if (r.explanation_text) {
      j["explanation_text"] = *r.explanation_text;
      j["token_start"] = r.token_start;
      j["token_end"] = r.token_end;
      j["sentence_index"] = r.sentence_index;
    }
    j["mechanism"] = r.mechanism;
    j["fallback"] = r.fallback;
    out << j.dump() << "\n";
  }
}

}  // namespace rkit
