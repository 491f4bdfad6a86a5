#ifndef RKIT_RECORDS_H
#define RKIT_RECORDS_H

#include <optional>
#include <string>
#include <vector>

namespace rkit {

// One line of the detection output file.
struct DetectionRecord {
  std::string id;
  double prob = 0.0;
  int predicted_label = 0;
};

// One line of the explanation output file. Span fields are absent for
// below-threshold posts.
struct ExplanationRecord {
  std::string id;
  double label_prob = 0.0;
  int predicted_label = 0;
  std::optional<std::string> explanation_text;
  int token_start = -1, token_end = -1, sentence_index = -1;
  std::string mechanism;
  bool fallback = false;
};

std::vector<DetectionRecord> load_detections(const std::string& path);
void write_detections(const std::vector<DetectionRecord>& records,
                      const std::string& path, const std::string& meta_json = "");

std::vector<ExplanationRecord> load_explanations(const std::string& path);
void write_explanations(const std::vector<ExplanationRecord>& records,
                        const std::string& path,
                        const std::string& meta_json = "");

}  // namespace rkit

#endif  // RKIT_RECORDS_H
