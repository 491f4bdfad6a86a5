#include "rkit/runconfig.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace rkit {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<std::string>& RunConfig::allowed_keys() {
  static const std::vector<std::string> keys = {
      "model",          "architecture",      "embed-dim",
      "hidden",         "max-len",           "dropout",
      "attention-l2",   "lr",                "batch-size",
      "epochs",         "seed",              "threshold",
      "val-fraction",   "min-count",         "mechanism",
      "k",              "policy",            "lime-samples",
      "lime-kernel-width", "lime-ridge",     "lime-seed",
      "logistic-l2",    "logistic-epochs",   "logistic-lr",
      "logistic-batch", "data",              "embeddings",
      "checkpoint",     "parser-model",      "out",
      "n",              "crisis-rate",       "iterations",
      "treebank",       "synth-sentences",   "heldout",
  };
  return keys;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  long lineno = 0;
  const auto& allowed = allowed_keys();
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown config key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw std::runtime_error("config key not set: " + key);
  return it->second;
}

std::string RunConfig::get_or(const std::string& key,
                              const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

}  // namespace rkit
