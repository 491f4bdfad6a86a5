#ifndef RKIT_RUNCONFIG_H
#define RKIT_RUNCONFIG_H

#include <map>
#include <string>
#include <vector>

namespace rkit {

// Flat key=value configuration file with '#' comments. Unknown keys are
// rejected; command-line flags override file values.
class RunConfig {
 public:
  RunConfig() = default;
  static RunConfig load_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  static const std::vector<std::string>& allowed_keys();

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rkit

#endif  // RKIT_RUNCONFIG_H
