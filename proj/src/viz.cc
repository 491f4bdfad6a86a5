#include "rkit/viz.h"

#include <cstdio>
#include <sstream>

#include "rkit/util.h"

namespace rkit {

namespace {

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string json_for_script(std::string s) {
  // keep "</script>" out of the inline block
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '<' && i + 1 < s.size() && s[i + 1] == '/') {
      out += "<\\/";
      ++i;
    } else {
      out += s[i];
    }
  }
  return out;
}

}  // namespace

void write_attention_html(const NeuralDetector& detector,
                          const std::vector<Post>& posts,
                          const std::string& path,
                          const std::string& meta_json) {
  if (detector.model().config.architecture != Architecture::kBiAttention)
    throw std::runtime_error(
        "visualize: forward_last model has no attention to display");

  std::ostringstream out;
  out << "<!doctype html>\n<html><head><meta charset=\"utf-8\">\n"
      << "<title>attention heatmap</title>\n"
      << "<style>body{font-family:sans-serif;margin:2em;}"
      << ".post{margin-bottom:1.2em;line-height:1.9;}"
      << ".tok{padding:1px 3px;border-radius:3px;}"
      << ".id{color:#666;font-size:80%;margin-right:0.6em;}"
      << ".p{color:#06c;font-size:80%;margin-left:0.6em;}</style>\n"
      << "</head><body>\n<h1>attention heatmap</h1>\n";
  if (!meta_json.empty())
    out << "<script type=\"application/json\" id=\"rkit-meta\">"
        << json_for_script(meta_json) << "</script>\n";

  char buf[64];
  for (const Post& post : posts) {
    if (post.tokens.empty()) continue;
    Prediction pred = detector.predict_post(post);
    const Eigen::VectorXd& a = *pred.alphas;
    double amax = a.size() > 0 ? a.maxCoeff() : 1.0;
    if (amax <= 0.0) amax = 1.0;

    out << "<div class=\"post\"><span class=\"id\">"
        << html_escape(post.id) << "</span>";
    for (int t = 0; t < static_cast<int>(post.tokens.size()); ++t) {
      double opacity = t < a.size() ? a[t] / amax : 0.0;
      std::snprintf(buf, sizeof(buf), "%.3f", opacity);
      out << "<span class=\"tok\" style=\"background:rgba(255,64,64," << buf
          << ")\">"
          << html_escape(post.tokens[static_cast<std::size_t>(t)].surface)
          << "</span> ";
    }
    std::snprintf(buf, sizeof(buf), "%.3f", pred.p);
    out << "<span class=\"p\">p=" << buf << "</span></div>\n";
  }
  out << "</body></html>\n";
  write_file(path, out.str());
}

}  // namespace rkit
