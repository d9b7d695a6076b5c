#include "beliefnet/frame.hpp"

#include <algorithm>
#include <stdexcept>

namespace beliefnet {

namespace {
const std::vector<std::string> kNoLabels;
}

Frame::Frame(std::vector<std::string> labels) {
  if (labels.empty()) throw std::invalid_argument("frame must contain at least one class");
  if (labels.size() > kMaxFrameSize)
    throw std::invalid_argument("frame has " + std::to_string(labels.size()) +
                                " classes, at most 16 are supported");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw std::invalid_argument("frame labels must be non-empty");
    if (labels[i] == "{}" || labels[i].find('|') != std::string::npos)
      throw std::invalid_argument("frame label '" + labels[i] + "' uses a reserved character");
    for (std::size_t j = 0; j < i; ++j)
      if (labels[i] == labels[j]) throw std::invalid_argument("duplicate frame label '" + labels[i] + "'");
  }
  labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

const std::vector<std::string>& Frame::labels() const { return labels_ ? *labels_ : kNoLabels; }

int Frame::find(std::string_view name) const {
  const auto& ls = labels();
  auto it = std::find(ls.begin(), ls.end(), name);
  return it == ls.end() ? -1 : static_cast<int>(it - ls.begin());
}

std::size_t Frame::index_of(std::string_view name) const {
  int i = find(name);
  if (i < 0) throw std::invalid_argument("unknown class label '" + std::string(name) + "'");
  return static_cast<std::size_t>(i);
}

std::vector<FocalSet> Frame::singletons() const {
  std::vector<FocalSet> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(FocalSet::singleton(i));
  return out;
}

std::string Frame::format(FocalSet s) const {
  if (s.is_empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!s.contains(i)) continue;
    if (!out.empty()) out += '|';
    out += label(i);
  }
  return out;
}

FocalSet Frame::parse(std::string_view text) const {
  if (text == "{}") return FocalSet::empty();
  FocalSet out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t bar = text.find('|', start);
    if (bar == std::string_view::npos) bar = text.size();
    out = out | singleton(text.substr(start, bar - start));
    start = bar + 1;
  }
  return out;
}

bool operator==(const Frame& a, const Frame& b) {
  return a.labels_ == b.labels_ || a.labels() == b.labels();
}

}  // namespace beliefnet
