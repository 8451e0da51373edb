#pragma once

#include <string>
#include <vector>

#include "doctest.h"
#include "fairtt/error.hpp"
#include "fairtt/instance.hpp"

namespace support {

inline std::string fixture(const std::string& name) { return std::string(FAIRTT_FIXTURES) + "/" + name; }

inline fairtt::Instance toy() { return fairtt::load_instance(fixture("toy.ctt")); }

// Expands "v^k" tokens, e.g. rle("5^2,0^3") == {5,5,0,0,0}.
inline std::vector<int> rle(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string tok = text.substr(pos, end - pos);
    const auto caret = tok.find('^');
    const int value = std::stoi(tok.substr(0, caret));
    const int count = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
    out.insert(out.end(), static_cast<std::size_t>(count), value);
    pos = end + 1;
  }
  return out;
}

template <class F>
fairtt::ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const fairtt::Error& e) {
    return e.code();
  }
  FAIL("expected fairtt::Error");
  return fairtt::ErrorCode::InvalidArgument;
}

}  // namespace support
