#ifndef WIGNERLAB_VERSION_HPP
#define WIGNERLAB_VERSION_HPP

#include <string>

#ifndef WIGNERLAB_GIT_SHA
#define WIGNERLAB_GIT_SHA "unknown"
#endif

namespace wignerlab {

inline constexpr const char* kVersion = "0.1.0";

inline std::string version_string() {
  return std::string(kVersion) + "+" + WIGNERLAB_GIT_SHA;
}

}  // namespace wignerlab

#endif
