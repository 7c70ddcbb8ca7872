#pragma once

#include <stdexcept>
#include <string>

namespace vwords {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when lip segmentation yields an empty mask for a frame.
class LipsNotFound : public Error {
public:
  explicit LipsNotFound(const std::string& what = "lips not found this frame") : Error(what) {}
};

}  // namespace vwords
