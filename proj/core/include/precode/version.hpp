#ifndef PRECODE_VERSION_HPP
#define PRECODE_VERSION_HPP

namespace precode {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace precode

#endif  // PRECODE_VERSION_HPP
