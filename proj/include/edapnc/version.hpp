#ifndef EDAPNC_VERSION_HPP
#define EDAPNC_VERSION_HPP

namespace edapnc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace edapnc

#endif
