#ifndef PKSFV_VERSION_HPP
#define PKSFV_VERSION_HPP

namespace pksfv {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace pksfv

#endif
