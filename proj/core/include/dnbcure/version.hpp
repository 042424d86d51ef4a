#ifndef DNBCURE_VERSION_HPP
#define DNBCURE_VERSION_HPP

namespace dnbcure {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
