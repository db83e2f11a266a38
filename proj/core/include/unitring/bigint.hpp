#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace unitring {

using BigInt = boost::multiprecision::cpp_int;

}  // namespace unitring
