#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace usl3 {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

} // namespace usl3
