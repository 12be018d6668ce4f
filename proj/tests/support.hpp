#pragma once

#include <gtest/gtest.h>

#include "kocrs/error.hpp"
#include "kocrs/rational.hpp"

namespace kocrs::testing {

inline Rational R(const char* s) { return Rational::parse(s); }

/// Code of the kocrs::Error thrown by `f`; records a failure when none is thrown.
template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no kocrs::Error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace kocrs::testing
