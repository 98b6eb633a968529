#pragma once

#include <gtest/gtest.h>

#include "kirchhoff/error.hpp"

/// Runs f and returns the code of the kirchhoff::Error it throws.
template <typename F>
kirchhoff::Errc code_of(F&& f) {
  try {
    f();
  } catch (const kirchhoff::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected kirchhoff::Error";
  return kirchhoff::Errc::InvalidArgument;
}
