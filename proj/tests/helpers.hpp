#pragma once

#include <doctest.h>

#include "imvb7/errors.hpp"

// Asserts that evaluating `expr` raises an imvb7::Error carrying `expected`.
#define CHECK_CODE(expr, expected)                                       \
  do {                                                                   \
    try {                                                                \
      (void)(expr);                                                      \
      CHECK_MESSAGE(false, "expected " #expr " to raise " #expected);    \
    } catch (const imvb7::Error& caught_) {                              \
      CHECK_MESSAGE(caught_.code() == (expected), caught_.what());       \
    }                                                                    \
  } while (0)
