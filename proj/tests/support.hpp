#pragma once

#include <doctest.h>

#include "vlp/error.hpp"

// Asserts that `expr` throws vlp::Error carrying `code`.
#define CHECK_ERRC(expr, errc)                 \
  do {                                         \
    bool caught_ = false;                      \
    try {                                      \
      (void)(expr);                            \
    } catch (const vlp::Error& e_) {           \
      caught_ = true;                          \
      CHECK(e_.code() == (errc));              \
    }                                          \
    CHECK_MESSAGE(caught_, "expected " #errc); \
  } while (0)
