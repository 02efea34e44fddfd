#pragma once

#include <gtest/gtest.h>

#include "kgdf/error.hpp"
#include "test_paths.hpp"

// Asserts that `stmt` throws kgdf::Error carrying `code`.
#define EXPECT_ERRC(stmt, errc)                                                        \
  do {                                                                                 \
    try {                                                                              \
      stmt;                                                                            \
      ADD_FAILURE() << #stmt " did not throw";                                         \
    } catch (const ::kgdf::Error& kgdf_err_) {                                         \
      EXPECT_EQ(::kgdf::to_string(kgdf_err_.code()), ::kgdf::to_string(errc))          \
          << kgdf_err_.what();                                                         \
    }                                                                                  \
  } while (0)
