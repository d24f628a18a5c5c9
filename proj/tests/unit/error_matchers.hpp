#pragma once

#include <gtest/gtest.h>

#include "clusterkit/error.hpp"

// Expects `stmt` to throw clusterkit::Error with the given code.
#define EXPECT_CK_ERROR(stmt, expected_code)                                \
  do {                                                                      \
    try {                                                                   \
      stmt;                                                                 \
      ADD_FAILURE() << "no exception from " #stmt;                          \
    } catch (const clusterkit::Error& e) {                                  \
      EXPECT_EQ(e.code(), expected_code) << e.what();                       \
    }                                                                       \
  } while (0)
