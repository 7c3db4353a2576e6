#pragma once

#include "gather/poly_table.hpp"

#ifndef GATHER_TEST_TABLE
#define GATHER_TEST_TABLE "data/table.txt"
#endif

namespace test_support {

// The certified table shipped in data/, loaded once per test binary.
inline const gather::PolyTable& table() {
    static const gather::PolyTable t = gather::read_table_file(GATHER_TEST_TABLE);
    return t;
}

}  // namespace test_support
