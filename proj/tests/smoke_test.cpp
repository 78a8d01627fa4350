#include "doctest.h"

#include "minicheck/registry.hpp"

TEST_CASE("registry is populated") {
    CHECK(minicheck::registry().size() == 37);
}
