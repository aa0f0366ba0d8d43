#include <catch2/catch_amalgamated.hpp>
#include "testmodels.hpp"
TEST_CASE("placeholder test_cli") { CHECK(true); }
