#include <doctest.h>

TEST_SUITE("spt") {
TEST_CASE("placeholder") { CHECK(true); }
}
