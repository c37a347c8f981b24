#include <doctest.h>

TEST_SUITE("parent") {
TEST_CASE("placeholder") { CHECK(true); }
}
