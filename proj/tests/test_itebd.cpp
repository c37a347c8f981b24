#include <doctest.h>

TEST_SUITE("itebd") {
TEST_CASE("placeholder") { CHECK(true); }
}
