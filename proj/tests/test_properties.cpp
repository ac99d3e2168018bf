#include <doctest.h>

#include "properties.hpp"

TEST_SUITE("properties") {

TEST_CASE("randomized properties") {
  for (const auto& o : props::all(200)) {
    CAPTURE(o.name);
    CAPTURE(o.first_failure);
    CHECK(o.cases >= 81);
    CHECK(o.failures == 0);
  }
}

}
