#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "skiprec/losses.hpp"

using namespace skiprec;

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kLn2 = std::log(2.0);
}  // namespace

TEST_CASE("pairwise ranking loss") {
  CHECK(std::abs(bpr_pair_loss(2.0, 2.0) - kLn2) <= 1e-15);
  CHECK(std::abs(bpr_pair_loss(1.0, 0.0) - 0.313261687518223) <= 1e-14);
  const double tiny = bpr_pair_loss(40.0, 0.0);
  CHECK(tiny > 0.0);
  CHECK(std::abs(tiny - std::exp(-40.0)) <= 1e-30);
  CHECK(bpr_pair_loss(-500.0, 500.0) == doctest::Approx(1000.0));
}

TEST_CASE("binary cross-entropy") {
  CHECK(std::abs(bce_loss(0.0, 1) - kLn2) <= 1e-15);
  CHECK(std::abs(bce_loss(0.0, 0) - kLn2) <= 1e-15);
  CHECK(std::abs(bce_loss(2.0, 1) - 0.126928011042973) <= 1e-14);
  for (double z : {-500.0, -50.0, 50.0, 500.0})
    for (int y : {0, 1}) CHECK(std::isfinite(bce_loss(z, y)));
  CHECK(bce_loss(500.0, 0) == doctest::Approx(500.0));
}

TEST_CASE("combined loss") {
  CHECK(combined_loss(0.6, 0.2, 0.5) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(combined_loss(0.6, 0.2, 1.0) == 0.6);
  CHECK(combined_loss(0.6, 0.2, 0.0) == 0.2);
}

TEST_CASE("sigmoid is symmetric and saturates cleanly") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) == 0.0);
  CHECK(sigmoid(3.0) + sigmoid(-3.0) == doctest::Approx(1.0));
}

TEST_CASE("hierarchical BPR averages its two terms") {
  const std::vector<TripletLogits> equal{{1.5, 1.5, 1.5}, {-2.0, -2.0, -2.0}};
  const auto e = hierarchical_bpr(equal);
  CHECK(std::abs(e.bpr - kLn2) <= 1e-12);
  CHECK_FALSE(e.hl_missing);

  const std::vector<TripletLogits> mixed{{1.0, 0.0, 0.0}, {1.0, kNaN, 0.0}};
  const auto m = hierarchical_bpr(mixed);
  CHECK(m.bpr_hl == doctest::Approx(0.313261687518223).epsilon(1e-13));
  CHECK(m.bpr_hn == doctest::Approx(0.313261687518223).epsilon(1e-13));
  CHECK(m.bpr == doctest::Approx(0.313261687518223).epsilon(1e-13));

  const std::vector<TripletLogits> no_less{{1.0, kNaN, 0.0}, {2.0, kNaN, 2.0}};
  const auto n = hierarchical_bpr(no_less);
  CHECK(n.hl_missing);
  CHECK_FALSE(n.hn_missing);
  CHECK(n.bpr_hl == 0.0);
  CHECK(n.bpr == doctest::Approx(n.bpr_hn / 2).epsilon(1e-15));

  const std::vector<TripletLogits> none{{1.0, kNaN, kNaN}};
  const auto z = hierarchical_bpr(none);
  CHECK(z.hl_missing);
  CHECK(z.hn_missing);
  CHECK(z.bpr == 0.0);
}

TEST_CASE("losses stay finite for extreme logits") {
  for (double a : {-500.0, 0.0, 500.0})
    for (double b : {-500.0, 0.0, 500.0}) {
      CHECK(std::isfinite(bpr_pair_loss(a, b)));
      const std::vector<TripletLogits> t{{a, b, -a}};
      CHECK(std::isfinite(hierarchical_bpr(t).bpr));
    }
}
