#include "anonmech/fixtures.hpp"

namespace anonmech::fixtures {

Market ex_ration() {
  Market m;
  m.periods = 2;
  m.atoms = {Rational(2, 3), Rational(1)};
  m.mass = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  m.inventory = Inventory::of(Rational(3, 2));
  m.discounts = DiscountSchedule::uniform(2);
  return validate_market(m);
}

Market ex_twogen() {
  Market m;
  m.periods = 2;
  m.atoms = {Rational(1, 2), Rational(1)};
  m.mass = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  m.inventory = Inventory::unbounded();
  m.discounts = DiscountSchedule::uniform(2);
  return validate_market(m);
}

}  // namespace anonmech::fixtures
