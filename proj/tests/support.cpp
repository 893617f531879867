#include "support.hpp"

#include <cstdlib>
#include <iostream>

namespace orf::test {

Alignment checked_align(const TokenSequence& ref, const TokenSequence& hyp) {
  Alignment a = align(ref, hyp);
  if (!alignment_is_well_formed(a)) {
    std::cerr << "conservation/coverage violated for ref=\"" << ref.render() << "\" hyp=\"" << hyp.render() << "\"\n";
    std::abort();
  }
  return a;
}

}  // namespace orf::test
