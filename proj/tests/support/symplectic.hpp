#pragma once

#include "shimura/siegel.hpp"
#include "support/random.hpp"

namespace shimura::testing {

/// Random element of Sp_2d(Q) as a product of elementary generators.
inline siegel::SymplecticSimilitude random_sp(Rng &rng, std::size_t d, int factors = 4) {
  QMatrix g = QMatrix::identity(2 * d);
  for (int k = 0; k < factors; ++k) {
    switch (rng.uniform(0, 3)) {
    case 0: g = g * siegel::translation(rng.symmetric_rational(d, 2, 2)).matrix(); break;
    case 1: g = g * siegel::lower_translation(rng.symmetric_rational(d, 2, 2)).matrix(); break;
    case 2: {
      QMatrix a = rng.rational_matrix(d, d, 2, 2);
      if (determinant(a) != 0) g = g * siegel::levi(a).matrix();
      break;
    }
    default: g = g * siegel::involution(d).matrix(); break;
    }
  }
  return siegel::SymplecticSimilitude(g);
}

} // namespace shimura::testing
