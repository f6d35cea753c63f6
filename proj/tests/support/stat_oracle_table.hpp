// SPDX-License-Identifier: Apache-2.0
// Upper-tail probabilities computed with mpmath at 50 digits
// (tests/oracles/tail_probabilities.py).
#pragma once

namespace elorank::testing {

struct ChiSquareProbe {
  double x;
  double df;
  double p;
};

struct FProbe {
  double f;
  double d1;
  double d2;
  double p;
};

inline constexpr ChiSquareProbe kChiSquareOracle[] = {
    {0.5, 1, 0.47950012218695346232},
    {3.857142857142857, 1, 0.049534613435626739092},
    {1.0, 2, 0.6065306597126334236},
    {5.991464547107979, 2, 0.050000000000000073572},
    {10.0, 6, 0.12465201948308114129},
    {12.591587243743977, 6, 0.050000000000000051908},
    {264.56, 6, 3.1626443313952673615e-54},
    {0.1, 10, 0.99999999750204866399},
    {30.0, 20, 0.069853660699409767692},
    {150.0, 120, 0.033073480911304668119},
};

inline constexpr FProbe kFOracle[] = {
    {1.5, 1, 4, 0.287864134726690662},
    {0.5, 2, 10, 0.62092132305915517445},
    {3.0, 3, 30, 0.046064340542210550482},
    {69.63, 6, 693, 8.7268750498022610816e-68},
    {1.0, 6, 693, 0.42415555430317457198},
    {2.1, 6, 693, 0.051272321052421052911},
    {0.2, 5, 5, 0.94903026058507081646},
    {4.0, 1, 1, 0.29516723530086654835},
    {10.0, 10, 2, 0.094269190170084102047},
    {1.2, 50, 60, 0.24830871765896693641},
};

}  // namespace elorank::testing
